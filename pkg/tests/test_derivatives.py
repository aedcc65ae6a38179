import random

from conftest import C_EXPR, C_POMSET
from oracles import all_pomsets, congruent_variant, random_exprs
from pomkleene import automaton as au
from pomkleene import pomset as pm
from pomkleene.derivatives import (SyntacticStateSpace, candidate_forks,
                                   delta_deriv, expr_to_pa, gamma_deriv)
from pomkleene.expr import (EMPTY_SUM, ONE, ZERO, Dot, Letter, Parallel, Plus,
                            Star, alphabet, enumerate_language, is_empty,
                            normalize, nullable, parallel_depth, parse)

a, b, c = Letter("a"), Letter("b"), Letter("c")


def test_delta_examples():
    assert delta_deriv(b, "a") == ZERO
    assert delta_deriv(a, "a") == ONE
    assert delta_deriv(Dot(a, b), "a") == Plus(Dot(ONE, b), ZERO)
    assert delta_deriv(Star(a), "a") == Dot(ONE, Star(a))


def test_gamma_examples():
    assert gamma_deriv(Parallel(a, b), (a, b)) == Plus(Plus(ONE, ZERO), ZERO)
    assert gamma_deriv(Parallel(a, b), (b, a)) == Plus(Plus(ONE, ZERO), ZERO)
    assert gamma_deriv(a, (a, b)) == ZERO
    assert gamma_deriv(Dot(Parallel(a, b), c), (a, b)) == Plus(Dot(Plus(Plus(ONE, ZERO), ZERO), c), ZERO)
    # the congruence has no unit law for 1
    assert normalize(gamma_deriv(Dot(Parallel(a, b), c), (a, b))) == Dot(ONE, c)


def test_candidate_forks_examples():
    assert candidate_forks(normalize(parse("a||b"))) == [(a, b)]
    assert candidate_forks(normalize(parse("a.b"))) == []
    assert candidate_forks(normalize(parse("(a||b) + (a||0)"))) == [(a, b)]


def test_compile_examples():
    zero = expr_to_pa(ZERO)
    assert len(zero.pa.names) == 1 and zero.start == zero.pa.sink()
    assert not zero.accepts(pm.Primitive("a"))
    one = expr_to_pa(a)
    assert set(one.pa.names) == {"a", "1", "0"}
    assert [one.pa.names[q] for q in one.pa.finals] == ["1"]
    for u in all_pomsets(3, ["a"]):
        assert one.accepts(u) == (u == pm.Primitive("a"))
    cm = expr_to_pa(parse(C_EXPR))
    lang = {u for u in all_pomsets(4, sorted(cm.pa.alphabet)) if cm.accepts(u)}
    assert lang == {pm.parse_pomset(C_POMSET)}


def test_state_labels_and_start():
    compiled = expr_to_pa(parse("a.b"))
    assert compiled.state_labels[compiled.start] == "a.b"
    space = SyntacticStateSpace({"a", "b"})
    assert space.sink() == EMPTY_SUM
    assert space.gamma(normalize(parse("a||b")), (a, ZERO)) == EMPTY_SUM


def test_cap_is_enforced():
    try:
        expr_to_pa(parse("(a.b.c)*"), cap=2)
    except au.CapExceeded as exc:
        assert exc.cap == 2
    else:
        raise AssertionError("cap not enforced")


def test_wider_alphabet():
    compiled = expr_to_pa(a, symbols=["b"])
    assert compiled.pa.alphabet == {"a", "b"}
    assert not compiled.accepts(pm.Primitive("b"))


def test_representative_independence():
    rng = random.Random(21)
    for e in random_exprs(22, 150):
        f = congruent_variant(e, rng)
        for s in "abc":
            assert normalize(delta_deriv(e, s)) == normalize(delta_deriv(f, s))
        for phi in candidate_forks(normalize(e)):
            assert normalize(gamma_deriv(e, phi)) == normalize(gamma_deriv(f, phi))
            flipped = (phi[1], phi[0])
            assert normalize(gamma_deriv(e, phi)) == normalize(gamma_deriv(e, flipped))


def _compiled_language(compiled, n):
    sample = all_pomsets(n, sorted(compiled.pa.alphabet))
    return {u for u in sample if compiled.accepts(u)}


def test_soundness_on_random_expressions():
    for e in random_exprs(23, 80, max_size=5):
        compiled = expr_to_pa(e, symbols="abc")
        assert _compiled_language(compiled, 4) == enumerate_language(e, 4)


def test_compilation_is_homomorphic():
    exprs = random_exprs(24, 40, max_size=3)
    for e, f in zip(exprs[::2], exprs[1::2]):
        le = _compiled_language(expr_to_pa(e, symbols="abc"), 3)
        lf = _compiled_language(expr_to_pa(f, symbols="abc"), 3)
        assert _compiled_language(expr_to_pa(Plus(e, f), symbols="abc"), 3) == le | lf
        seqs = {pm.seq_compose(u, v) for u in le for v in lf if pm.size(u) + pm.size(v) <= 3}
        assert _compiled_language(expr_to_pa(Dot(e, f), symbols="abc"), 3) == seqs


def test_compiled_structure():
    for e in random_exprs(25, 80):
        compiled = expr_to_pa(e)
        pa = compiled.pa
        labels = [parse(name) for name in pa.names]
        order = au.fork_order(pa)
        for q in pa.states:
            # finality is nullability of the label
            assert pa.is_final(q) == nullable(labels[q])
            # the sink is the only state with an empty language
            assert is_empty(labels[q]) == (q == pa.sink())
            for r, s in au.support(pa, q):
                assert parallel_depth(labels[r]) < parallel_depth(labels[q])
                assert parallel_depth(labels[s]) < parallel_depth(labels[q])
        for r, q in order.pairs:
            assert parallel_depth(labels[r]) < parallel_depth(labels[q])
        assert au.is_closed(pa, pa.states)


def test_compile_is_deterministic():
    e = parse(C_EXPR)
    assert expr_to_pa(e).pa.dumps() == expr_to_pa(e).pa.dumps()
    assert alphabet(e) == expr_to_pa(e).pa.alphabet
