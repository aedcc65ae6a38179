import random

import pytest
from hypothesis import given, settings

from conftest import C_EXPR, C_POMSET, exprs
from oracles import congruent_variant, random_exprs
from pomkleene import pomset as pm
from pomkleene.expr import (EMPTY_SUM, ONE, ZERO, Dot, ExprSyntaxError, Letter,
                            Parallel, Plus, Star, congruent, embed,
                            enumerate_language, expr_size, is_empty,
                            language_width, normalize, nullable,
                            parallel_depth, parse)

a, b, c = Letter("a"), Letter("b"), Letter("c")


def test_parse_examples():
    e = parse(C_EXPR)
    assert e == Dot(Dot(Letter("prepare"), Parallel(Letter("bake"), Letter("caramelize"))),
                    Letter("glaze"))
    assert parse("0") == ZERO
    assert parse("a*||b") == Parallel(Star(a), b)


def test_parse_precedence_and_associativity():
    assert parse("a+b.c") == Plus(a, Dot(b, c))
    assert parse("a.b||c") == Parallel(Dot(a, b), c)
    assert parse("a||b+c") == Plus(Parallel(a, b), c)
    assert parse("a.b.c") == Dot(Dot(a, b), c)
    assert parse("a+b+c") == Plus(Plus(a, b), c)
    assert parse("a**") == Star(Star(a))
    assert parse("(a+b)*") == Star(Plus(a, b))


@pytest.mark.parametrize("text,column", [("a++", 3), ("", 1), ("(a", 3), ("a $", 3), ("a)", 2)])
def test_syntax_errors_carry_column(text, column):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.column == column


@given(exprs)
def test_printer_round_trips(e):
    assert parse(str(e)) == e


def test_nullable_examples():
    assert nullable(ONE)
    assert nullable(Star(ZERO))
    assert not nullable(Parallel(a, Star(b)))
    assert nullable(Parallel(ONE, Star(b)))


def test_normalize_examples():
    assert normalize(parse("0.a + b + b")) == b
    assert normalize(parse("(a+b)+a")) == normalize(parse("b+a"))
    assert str(normalize(parse("(a+b)+a"))) == "a + b"
    assert normalize(parse("a || (0.b)")) == EMPTY_SUM
    assert str(EMPTY_SUM) == "0"


def test_congruent_examples():
    assert congruent(parse("a+0"), a)
    assert not congruent(parse("a.b"), parse("b.a"))
    assert not congruent(parse("a||b"), parse("b||a"))


def test_is_empty_examples():
    assert is_empty(parse("0.a*"))
    assert not is_empty(parse("a+0"))
    assert not is_empty(Star(ZERO))


def test_parallel_depth_examples():
    assert parallel_depth(a) == 1
    assert parallel_depth(ONE) == 0
    assert parallel_depth(parse("0.(a||b)")) == 0
    assert parallel_depth(parse("a||(b||c)")) == 3


def test_enumerate_examples():
    C = pm.parse_pomset(C_POMSET)
    assert enumerate_language(parse(C_EXPR), 4) == {C}
    assert enumerate_language(Star(a), 2) == {pm.EMPTY, pm.Primitive("a"), pm.parse_pomset("a.a")}
    assert enumerate_language(ZERO, 10) == frozenset()


def test_language_width_examples():
    c_minus = pm.parse_pomset(C_POMSET)
    c_plus = pm.seq_compose(c_minus, pm.Primitive("sprinkle"))
    assert language_width({c_minus, c_plus}) == 2
    assert language_width(set()) == 0
    assert language_width(enumerate_language(parse("a||a||a"), 3)) == 3


def test_expr_size_counts_nodes():
    assert expr_size(parse("a")) == 1
    assert expr_size(parse("(a+b)*")) == 4


@settings(max_examples=150)
@given(exprs, exprs)
def test_enumeration_is_homomorphic(e, f):
    n = 4
    le, lf = enumerate_language(e, n), enumerate_language(f, n)
    assert enumerate_language(Plus(e, f), n) == le | lf
    seqs = {pm.seq_compose(u, v) for u in le for v in lf if pm.size(u) + pm.size(v) <= n}
    assert enumerate_language(Dot(e, f), n) == seqs
    pars = {pm.par_compose(u, v) for u in le for v in lf if pm.size(u) + pm.size(v) <= n}
    assert enumerate_language(Parallel(e, f), n) == pars


@given(exprs)
def test_nullable_matches_enumeration(e):
    assert nullable(e) == (pm.EMPTY in enumerate_language(e, 0))


@given(exprs)
def test_normalize_is_idempotent(e):
    n = normalize(e)
    assert normalize(n) == n
    assert normalize(embed(n)) == n


def test_congruent_variants_keep_depth_and_language():
    rng = random.Random(11)
    for e in random_exprs(5, 150):
        f = congruent_variant(e, rng)
        assert congruent(e, f)
        assert parallel_depth(e) == parallel_depth(f)
        assert enumerate_language(e, 4) == enumerate_language(f, 4)


def test_star_enumeration_reaches_fixpoint():
    lang = enumerate_language(parse("(a+1)*"), 3)
    assert lang == {pm.EMPTY, pm.parse_pomset("a"), pm.parse_pomset("a.a"),
                    pm.parse_pomset("a.a.a")}
