"""Series-rational expressions.

Expressions are immutable trees.  Besides the seven constructors of the
grammar there is an n-ary ``Sum`` node; it only appears in normal forms
(the empty sum is the normal form of every expression denoting nothing).

The additive congruence identifies expressions up to associativity,
commutativity and idempotence of ``+``, its unit ``0``, and annihilation of
``.`` and ``||`` by ``0``.  :func:`normalize` picks one representative per
class, so deciding the congruence is a comparison of normal forms.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable

from . import pomset as pm


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at column {position + 1}: {message}")
        self.position = position
        self.column = position + 1


# precedence levels used by the printer
_SUM, _PAR, _DOT, _STAR, _ATOM = range(5)


class Expr:
    __slots__ = ("_hash", "_text")

    def _children(self) -> tuple:
        return ()

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._fields() == other._fields()

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        text = getattr(self, "_text", None)
        if text is None:
            text = self._render()
            object.__setattr__(self, "_text", text)
        return text

    def __repr__(self) -> str:
        return f"{type(self).__name__}<{self}>"

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def _wrap(self, level: int) -> str:
        return str(self) if self._level() >= level else f"({self})"

    # operator sugar for building expressions in code and tests
    def __add__(self, other: "Expr") -> "Expr":
        return Plus(self, other)

    def __mul__(self, other: "Expr") -> "Expr":
        return Dot(self, other)

    def __or__(self, other: "Expr") -> "Expr":
        return Parallel(self, other)


class _Const(Expr):
    __slots__ = ()
    _symbol = ""

    def __init__(self):
        object.__setattr__(self, "_hash", hash(type(self).__name__))
        object.__setattr__(self, "_text", self._symbol)

    def _fields(self):
        return ()

    def _level(self):
        return _ATOM

    def _render(self):
        return self._symbol


class Zero(_Const):
    __slots__ = ()
    _symbol = "0"


class One(_Const):
    __slots__ = ()
    _symbol = "1"


class Letter(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("Letter", name)))
        object.__setattr__(self, "_text", name)

    def _fields(self):
        return (self.name,)

    def _level(self):
        return _ATOM

    def _render(self):
        return self.name


class _Binary(Expr):
    __slots__ = ("left", "right")
    _op = ""
    _prec = 0

    def __init__(self, left: Expr, right: Expr):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "_hash", hash((type(self).__name__, left._hash, right._hash)))
        object.__setattr__(self, "_text", None)

    def _fields(self):
        return (self.left, self.right)

    def _children(self):
        return (self.left, self.right)

    def _level(self):
        return self._prec

    def _render(self):
        # left associative: the right operand needs brackets at equal level
        return f"{self.left._wrap(self._prec)}{self._op}{self.right._wrap(self._prec + 1)}"


class Plus(_Binary):
    __slots__ = ()
    _op = " + "
    _prec = _SUM


class Dot(_Binary):
    __slots__ = ()
    _op = "."
    _prec = _DOT


class Parallel(_Binary):
    __slots__ = ()
    _op = " || "
    _prec = _PAR


class Star(Expr):
    __slots__ = ("body",)

    def __init__(self, body: Expr):
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "_hash", hash(("Star", body._hash)))
        object.__setattr__(self, "_text", None)

    def _fields(self):
        return (self.body,)

    def _children(self):
        return (self.body,)

    def _level(self):
        return _STAR

    def _render(self):
        return f"{self.body._wrap(_STAR)}*"


class Sum(Expr):
    """n-ary sum; ``Sum(())`` denotes the empty language."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Expr]):
        terms = tuple(terms)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", hash(("Sum",) + tuple(t._hash for t in terms)))
        object.__setattr__(self, "_text", None)

    def _fields(self):
        return self.terms

    def _children(self):
        return self.terms

    def _level(self):
        if not self.terms:
            return _ATOM
        if len(self.terms) == 1:
            return self.terms[0]._level()
        return _SUM

    def _render(self):
        if not self.terms:
            return "0"
        return " + ".join(t._wrap(_PAR) for t in self.terms)


ZERO = Zero()
ONE = One()
EMPTY_SUM = Sum(())


def letter(name: str) -> Letter:
    return Letter(name)


def plus_all(terms: Iterable[Expr]) -> Expr:
    """Left-nested binary sum of ``terms``; ``0`` when there are none."""
    out = None
    for t in terms:
        out = t if out is None else Plus(out, t)
    return ZERO if out is None else out


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"([a-zA-Z][a-zA-Z0-9_]*)|([01])|(\|\||[()*.+])")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = ("sym", "const", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][1]

    def fail(self, what: str):
        kind, tok, at = self.tokens[self.i]
        shown = "end of input" if kind == "end" else repr(tok)
        raise ExprSyntaxError(f"{what}, found {shown}", at)

    def advance(self):
        self.i += 1

    def parse(self) -> Expr:
        e = self.plus()
        if self.tokens[self.i][0] != "end":
            self.fail("expected an operator")
        return e

    def plus(self) -> Expr:
        e = self.par()
        while self.peek() == "+":
            self.advance()
            e = Plus(e, self.par())
        return e

    def par(self) -> Expr:
        e = self.dot()
        while self.peek() == "||":
            self.advance()
            e = Parallel(e, self.dot())
        return e

    def dot(self) -> Expr:
        e = self.star()
        while self.peek() == ".":
            self.advance()
            e = Dot(e, self.star())
        return e

    def star(self) -> Expr:
        e = self.atom()
        while self.peek() == "*":
            self.advance()
            e = Star(e)
        return e

    def atom(self) -> Expr:
        kind, tok, _ = self.tokens[self.i]
        if kind == "sym":
            self.advance()
            return Letter(tok)
        if kind == "const":
            self.advance()
            return ZERO if tok == "0" else ONE
        if tok == "(":
            self.advance()
            e = self.plus()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.advance()
            return e
        self.fail("expected an expression")


def parse(text: str) -> Expr:
    """Parse ``text``; precedence is ``*`` > ``.`` > ``||`` > ``+``."""
    return _Parser(text).parse()


# -- structure ---------------------------------------------------------------

def alphabet(e: Expr) -> frozenset[str]:
    out = set()
    stack = [e]
    seen = set()
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        if isinstance(x, Letter):
            out.add(x.name)
        stack.extend(x._children())
    return frozenset(out)


def expr_size(e: Expr) -> int:
    """Number of constructor nodes in ``e``."""
    return 1 + sum(expr_size(c) for c in e._children())


def subterms(e: Expr) -> Iterable[Expr]:
    yield e
    for c in e._children():
        yield from subterms(c)


# -- accepting terms, congruence ---------------------------------------------

@lru_cache(maxsize=None)
def nullable(e: Expr) -> bool:
    """True iff the empty pomset belongs to the language of ``e``."""
    if isinstance(e, One) or isinstance(e, Star):
        return True
    if isinstance(e, (Zero, Letter)):
        return False
    if isinstance(e, Plus):
        return nullable(e.left) or nullable(e.right)
    if isinstance(e, Sum):
        return any(nullable(t) for t in e.terms)
    # Dot and Parallel
    return nullable(e.left) and nullable(e.right)


@lru_cache(maxsize=None)
def normalize(e: Expr) -> Expr:
    """Canonical representative of the congruence class of ``e``.

    Summands are flattened, stripped of ``0``, deduplicated and sorted by
    their printed form; a single summand stands for itself and no summand
    yields the empty sum.  ``.`` and ``||`` stay binary and keep operand
    order, collapsing to the empty sum when an operand is empty.
    """
    if isinstance(e, (Zero,)):
        return EMPTY_SUM
    if isinstance(e, (One, Letter)):
        return e
    if isinstance(e, Star):
        body = normalize(e.body)
        return e if body is e.body else Star(body)
    if isinstance(e, (Dot, Parallel)):
        left, right = normalize(e.left), normalize(e.right)
        if left == EMPTY_SUM or right == EMPTY_SUM:
            return EMPTY_SUM
        if left is e.left and right is e.right:
            return e
        return type(e)(left, right)
    terms = {}
    for t in (e.left, e.right) if isinstance(e, Plus) else e.terms:
        n = normalize(t)
        for s in n.terms if isinstance(n, Sum) else (n,):
            terms[str(s)] = s
    if len(terms) == 1:
        return next(iter(terms.values()))
    return Sum(terms[k] for k in sorted(terms))


def congruent(e: Expr, f: Expr) -> bool:
    return normalize(e) == normalize(f)


def pair_congruent(phi: tuple[Expr, Expr], psi: tuple[Expr, Expr]) -> bool:
    """Congruence of unordered pairs: some matching is congruent componentwise."""
    g, h = map(normalize, phi)
    g2, h2 = map(normalize, psi)
    return (g == g2 and h == h2) or (g == h2 and h == g2)


def is_empty(e: Expr) -> bool:
    """True iff ``e`` denotes the empty language."""
    return normalize(e) == EMPTY_SUM


@lru_cache(maxsize=None)
def parallel_depth(e: Expr) -> int:
    """Nesting depth of parallel composition, ignoring parts that denote nothing."""
    if is_empty(e) or isinstance(e, One):
        return 0
    if isinstance(e, Letter):
        return 1
    if isinstance(e, Star):
        return parallel_depth(e.body)
    if isinstance(e, Parallel):
        return max(parallel_depth(e.left), parallel_depth(e.right)) + 1
    return max(parallel_depth(c) for c in e._children())


def embed(e: Expr) -> Expr:
    """Rewrite n-ary sums into the binary grammar constructors."""
    if isinstance(e, Sum):
        return plus_all(embed(t) for t in e.terms)
    if isinstance(e, _Binary):
        return type(e)(embed(e.left), embed(e.right))
    if isinstance(e, Star):
        return Star(embed(e.body))
    return e


# -- bounded semantics -------------------------------------------------------

def enumerate_language(e: Expr, max_size: int) -> frozenset:
    """All pomsets of the language of ``e`` with at most ``max_size`` events."""
    if max_size < 0:
        raise ValueError("max_size must be non-negative")
    cache: dict = {}
    return _enum(e, max_size, cache)


def _enum(e: Expr, n: int, cache: dict) -> frozenset:
    key = (e, n)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if isinstance(e, Zero):
        out = frozenset()
    elif isinstance(e, One):
        out = frozenset([pm.EMPTY])
    elif isinstance(e, Letter):
        out = frozenset([pm.Primitive(e.name)]) if n >= 1 else frozenset()
    elif isinstance(e, Plus):
        out = _enum(e.left, n, cache) | _enum(e.right, n, cache)
    elif isinstance(e, Sum):
        out = frozenset().union(*(_enum(t, n, cache) for t in e.terms))
    elif isinstance(e, (Dot, Parallel)):
        compose = pm.seq_compose if isinstance(e, Dot) else pm.par_compose
        left = _enum(e.left, n, cache)
        right = _enum(e.right, n, cache) if left else frozenset()
        out = frozenset(
            compose(u, v) for u in left for v in right
            if pm.size(u) + pm.size(v) <= n)
    elif isinstance(e, Star):
        # powers only grow through non-empty factors, so this terminates
        body = [u for u in _enum(e.body, n, cache) if not isinstance(u, pm.Empty)]
        found = {pm.EMPTY}
        frontier = {pm.EMPTY}
        while frontier:
            step = set()
            for u in body:
                su = pm.size(u)
                for v in frontier:
                    if su + pm.size(v) <= n:
                        w = pm.seq_compose(u, v)
                        if w not in found:
                            step.add(w)
            found |= step
            frontier = step
        out = frozenset(found)
    else:
        raise TypeError(f"not an expression: {e!r}")
    cache[key] = out
    return out


def language_width(sample: Iterable) -> int:
    return max((pm.width(u) for u in sample), default=0)
