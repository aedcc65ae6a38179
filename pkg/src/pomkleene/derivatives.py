"""Brzozowski-style derivatives and the syntactic pomset automaton.

``delta_deriv(e, a)`` is the residual of ``e`` after reading ``a``;
``gamma_deriv(e, {g, h})`` is the residual after a fork into ``g`` and ``h``
has joined.  Taking every expression as a state gives an infinite automaton;
identifying congruent expressions makes the part reachable from any one
expression finite, and :func:`expr_to_pa` materializes that part.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import automaton as au
from .expr import (EMPTY_SUM, ONE, ZERO, Dot, Expr, Letter, One, Parallel,
                   Plus, Star, Sum, Zero, alphabet, normalize, nullable,
                   pair_congruent, subterms)


def _guard(e: Expr, f: Expr) -> Expr:
    """``f`` when ``e`` accepts the empty pomset, else ``0``."""
    return f if nullable(e) else ZERO


@lru_cache(maxsize=None)
def delta_deriv(e: Expr, a: str) -> Expr:
    if isinstance(e, (Zero, One)):
        return ZERO
    if isinstance(e, Letter):
        return ONE if e.name == a else ZERO
    if isinstance(e, Plus):
        return Plus(delta_deriv(e.left, a), delta_deriv(e.right, a))
    if isinstance(e, Sum):
        return Sum(delta_deriv(t, a) for t in e.terms)
    if isinstance(e, Dot):
        return Plus(Dot(delta_deriv(e.left, a), e.right),
                    _guard(e.left, delta_deriv(e.right, a)))
    if isinstance(e, Parallel):
        return Plus(_guard(e.left, delta_deriv(e.right, a)),
                    _guard(e.right, delta_deriv(e.left, a)))
    if isinstance(e, Star):
        return Dot(delta_deriv(e.body, a), e)
    raise TypeError(f"not an expression: {e!r}")


@lru_cache(maxsize=None)
def gamma_deriv(e: Expr, phi: tuple) -> Expr:
    """Residual of ``e`` after a completed fork ``phi = (g, h)`` (unordered)."""
    if isinstance(e, (Zero, One, Letter)):
        return ZERO
    if isinstance(e, Plus):
        return Plus(gamma_deriv(e.left, phi), gamma_deriv(e.right, phi))
    if isinstance(e, Sum):
        return Sum(gamma_deriv(t, phi) for t in e.terms)
    if isinstance(e, Dot):
        return Plus(Dot(gamma_deriv(e.left, phi), e.right),
                    _guard(e.left, gamma_deriv(e.right, phi)))
    if isinstance(e, Parallel):
        hit = ONE if pair_congruent(phi, (e.left, e.right)) else ZERO
        return Plus(Plus(hit, _guard(e.left, gamma_deriv(e.right, phi))),
                    _guard(e.right, gamma_deriv(e.left, phi)))
    if isinstance(e, Star):
        return Dot(gamma_deriv(e.body, phi), e)
    raise TypeError(f"not an expression: {e!r}")


def _pair(r: Expr, s: Expr) -> tuple:
    return (r, s) if str(r) <= str(s) else (s, r)


def candidate_forks(e: Expr) -> list[tuple]:
    """Normalized operand pairs of the parallel subterms of ``e``.

    Any fork with a non-sink join at ``e`` is among these, so they bound the
    support of the state.  Pairs with an empty operand are left out.
    """
    found = {}
    for t in subterms(e):
        if isinstance(t, Parallel):
            g, h = normalize(t.left), normalize(t.right)
            if g != EMPTY_SUM and h != EMPTY_SUM:
                p = _pair(g, h)
                found[(str(p[0]), str(p[1]))] = p
    return [found[k] for k in sorted(found)]


class SyntacticStateSpace:
    """The derivative automaton on normal forms, explored on demand.

    States are normal forms; the empty sum is the sink.
    """

    def __init__(self, symbols):
        self.alphabet = frozenset(symbols)
        self._forks: dict = {}

    def sink(self) -> Expr:
        return EMPTY_SUM

    def is_final(self, q: Expr) -> bool:
        return nullable(q)

    def delta(self, q: Expr, a: str) -> Expr:
        return normalize(delta_deriv(q, a))

    def gamma(self, q: Expr, pair: tuple) -> Expr:
        r, s = pair
        if normalize(r) == EMPTY_SUM or normalize(s) == EMPTY_SUM:
            return EMPTY_SUM
        return normalize(gamma_deriv(q, _pair(r, s)))

    def fork_candidates(self, q: Expr) -> list[tuple]:
        hit = self._forks.get(q)
        if hit is None:
            hit = self._forks[q] = candidate_forks(q)
        return hit

    @staticmethod
    def pair(r: Expr, s: Expr) -> tuple:
        return _pair(r, s)

    @staticmethod
    def state_name(q: Expr) -> str:
        return str(q)


@dataclass(frozen=True)
class CompiledPA:
    pa: au.PomsetAutomaton
    start: int

    @property
    def state_labels(self) -> dict:
        return dict(enumerate(self.pa.names))

    def accepts(self, u) -> bool:
        return au.membership(self.pa, self.start, u)


def expr_to_pa(e: Expr, cap: int = au.DEFAULT_CAP, symbols=None) -> CompiledPA:
    """Finite pomset automaton whose start state accepts exactly the language of ``e``.

    ``symbols`` widens the alphabet beyond the letters occurring in ``e``.
    """
    sigma = alphabet(e) | frozenset(symbols or ())
    space = SyntacticStateSpace(sigma)
    pa, start = au.bounded_subpa(space, normalize(e), cap)
    return CompiledPA(pa, start)
