"""From fork-acyclic pomset automata back to series-rational expressions.

This is state elimination extended with fork terms: a path expression from
``q`` to ``q'`` whose intermediate states lie in ``Q''`` is built by removing
one pivot state of ``Q''`` at a time.  A fork ``{r, s}`` at ``q`` contributes
``plus(r) || plus(s)`` where ``plus(r)`` denotes the non-empty part of the
language of ``r``; fork-acyclicity makes those available before they are
needed.
"""

from __future__ import annotations

from .automaton import PomsetAutomaton, fork_order, reach, support
from .expr import (EMPTY_SUM, ONE, Dot, Expr, Letter, Parallel, Star, Sum,
                   normalize)


def _sum(terms) -> Expr:
    return normalize(Sum(terms))


def _dot(*parts: Expr) -> Expr:
    out = parts[0]
    for p in parts[1:]:
        out = Dot(out, p)
    return normalize(out)


class PathExprTable:
    """Memoized path expressions and per-state non-empty language expressions."""

    def __init__(self, pa: PomsetAutomaton):
        self.pa = pa
        self.order = fork_order(pa)
        self.memo: dict = {}
        self.plus_exprs: dict = {}
        self._reach: dict = {}

    def reach(self, q) -> frozenset:
        if q not in self._reach:
            self._reach[q] = frozenset(reach(self.pa, q))
        return self._reach[q]

    def plus(self, q) -> Expr:
        """Expression for the language of ``q`` without the empty pomset."""
        hit = self.plus_exprs.get(q)
        if hit is None:
            region = self.reach(q)
            hit = _sum(path_expr(self.pa, q, t, region, self)
                       for t in sorted(region) if self.pa.is_final(t))
            self.plus_exprs[q] = hit
        return hit


def path_expr(pa: PomsetAutomaton, q, target, via, table: PathExprTable | None = None) -> Expr:
    """Expression for non-empty runs from ``q`` to ``target`` with every
    intermediate state in ``via``.

    The pivot removed at each step is the least state index of ``via``.
    """
    if table is None:
        table = PathExprTable(pa)
    via = frozenset(via)
    key = (q, target, via)
    hit = table.memo.get(key)
    if hit is not None:
        return hit
    if not via:
        terms = [Letter(a) for a in sorted(pa.alphabet) if pa.delta(q, a) == target]
        for r, s in support(pa, q):
            if pa.gamma(q, (r, s)) == target:
                terms.append(Parallel(table.plus(r), table.plus(s)))
        out = _sum(terms)
    else:
        pivot = min(via)
        rest = via - {pivot}
        direct = path_expr(pa, q, target, rest, table)
        into = path_expr(pa, q, pivot, rest, table)
        if into == EMPTY_SUM:
            out = direct
        else:
            loop = path_expr(pa, pivot, pivot, rest, table)
            out_of = path_expr(pa, pivot, target, rest, table)
            out = _sum([direct, _dot(into, Star(loop), out_of)])
    table.memo[key] = out
    return out


def pa_to_expr(pa: PomsetAutomaton, q, table: PathExprTable | None = None) -> Expr:
    """Expression whose language is the language of state ``q``.

    Raises :class:`~pomkleene.automaton.NotForkAcyclic` when the automaton has
    no fork hierarchy.
    """
    if isinstance(q, str):
        q = pa.index(q)
    if table is None:
        table = PathExprTable(pa)
    plus = table.plus(q)
    return _sum([plus, ONE]) if pa.is_final(q) else plus
