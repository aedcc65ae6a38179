"""Pomset automata.

A pomset automaton has a sequential transition function ``delta`` (state x
symbol -> state) and a parallel one ``gamma`` (state x unordered pair of
states -> state).  A fork at ``q`` into ``{r, s}`` joins at ``gamma(q, {r, s})``
once both branches have reached accepting states.  Every automaton has a
non-accepting absorbing sink; ``gamma`` entries that are not listed go there.

Two kinds of automata share the algorithms below: the explicit
:class:`PomsetAutomaton`, and any object following the :class:`StateSpace`
protocol (the syntactic automaton over expressions is one, and is infinite).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Protocol

from . import pomset as pm

DEFAULT_CAP = 10_000


class AutomatonError(ValueError):
    pass


class NotTotal(AutomatonError):
    """The sequential transition table is missing entries."""


class NotClosed(AutomatonError):
    pass


class CapExceeded(AutomatonError):
    def __init__(self, cap: int):
        super().__init__(f"more than {cap} states materialized")
        self.cap = cap


class NotForkAcyclic(AutomatonError):
    """No fork hierarchy exists; ``cycle`` is a witness loop of states."""

    def __init__(self, cycle: list, names: list[str] | None = None):
        shown = [names[q] for q in cycle] if names else [str(q) for q in cycle]
        super().__init__("fork cycle: " + " -> ".join(shown + shown[:1]))
        self.cycle = cycle
        self.names = shown


class StateSpace(Protocol):
    alphabet: frozenset

    def sink(self) -> Hashable: ...

    def is_final(self, q) -> bool: ...

    def delta(self, q, a: str): ...

    def gamma(self, q, pair: tuple): ...

    def fork_candidates(self, q) -> Iterable[tuple]:
        """Finite set of pairs containing every pair in the support of ``q``."""

    def pair(self, r, s) -> tuple:
        """Canonical form of the unordered pair ``{r, s}``."""

    def state_name(self, q) -> str: ...


@dataclass(frozen=True, eq=False)
class PomsetAutomaton:
    """Finite explicit pomset automaton over integer states ``0..n-1``.

    ``gamma`` maps a state to a dict from sorted state pairs to targets;
    absent entries mean the sink.
    """

    names: tuple
    alphabet: frozenset
    sink_state: int
    finals: frozenset
    delta_table: dict
    gamma_table: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise AutomatonError("duplicate state names")
        if not 0 <= self.sink_state < n:
            raise AutomatonError("sink is not a state")
        if self.sink_state in self.finals:
            raise AutomatonError("the sink must not be accepting")
        missing = [(self.names[q], a) for q in range(n) for a in sorted(self.alphabet)
                   if (q, a) not in self.delta_table]
        if missing:
            q, a = missing[0]
            raise NotTotal(f"no sequential transition for state {q!r} on {a!r}"
                           f" ({len(missing)} missing)")
        for a in self.alphabet:
            if self.delta_table[self.sink_state, a] != self.sink_state:
                raise AutomatonError("sink transitions must loop to the sink")
        if self.gamma_table.get(self.sink_state):
            raise AutomatonError("the sink must not have parallel transitions")
        for q, row in self.gamma_table.items():
            for (r, s), t in row.items():
                if r > s:
                    raise AutomatonError("gamma keys must be sorted pairs")

    # -- StateSpace protocol --------------------------------------------------

    @property
    def states(self) -> range:
        return range(len(self.names))

    def sink(self) -> int:
        return self.sink_state

    def is_final(self, q: int) -> bool:
        return q in self.finals

    def delta(self, q: int, a: str) -> int:
        return self.delta_table.get((q, a), self.sink_state)

    def gamma(self, q: int, pair: tuple) -> int:
        return self.gamma_table.get(q, {}).get(self.pair(*pair), self.sink_state)

    def fork_candidates(self, q: int) -> list[tuple]:
        return sorted(self.gamma_table.get(q, {}))

    @staticmethod
    def pair(r: int, s: int) -> tuple:
        return (r, s) if r <= s else (s, r)

    def state_name(self, q: int) -> str:
        return self.names[q]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise AutomatonError(f"unknown state {name!r}") from None

    # -- construction and serialization ---------------------------------------

    @classmethod
    def build(cls, alphabet, states, sink, finals, delta, gamma=()) -> "PomsetAutomaton":
        """Build from named states.

        ``delta`` is an iterable of ``(state, symbol, state)``; ``gamma`` of
        ``(state, (state, state), state)``.  Rows of the sink may be omitted.
        """
        names = tuple(states)
        idx = {n: i for i, n in enumerate(names)}

        def look(name):
            if name not in idx:
                raise AutomatonError(f"unknown state {name!r}")
            return idx[name]

        alphabet = frozenset(alphabet)
        table = {(idx[sink], a): idx[sink] for a in alphabet}
        for q, a, t in delta:
            if a not in alphabet:
                raise AutomatonError(f"symbol {a!r} is not in the alphabet")
            key = (look(q), a)
            if key in table and key[0] != idx[sink]:
                raise AutomatonError(f"duplicate transition for {q!r} on {a!r}")
            table[key] = look(t)
        gtable: dict = {}
        for q, (r, s), t in gamma:
            row = gtable.setdefault(look(q), {})
            key = cls.pair(look(r), look(s))
            if key in row:
                raise AutomatonError(f"duplicate fork {q!r} -> {{{r!r}, {s!r}}}")
            row[key] = look(t)
        return cls(names, alphabet, look(sink),
                   frozenset(look(f) for f in finals), table, gtable)

    def to_json(self) -> dict:
        n = self.names
        return {
            "alphabet": sorted(self.alphabet),
            "states": list(n),
            "sink": n[self.sink_state],
            "finals": [n[q] for q in sorted(self.finals)],
            "delta": [[n[q], a, n[t]] for (q, a), t in sorted(self.delta_table.items())],
            "gamma": [[n[q], [n[r], n[s]], n[t]]
                      for q in sorted(self.gamma_table)
                      for (r, s), t in sorted(self.gamma_table[q].items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, data) -> "PomsetAutomaton":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls.build(
                data["alphabet"], data["states"], data["sink"], data["finals"],
                [tuple(d) for d in data["delta"]],
                [(q, tuple(p), t) for q, p, t in data.get("gamma", [])])
        except (KeyError, TypeError) as exc:
            raise AutomatonError(f"malformed automaton JSON: {exc}") from None

    def to_dot(self, start: int | None = None) -> str:
        """Graphviz rendering; the sink and edges into it are left out."""
        lines = ["digraph pa {", "  rankdir=LR;", '  node [shape=circle];']
        for q in self.states:
            if q == self.sink_state:
                continue
            shape = "doublecircle" if q in self.finals else "circle"
            lines.append(f"  s{q} [label={_quote(self.names[q])}, shape={shape}];")
        if start is not None:
            lines.append('  start [shape=point];')
            lines.append(f"  start -> s{start};")
        for (q, a), t in sorted(self.delta_table.items()):
            if t != self.sink_state:
                lines.append(f"  s{q} -> s{t} [label={_quote(a)}];")
        for q in sorted(self.gamma_table):
            for k, ((r, s), t) in enumerate(sorted(self.gamma_table[q].items())):
                if self.sink_state in (r, s, t):
                    continue
                fork = f"f{q}_{k}"
                lines.append(f"  {fork} [shape=point];")
                lines.append(f"  s{q} -> {fork} [dir=none];")
                lines.append(f"  {fork} -> s{r} [dir=none];")
                lines.append(f"  {fork} -> s{s} [dir=none];")
                lines.append(f"  s{q} -> s{t} [style=dashed];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


# -- membership --------------------------------------------------------------

class _Tracer:
    """Memoized trace targets for one membership query."""

    def __init__(self, space):
        self.space = space
        self.memo: dict = {}

    def targets(self, q, u) -> frozenset:
        """States ``q'`` with a trace from ``q`` to ``q'`` labelled by ``u``.

        ``u`` must be non-empty.  Joins that land in the sink through pairs
        outside ``fork_candidates`` are not reported.
        """
        key = (q, u)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        sp = self.space
        sink = sp.sink()
        if q == sink:
            out = frozenset([sink])
        elif isinstance(u, pm.Primitive):
            out = frozenset([sp.delta(q, u.label)])
        elif isinstance(u, pm.Seq):
            # chaining the top-level children covers every sequential split
            current = {q}
            for child in u.children:
                current = set().union(*(self.targets(x, child) for x in current))
            out = frozenset(current)
        elif isinstance(u, pm.Par):
            found = set()
            splits = list(pm.par_splits(u))
            for phi in sp.fork_candidates(q):
                t = sp.gamma(q, phi)
                if t in found:
                    continue
                r, s = phi
                for v, w in splits:
                    if (self.accepts(r, v) and self.accepts(s, w)) or \
                            (self.accepts(r, w) and self.accepts(s, v)):
                        found.add(t)
                        break
            out = frozenset(found)
        else:
            raise pm.EmptyPomset("traces are labelled by non-empty pomsets")
        self.memo[key] = out
        return out

    def accepts(self, q, u) -> bool:
        if isinstance(u, pm.Empty):
            return self.space.is_final(q)
        return any(self.space.is_final(x) for x in self.targets(q, u))


def membership(space, q, u) -> bool:
    """Decide whether pomset ``u`` is in the language of state ``q``."""
    return _Tracer(space).accepts(q, u)


def trace_targets(space, q, u) -> frozenset:
    return _Tracer(space).targets(q, u)


# -- support, reach, closure -------------------------------------------------

def support(space, q) -> list[tuple]:
    """Pairs whose fork at ``q`` avoids the sink in both branches and the join."""
    sink = space.sink()
    out = []
    for phi in space.fork_candidates(q):
        r, s = phi
        if sink in (r, s):
            continue
        if space.gamma(q, phi) != sink:
            out.append(phi)
    return out


def _successors(space, q):
    for a in sorted(space.alphabet):
        yield space.delta(q, a)
    for phi in support(space, q):
        yield space.gamma(q, phi)


def reach(space, q) -> set:
    """Least set containing ``q`` and closed under sequential and supported joins."""
    seen = {q}
    todo = [q]
    while todo:
        x = todo.pop()
        for y in _successors(space, x):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def is_closed(space, subset) -> bool:
    subset = set(subset)
    if space.sink() not in subset:
        return False
    for q in subset:
        for a in space.alphabet:
            if space.delta(q, a) not in subset:
                return False
        for phi in support(space, q):
            if space.gamma(q, phi) not in subset:
                return False
            if phi[0] not in subset or phi[1] not in subset:
                return False
    return True


def restrict(pa: PomsetAutomaton, subset) -> PomsetAutomaton:
    """Generated sub-automaton on a closed set of states.

    States are renumbered in increasing order of their old index; names are
    kept.  Parallel entries outside the support are dropped since they never
    contribute to a language.
    """
    subset = sorted(set(subset))
    if not is_closed(pa, subset):
        raise NotClosed("state set is not closed")
    new = {old: i for i, old in enumerate(subset)}
    delta = {(new[q], a): new[pa.delta(q, a)] for q in subset for a in pa.alphabet}
    gamma = {}
    for q in subset:
        row = {pa.pair(new[r], new[s]): new[pa.gamma(q, (r, s))]
               for r, s in support(pa, q)}
        if row:
            gamma[new[q]] = row
    return PomsetAutomaton(
        tuple(pa.names[q] for q in subset), pa.alphabet, new[pa.sink_state],
        frozenset(new[q] for q in subset if q in pa.finals), delta, gamma)


# -- fork hierarchy ----------------------------------------------------------

@dataclass(frozen=True)
class ForkOrder:
    """Strict order with ``(lower, upper)`` pairs, transitively closed."""

    pairs: frozenset

    def below(self, q) -> set:
        return {r for r, p in self.pairs if p == q}

    def precedes(self, r, q) -> bool:
        return (r, q) in self.pairs

    def chain_length(self, q) -> int:
        """Length of the longest descending chain strictly below ``q``."""
        memo: dict = {}

        def depth(x):
            if x not in memo:
                memo[x] = max((depth(r) + 1 for r in self.below(x)), default=0)
            return memo[x]

        return depth(q)


def fork_order(pa) -> ForkOrder:
    """Least fork hierarchy of a finite automaton.

    ``r`` lies below ``q`` exactly when some path from ``q`` along sequential
    steps, supported joins and fork branches ends with a fork branch into
    ``r``.  Raises :class:`NotForkAcyclic` when that relation is not
    irreflexive.
    """
    states = list(pa.states)
    steps = {q: set(_successors(pa, q)) for q in states}
    forks = {q: {x for phi in support(pa, q) for x in phi} for q in states}

    pairs = set()
    for q in states:
        seen = {q}
        todo = [q]
        while todo:
            x = todo.pop()
            for y in steps[x] | forks[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        for x in seen:
            pairs.update((r, q) for r in forks[x])

    for q in states:
        if (q, q) in pairs:
            raise NotForkAcyclic(_fork_cycle(q, steps, forks),
                                 list(pa.names) if hasattr(pa, "names") else None)
    return ForkOrder(frozenset(pairs))


def _fork_cycle(q, steps, forks) -> list:
    """Shortest walk from ``q`` whose last edge is a fork branch back into ``q``."""
    parent = {q: None}
    todo = deque([q])
    while todo:
        x = todo.popleft()
        if q in forks[x]:
            path = []
            while x is not None:
                path.append(x)
                x = parent[x]
            return path[::-1]
        for y in sorted(steps[x] | forks[x]):
            if y not in parent:
                parent[y] = x
                todo.append(y)
    return [q]


# -- finite closed fragments -------------------------------------------------

def closed_fragment(space, q, cap: int = DEFAULT_CAP) -> list:
    """Least closed set of states containing ``q``, in discovery order.

    This is the set built by induction on the fork hierarchy: the sink, the
    reach of ``q``, and recursively the fragments of every fork branch
    supported somewhere in that reach.
    """
    sink = space.sink()
    order = [q] if q == sink else [q, sink]
    seen = set(order)
    todo = deque(order)
    while todo:
        x = todo.popleft()
        new = [space.delta(x, a) for a in sorted(space.alphabet)]
        for phi in support(space, x):
            new.append(space.gamma(x, phi))
            new.extend(phi)
        for y in new:
            if y not in seen:
                seen.add(y)
                order.append(y)
                if len(order) > cap:
                    raise CapExceeded(cap)
                todo.append(y)
    return order


def bounded_subpa(space, q, cap: int = DEFAULT_CAP) -> tuple[PomsetAutomaton, int]:
    """Materialize the closed fragment around ``q`` as an explicit automaton.

    Returns the automaton and the index of ``q`` in it (always 0).
    """
    order = closed_fragment(space, q, cap)
    idx = {x: i for i, x in enumerate(order)}
    alphabet = frozenset(space.alphabet)
    delta = {(idx[x], a): idx[space.delta(x, a)] for x in order for a in alphabet}
    gamma = {}
    for x in order:
        row = {}
        for phi in support(space, x):
            r, s = idx[phi[0]], idx[phi[1]]
            row[PomsetAutomaton.pair(r, s)] = idx[space.gamma(x, phi)]
        if row:
            gamma[idx[x]] = row
    names = tuple(space.state_name(x) for x in order)
    finals = frozenset(idx[x] for x in order if space.is_final(x))
    pa = PomsetAutomaton(names, alphabet, idx[space.sink()], finals, delta, gamma)
    return pa, idx[q]
