"""Series-parallel pomsets kept as canonical terms.

A pomset is stored as a normalized term built from the empty pomset,
primitive (single-event) pomsets, sequential composition and parallel
composition.  Sequential chains are flattened; parallel children are
flattened and sorted by their serialization, so two terms are equal exactly
when the labelled posets they denote are isomorphic.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class PomsetError(ValueError):
    pass


class EmptyPomset(PomsetError):
    """Raised when an operation needs a non-empty pomset."""


class NotSeriesParallel(PomsetError):
    """Raised when a labelled poset contains the N shape."""


class PomsetSyntaxError(PomsetError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at column {position + 1}")
        self.position = position


class _Term:
    __slots__ = ()

    def __str__(self) -> str:
        return self.serialize()

    def __lt__(self, other: "Pomset") -> bool:
        return self.serialize() < other.serialize()

    # the serialization is injective on canonical terms
    def __eq__(self, other) -> bool:
        return isinstance(other, _Term) and self.serialize() == other.serialize()

    def __hash__(self) -> int:
        return hash(self.serialize())


@dataclass(frozen=True, eq=False, slots=True)
class Empty(_Term):
    def serialize(self) -> str:
        return "1"

    def __repr__(self) -> str:
        return "Empty()"


@dataclass(frozen=True, eq=False, slots=True)
class Primitive(_Term):
    label: str

    def serialize(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"Primitive({self.label!r})"


@dataclass(frozen=True, eq=False, slots=True)
class Seq(_Term):
    children: tuple
    _key: str = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_key", ".".join(
                f"({c.serialize()})" if isinstance(c, Par) else c.serialize()
                for c in self.children))

    def serialize(self) -> str:
        return self._key


@dataclass(frozen=True, eq=False, slots=True)
class Par(_Term):
    children: tuple
    _key: str = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        # brackets around Seq children are redundant but part of the format
        object.__setattr__(
            self, "_key", "|".join(
                f"({c.serialize()})" if isinstance(c, Seq) else c.serialize()
                for c in self.children))

    def serialize(self) -> str:
        return self._key


Pomset = Union[Empty, Primitive, Seq, Par]

EMPTY = Empty()


def primitive(label: str) -> Primitive:
    return Primitive(label)


def seq_compose(u: Pomset, v: Pomset) -> Pomset:
    """Sequential composition ``u . v`` as a canonical term."""
    if isinstance(u, Empty):
        return v
    if isinstance(v, Empty):
        return u
    left = u.children if isinstance(u, Seq) else (u,)
    right = v.children if isinstance(v, Seq) else (v,)
    return Seq(left + right)


def par_compose(u: Pomset, v: Pomset) -> Pomset:
    """Parallel composition ``u | v`` as a canonical term."""
    if isinstance(u, Empty):
        return v
    if isinstance(v, Empty):
        return u
    left = u.children if isinstance(u, Par) else (u,)
    right = v.children if isinstance(v, Par) else (v,)
    return Par(tuple(sorted(left + right, key=_sort_key)))


def _sort_key(u: Pomset) -> str:
    return u.serialize()


def seq_all(parts: Iterable[Pomset]) -> Pomset:
    out: Pomset = EMPTY
    for p in parts:
        out = seq_compose(out, p)
    return out


def par_all(parts: Iterable[Pomset]) -> Pomset:
    out: Pomset = EMPTY
    for p in parts:
        out = par_compose(out, p)
    return out


def size(u: Pomset) -> int:
    """Number of events (labelled nodes)."""
    if isinstance(u, Empty):
        return 0
    if isinstance(u, Primitive):
        return 1
    return sum(size(c) for c in u.children)


def width(u: Pomset) -> int:
    """Size of the largest antichain, computed on the term structure."""
    if isinstance(u, Empty):
        return 0
    if isinstance(u, Primitive):
        return 1
    if isinstance(u, Seq):
        return max(width(c) for c in u.children)
    return sum(width(c) for c in u.children)


def labels(u: Pomset) -> set[str]:
    if isinstance(u, Empty):
        return set()
    if isinstance(u, Primitive):
        return {u.label}
    return set().union(*(labels(c) for c in u.children))


# -- unique factorization ----------------------------------------------------

@dataclass(frozen=True)
class SeqSplit:
    parts: tuple


@dataclass(frozen=True)
class ParSplit:
    parts: tuple


def factorize(u: Pomset) -> Primitive | SeqSplit | ParSplit:
    """Return which of the three top-level shapes ``u`` has.

    Non-empty series-parallel pomsets are exactly one of: a primitive, a
    sequential composition of smaller non-empty pomsets, or a parallel
    composition of smaller non-empty pomsets.
    """
    if isinstance(u, Empty):
        raise EmptyPomset("the empty pomset has no factorization")
    if isinstance(u, Primitive):
        return u
    if isinstance(u, Seq):
        return SeqSplit(u.children)
    return ParSplit(u.children)


def seq_splits(u: Seq) -> Iterator[tuple[Pomset, Pomset]]:
    """All ways to write ``u = v . w`` with ``v``, ``w`` non-empty."""
    kids = u.children
    for i in range(1, len(kids)):
        yield seq_all(kids[:i]), seq_all(kids[i:])


def par_splits(u: Par) -> Iterator[tuple[Pomset, Pomset]]:
    """All ways to write ``u = v | w`` with ``v``, ``w`` non-empty.

    Each unordered split is produced once; equal children are treated as a
    multiset so duplicate splits are skipped.
    """
    kids = u.children
    n = len(kids)
    seen = set()
    # fix the last child on the right side to get each unordered split once
    for mask in range(1, 1 << (n - 1)):
        left = tuple(kids[i] for i in range(n) if mask >> i & 1)
        right = tuple(kids[i] for i in range(n) if not mask >> i & 1)
        v, w = par_all(left), par_all(right)
        key = tuple(sorted((v.serialize(), w.serialize())))
        if key in seen:
            continue
        seen.add(key)
        yield v, w


# -- text form ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([a-zA-Z][a-zA-Z0-9_]*)|(1)|([().|]))")


def parse_pomset(text: str) -> Pomset:
    """Parse the pomset text grammar (``.`` binds tighter than ``|``)."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PomsetSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    i = 0

    def peek():
        return tokens[i][0]

    def take(expected=None):
        nonlocal i
        tok, at = tokens[i]
        if expected is not None and tok != expected:
            raise PomsetSyntaxError(f"expected {expected!r}, got {tok!r}", at)
        i += 1
        return tok, at

    def par_level():
        out = seq_level()
        while peek() == "|":
            take()
            out = par_compose(out, seq_level())
        return out

    def seq_level():
        out = atom()
        while peek() == ".":
            take()
            out = seq_compose(out, atom())
        return out

    def atom():
        tok, at = take()
        if tok == "(":
            inner = par_level()
            take(")")
            return inner
        if tok == "1":
            return EMPTY
        if tok in ("|", ".", ")", "<end>"):
            raise PomsetSyntaxError(f"unexpected {tok!r}", at)
        return Primitive(tok)

    result = par_level()
    if peek() != "<end>":
        tok, at = tokens[i]
        raise PomsetSyntaxError(f"unexpected {tok!r}", at)
    return result


# -- explicit labelled posets ------------------------------------------------

@dataclass(frozen=True)
class LabeledPoset:
    """A finite labelled strict partial order.

    ``order`` is transitively closed on construction.
    """

    labels: dict
    order: frozenset

    def __init__(self, labels: dict, order: Iterable[tuple]):
        order = set(order)
        nodes = set(labels)
        for a, b in order:
            if a not in nodes or b not in nodes:
                raise PomsetError(f"order pair ({a}, {b}) mentions unknown node")
        closed = _transitive_closure(nodes, order)
        if any((n, n) in closed for n in nodes):
            raise PomsetError("order is not irreflexive (it contains a cycle)")
        object.__setattr__(self, "labels", dict(labels))
        object.__setattr__(self, "order", frozenset(closed))

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.labels)

    def comparable(self, a, b) -> bool:
        return (a, b) in self.order or (b, a) in self.order

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": str(n), "label": self.labels[n]}
                      for n in sorted(self.labels, key=str)],
            "order": sorted([str(a), str(b)] for a, b in self.order),
        }

    @classmethod
    def from_json(cls, data) -> "LabeledPoset":
        if isinstance(data, str):
            data = json.loads(data)
        labels = {}
        for node in data["nodes"]:
            if node["id"] in labels:
                raise PomsetError(f"duplicate node id {node['id']!r}")
            labels[node["id"]] = node["label"]
        return cls(labels, [tuple(p) for p in data.get("order", [])])


def _transitive_closure(nodes, order) -> set:
    succ = {n: set() for n in nodes}
    for a, b in order:
        succ[a].add(b)
    closed = set()
    for n in nodes:
        stack = list(succ[n])
        seen = set()
        while stack:
            m = stack.pop()
            if m in seen:
                continue
            seen.add(m)
            stack.extend(succ[m])
        closed.update((n, m) for m in seen)
    return closed


def to_poset(u: Pomset) -> LabeledPoset:
    """Expand a canonical term into an explicit labelled poset.

    Node ids are "0", "1", ... in left-to-right term order.
    """
    labels: dict = {}
    order: set = set()
    counter = itertools.count()

    def walk(t) -> list:
        if isinstance(t, Empty):
            return []
        if isinstance(t, Primitive):
            n = str(next(counter))
            labels[n] = t.label
            return [n]
        groups = [walk(c) for c in t.children]
        if isinstance(t, Seq):
            for i, g in enumerate(groups):
                for h in groups[i + 1:]:
                    order.update((a, b) for a in g for b in h)
        return [n for g in groups for n in g]

    walk(u)
    return LabeledPoset(labels, order)


def sp_decompose(p: LabeledPoset) -> Pomset:
    """Recover the canonical term of a series-parallel labelled poset."""
    return _decompose(p, frozenset(p.labels))


def _components(nodes, linked) -> list[list]:
    remaining = set(nodes)
    comps = []
    while remaining:
        start = remaining.pop()
        comp = [start]
        stack = [start]
        while stack:
            n = stack.pop()
            for m in list(remaining):
                if linked(n, m):
                    remaining.discard(m)
                    comp.append(m)
                    stack.append(m)
        comps.append(comp)
    return comps


def _decompose(p: LabeledPoset, nodes: frozenset) -> Pomset:
    if not nodes:
        return EMPTY
    if len(nodes) == 1:
        (n,) = nodes
        return Primitive(p.labels[n])

    # parallel: components of the comparability graph
    comps = _components(nodes, p.comparable)
    if len(comps) > 1:
        return par_all(_decompose(p, frozenset(c)) for c in comps)

    # sequential: components of the incomparability graph, totally ordered
    comps = _components(nodes, lambda a, b: a != b and not p.comparable(a, b))
    if len(comps) > 1:
        def before(x, y):
            return all((a, b) in p.order for a in x for b in y)

        ordered = sorted(comps, key=lambda c: sum(
            1 for d in comps if d is not c and before(d, c)))
        for x, y in zip(ordered, ordered[1:]):
            if not before(x, y):
                raise NotSeriesParallel("components are not uniformly ordered")
        return seq_all(_decompose(p, frozenset(c)) for c in ordered)

    raise NotSeriesParallel(
        "poset is connected in both its comparability and incomparability "
        f"graphs on nodes {sorted(nodes, key=str)}")
