"""Preference systems, matchings, edge weights and stability.

Agents are positive integers.  An edge is the canonical tuple ``(min, max)``
of its endpoints; every ordering in the package (iteration, witness
selection, tie breaking) is numeric order on that tuple.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import InvalidInstance, InvalidMatching, UnknownEdge

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    """Canonical form of the pair ``uv``."""
    if u == v:
        raise InvalidInstance(f"self loop at agent {u}")
    return (u, v) if u < v else (v, u)


def other(e: Edge, v: int) -> int:
    return e[1] if e[0] == v else e[0]


class PreferenceSystem:
    """An instance of the stable roommates problem with incomplete lists.

    ``prefs`` maps each agent to its neighbours, most preferred first.  The
    edge set is derived from the lists and acceptability must be mutual.
    Agents with empty lists are allowed.
    """

    def __init__(self, prefs: Mapping[int, Iterable[int]]):
        lists: dict[int, tuple[int, ...]] = {}
        for a, seq in prefs.items():
            a = int(a)
            if a <= 0:
                raise InvalidInstance(f"agent identifiers must be positive integers, got {a}")
            if a in lists:
                raise InvalidInstance(f"agent {a} declared twice")
            lists[a] = tuple(int(b) for b in seq)
        rank: dict[int, dict[int, int]] = {}
        for a, seq in lists.items():
            r: dict[int, int] = {}
            for i, b in enumerate(seq, start=1):
                if b == a:
                    raise InvalidInstance(f"agent {a} lists itself")
                if b not in lists:
                    raise InvalidInstance(f"agent {a} lists undeclared agent {b}")
                if b in r:
                    raise InvalidInstance(f"agent {a} lists {b} twice")
                r[b] = i
            rank[a] = r
        for a, r in rank.items():
            for b in r:
                if a not in rank[b]:
                    raise InvalidInstance(
                        f"acceptability is not mutual: {a} lists {b} but {b} does not list {a}"
                    )
        self._prefs = dict(sorted(lists.items()))
        self._rank = rank

    # -- basic accessors -------------------------------------------------

    @property
    def agents(self) -> tuple[int, ...]:
        return tuple(self._prefs)

    def prefs(self, v: int) -> tuple[int, ...]:
        return self._prefs[v]

    def as_dict(self) -> dict[int, tuple[int, ...]]:
        return dict(self._prefs)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted({edge(a, b) for a, seq in self._prefs.items() for b in seq}))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __len__(self) -> int:
        return len(self._prefs)

    def __contains__(self, v: object) -> bool:
        return v in self._prefs

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._rank and v in self._rank[u]

    def degree(self, v: int) -> int:
        return len(self._prefs[v])

    def rank(self, u: int, v: int) -> int:
        """1-based position of ``v`` in ``u``'s list."""
        try:
            return self._rank[u][v]
        except KeyError:
            raise UnknownEdge((u, v)) from None

    def prefers(self, v: int, a: int, b: int) -> bool:
        """True iff ``v`` strictly prefers ``a`` to ``b``.

        ``b == v`` stands for being unmatched, which every neighbour beats.
        """
        if b == v:
            return a != v
        if a == v:
            return False
        return self.rank(v, a) < self.rank(v, b)

    def first(self, v: int) -> int | None:
        seq = self._prefs[v]
        return seq[0] if seq else None

    def last(self, v: int) -> int | None:
        seq = self._prefs[v]
        return seq[-1] if seq else None

    def incident(self, v: int) -> tuple[Edge, ...]:
        """Edges at ``v`` in ``v``'s preference order."""
        return tuple(edge(v, b) for b in self._prefs[v])

    def check_edge(self, e: Edge) -> Edge:
        e = edge(*e)
        if not self.has_edge(*e):
            raise UnknownEdge(e)
        return e

    # -- derived instances -----------------------------------------------

    def without_edges(self, removed: Iterable[Edge]) -> PreferenceSystem:
        gone = {edge(*e) for e in removed}
        return PreferenceSystem(
            {a: [b for b in seq if edge(a, b) not in gone] for a, seq in self._prefs.items()}
        )

    def with_edges(self, kept: Iterable[Edge]) -> PreferenceSystem:
        keep = {edge(*e) for e in kept}
        return PreferenceSystem(
            {a: [b for b in seq if edge(a, b) in keep] for a, seq in self._prefs.items()}
        )

    def induced(self, vertices: Iterable[int]) -> PreferenceSystem:
        vs = set(vertices)
        return PreferenceSystem({a: [b for b in seq if b in vs] for a, seq in self._prefs.items() if a in vs})

    # -- identity ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreferenceSystem):
            return NotImplemented
        return self._prefs == other._prefs

    def __hash__(self) -> int:
        return hash(tuple(self._prefs.items()))

    def __repr__(self) -> str:
        body = "; ".join(f"{a}: {' '.join(map(str, seq))}" for a, seq in self._prefs.items())
        return f"PreferenceSystem({body})"


class Matching(frozenset):
    """A set of pairwise vertex-disjoint canonical edges."""

    def __new__(cls, edges: Iterable[Sequence[int]] = ()) -> Matching:
        canon = [edge(*e) for e in edges]
        seen: set[int] = set()
        for u, v in canon:
            if u in seen or v in seen:
                raise InvalidMatching(f"edges share an endpoint at {u if u in seen else v}")
            seen.update((u, v))
        return super().__new__(cls, canon)

    @cached_property
    def _mate(self) -> dict[int, int]:
        m: dict[int, int] = {}
        for u, v in self:
            m[u] = v
            m[v] = u
        return m

    def partner(self, v: int) -> int:
        """``M(v)``: the partner of ``v``, or ``v`` itself when unmatched."""
        return self._mate.get(v, v)

    def is_matched(self, v: int) -> bool:
        return v in self._mate

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._mate)

    def sorted(self) -> list[Edge]:
        return sorted(self)

    def __repr__(self) -> str:
        return "Matching(" + ", ".join(f"{u}-{v}" for u, v in self.sorted()) + ")"


def as_matching(P: PreferenceSystem, edges: Iterable[Sequence[int]]) -> Matching:
    """Build a matching and check that every edge belongs to ``P``."""
    M = edges if isinstance(edges, Matching) else Matching(edges)
    for e in M:
        if not P.has_edge(*e):
            raise InvalidMatching(f"edge {e} is not an acceptable pair")
    return M


def is_perfect(P: PreferenceSystem, M: Matching) -> bool:
    return len(M) * 2 == len(P)


def to_fraction(value: object) -> Fraction:
    """Parse ints, Fractions, decimal strings and ``p/q`` strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("boolean is not a weight")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(str(value).strip())


class EdgeWeights(Mapping):
    """Nonnegative rational weight per edge; absent edges weigh 0.

    Missing edges are recorded in :attr:`missing` and logged once.
    """

    def __init__(self, P: PreferenceSystem, values: Mapping[Sequence[int], object] | None = None, *, warn: bool = True):
        w: dict[Edge, Fraction] = {}
        for key, raw in (values or {}).items():
            e = P.check_edge(tuple(key))
            if e in w:
                raise ValueError(f"duplicate weight for edge {e}")
            x = to_fraction(raw)
            if x < 0:
                raise ValueError(f"negative weight {x} on edge {e}")
            w[e] = x
        self.missing: tuple[Edge, ...] = tuple(e for e in P.edges if e not in w)
        for e in self.missing:
            w[e] = Fraction(0)
        if warn and self.missing and values is not None:
            logger.warning("%d edge(s) without weight default to 0", len(self.missing))
        self._w = dict(sorted(w.items()))

    def __getitem__(self, e: Sequence[int]) -> Fraction:
        return self._w[edge(*e)]

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._w)

    def __len__(self) -> int:
        return len(self._w)

    def total(self, edges: Iterable[Edge]) -> Fraction:
        return sum((self._w[edge(*e)] for e in edges), Fraction(0))

    def restricted(self, P: PreferenceSystem) -> EdgeWeights:
        """Weights of a sub-instance (every edge of ``P`` must be known here)."""
        return EdgeWeights(P, {e: self._w[e] for e in P.edges}, warn=False)

    def __repr__(self) -> str:
        return "EdgeWeights(" + ", ".join(f"{u}-{v}: {x}" for (u, v), x in self._w.items()) + ")"


# -- operations --------------------------------------------------------------


def rank_of(P: PreferenceSystem, u: int, v: int) -> int:
    return P.rank(u, v)


def phi(P: PreferenceSystem, e: Sequence[int]) -> frozenset[Edge]:
    """``e`` together with every edge dominating it at one of its endpoints."""
    u, v = P.check_edge(tuple(e))
    out = {(u, v)}
    for a, b in ((u, v), (v, u)):
        for c in P.prefs(a):
            if c == b:
                break
            out.add(edge(a, c))
    return frozenset(out)


def is_blocking(P: PreferenceSystem, M: Matching, e: Sequence[int]) -> bool:
    u, v = P.check_edge(tuple(e))
    if (u, v) in M:
        return False
    return P.prefers(u, v, M.partner(u)) and P.prefers(v, u, M.partner(v))


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    witness: Edge | None = None

    def __bool__(self) -> bool:
        return self.stable


def is_stable(P: PreferenceSystem, M: Iterable[Sequence[int]]) -> StabilityVerdict:
    """Stability verdict; the witness is the smallest blocking edge."""
    M = as_matching(P, M)
    for e in P.edges:
        if is_blocking(P, M, e):
            return StabilityVerdict(False, e)
    return StabilityVerdict(True)
