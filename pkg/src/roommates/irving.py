"""Irving's two-phase algorithm for roommates with incomplete lists.

Also the matched/unmatched vertex split and the reduction to an instance
whose stable matchings are all perfect.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import NO_STABLE_MATCHING, NoStableMatching, NoStableMatchingError
from .model import Edge, Matching, PreferenceSystem, edge


class _Table:
    """Mutable shortlists: an insertion-ordered dict of neighbours per agent."""

    def __init__(self, P: PreferenceSystem):
        self.lists: dict[int, dict[int, None]] = {a: dict.fromkeys(P.prefs(a)) for a in P.agents}
        self.rank = {a: {b: i for i, b in enumerate(P.prefs(a))} for a in P.agents}
        self.removed: list[Edge] = []

    def delete(self, a: int, b: int) -> None:
        if b in self.lists[a]:
            del self.lists[a][b]
            del self.lists[b][a]
            self.removed.append(edge(a, b))

    def first(self, a: int) -> int | None:
        return next(iter(self.lists[a]), None)

    def second(self, a: int) -> int:
        it = iter(self.lists[a])
        next(it)
        return next(it)

    def last(self, a: int) -> int:
        return next(reversed(self.lists[a]))

    def delete_after(self, a: int, b: int) -> list[int]:
        """``a`` drops every neighbour it ranks below ``b``; returns them."""
        rb = self.rank[a][b]
        worse = [c for c in self.lists[a] if self.rank[a][c] > rb]
        for c in worse:
            self.delete(a, c)
        return worse


@dataclass(frozen=True)
class PhaseOneResult:
    surviving: PreferenceSystem
    removed: tuple[Edge, ...]


@dataclass(frozen=True)
class VertexPartition:
    v0: frozenset[int]
    v1: frozenset[int]


def _run_phase_one(P: PreferenceSystem, order: Iterable[int] | None = None) -> _Table:
    table = _Table(P)
    free = deque(P.agents if order is None else order)
    target: dict[int, int] = {}
    while free:
        x = free.popleft()
        y = table.first(x)
        if y is None:
            continue
        target[x] = y
        for z in table.delete_after(y, x):
            if target.get(z) == y:
                del target[z]
                free.append(z)
    return table


def phase_one(P: PreferenceSystem, order: Iterable[int] | None = None) -> PhaseOneResult:
    """Proposal/rejection sequence; ``order`` is the initial free queue.

    The surviving subgraph does not depend on ``order``.
    """
    if order is not None:
        order = list(order)
        if sorted(order) != list(P.agents):
            raise ValueError("order must be a permutation of the agents")
    table = _run_phase_one(P, order)
    return PhaseOneResult(P.without_edges(table.removed), tuple(table.removed))


def _phase_two(table: _Table) -> bool:
    """Eliminate exposed rotations until every list is a singleton.

    Returns False when a list that survived phase one runs empty.
    """
    live = sorted(a for a, lst in table.lists.items() if lst)
    while True:
        if any(not table.lists[a] for a in live):
            return False
        start = next((a for a in live if len(table.lists[a]) >= 2), None)
        if start is None:
            return True
        seen = {start: 0}
        seq = [start]
        x = start
        while True:
            x = table.last(table.second(x))
            if x in seen:
                break
            seen[x] = len(seq)
            seq.append(x)
        rotation = seq[seen[x]:]
        seconds = [table.second(a) for a in rotation]
        for a, s in zip(rotation, seconds):
            if a in table.lists[s]:
                table.delete_after(s, a)


def find_stable_matching(P: PreferenceSystem) -> Matching | NoStableMatching:
    """A stable matching of ``P``, or ``NO_STABLE_MATCHING``."""
    table = _run_phase_one(P)
    if not _phase_two(table):
        return NO_STABLE_MATCHING
    pairs = set()
    for a, lst in table.lists.items():
        if lst:
            b = table.first(a)
            if table.first(b) != a:
                return NO_STABLE_MATCHING
            pairs.add(edge(a, b))
    return Matching(pairs)


def partition_matched(P: PreferenceSystem) -> VertexPartition:
    """Agents unmatched (``v0``) and matched (``v1``) in every stable matching."""
    M = find_stable_matching(P)
    if isinstance(M, NoStableMatching):
        raise NoStableMatchingError("instance has no stable matching")
    v1 = frozenset(M.vertices)
    return VertexPartition(frozenset(P.agents) - v1, v1)


def perfect_core(P: PreferenceSystem) -> PreferenceSystem:
    """Instance on the always-matched agents whose perfect stable matchings
    are exactly the stable matchings of ``P``.

    An edge survives if neither endpoint prefers an always-unmatched
    neighbour to the other endpoint.
    """
    part = partition_matched(P)
    if not part.v0:
        return P
    v0 = part.v0

    def keeps(u: int, v: int) -> bool:
        return all(not P.prefers(u, w, v) for w in P.prefs(u) if w in v0)

    core = P.induced(part.v1)
    return core.with_edges(e for e in core.edges if keeps(*e) and keeps(e[1], e[0]))
