"""Exhaustive ground truth for small instances.

Everything here is exponential on purpose and refuses instances with more
than ``max_agents`` agents (12 by default).
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .errors import NO_STABLE_MATCHING, InstanceTooLarge, NoStableMatching
from .kernels import run_with_buffer, stable_matchings_kernel
from .model import Edge, EdgeWeights, Matching, PreferenceSystem, as_matching, edge

DEFAULT_MAX_AGENTS = 12

Direction = Literal["min", "max"]


@dataclass(frozen=True)
class StableSet:
    matchings: frozenset[Matching]

    def __iter__(self) -> Iterator[Matching]:
        return iter(sorted(self.matchings, key=lambda m: m.sorted()))

    def __len__(self) -> int:
        return len(self.matchings)

    def __contains__(self, m: object) -> bool:
        return m in self.matchings

    def __bool__(self) -> bool:
        return bool(self.matchings)

    def edge_union(self) -> frozenset[Edge]:
        return frozenset(e for m in self.matchings for e in m)

    def matched_vertices(self) -> list[frozenset[int]]:
        return [m.vertices for m in self]


def instance_arrays(P: PreferenceSystem):
    """Dense index form of ``P``: ``(agents, ptr, adj, rank)``."""
    agents = P.agents
    index = {a: i for i, a in enumerate(agents)}
    n = len(agents)
    ptr = np.zeros(n + 1, dtype=np.int64)
    adj = np.zeros(sum(P.degree(a) for a in agents), dtype=np.int64)
    rank = np.full((n, n), n + 1, dtype=np.int64)
    pos = 0
    for i, a in enumerate(agents):
        for r, b in enumerate(P.prefs(a)):
            adj[pos] = index[b]
            rank[i, index[b]] = r
            pos += 1
        ptr[i + 1] = pos
    return agents, ptr, adj, rank


def _check_size(P: PreferenceSystem, max_agents: int) -> None:
    if len(P) > max_agents:
        raise InstanceTooLarge(f"{len(P)} agents exceeds the brute-force bound of {max_agents}")


def enumerate_stable_matchings(
    P: PreferenceSystem, max_agents: int = DEFAULT_MAX_AGENTS, limit: int | None = None
) -> StableSet:
    """All stable matchings of ``P`` by exhaustive search over matchings."""
    _check_size(P, max_agents)
    agents, ptr, adj, rank = instance_arrays(P)
    n = len(agents)
    rows = run_with_buffer(stable_matchings_kernel, n, n, ptr, adj, rank, limit=limit)
    found = set()
    for row in rows:
        found.add(Matching(edge(agents[i], agents[j]) for i, j in enumerate(row.tolist()) if j > i))
    return StableSet(frozenset(found))


def extends_to_stable(
    P: PreferenceSystem, F: Iterable[Sequence[int]], max_agents: int = DEFAULT_MAX_AGENTS
) -> bool:
    """Whether some stable matching contains every edge of ``F``."""
    forced = as_matching(P, F)
    return any(forced <= m for m in enumerate_stable_matchings(P, max_agents))


def brute_optimum(
    P: PreferenceSystem,
    w: EdgeWeights,
    direction: Direction = "min",
    max_agents: int = DEFAULT_MAX_AGENTS,
) -> tuple[Matching, Fraction] | NoStableMatching:
    """Stable matching of extreme weight; ties go to the smallest edge list."""
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be 'min' or 'max', not {direction!r}")
    stable = enumerate_stable_matchings(P, max_agents)
    if not stable:
        return NO_STABLE_MATCHING
    sign = 1 if direction == "min" else -1
    best = min(stable, key=lambda m: (sign * w.total(m), m.sorted()))
    return best, w.total(best)


def argmin_set(P: PreferenceSystem, w: EdgeWeights, max_agents: int = DEFAULT_MAX_AGENTS) -> frozenset[Matching]:
    """All minimum-weight stable matchings."""
    stable = enumerate_stable_matchings(P, max_agents)
    if not stable:
        return frozenset()
    best = min(w.total(m) for m in stable)
    return frozenset(m for m in stable if w.total(m) == best)

