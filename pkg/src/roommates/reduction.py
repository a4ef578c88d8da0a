"""Edges that occur in stable matchings, and the canonical subgraph H.

All routines here assume the instance is in perfect-core form: it has a
stable matching and every stable matching is perfect (see
:func:`roommates.irving.perfect_core`).  They raise :class:`NotPerfectCore`
otherwise.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import EdgeInEM, NoStableMatching, NotPerfectCore
from .irving import find_stable_matching
from .model import Edge, PreferenceSystem, edge, other


@dataclass(frozen=True)
class EdgeClassification:
    in_em: frozenset[Edge]
    out_em: frozenset[Edge]

    def __contains__(self, e: object) -> bool:
        return e in self.in_em


@dataclass(frozen=True)
class ReducedInstance:
    h: PreferenceSystem
    removal_log: tuple[Edge, ...]
    em: EdgeClassification


@dataclass(frozen=True)
class Reducibility:
    reducible: bool
    h: PreferenceSystem
    parts: tuple[frozenset[int], frozenset[int]] | None = None
    odd_cycle: tuple[int, ...] | None = field(default=None)

    def __bool__(self) -> bool:
        return self.reducible


def has_perfect_stable_matching(P: PreferenceSystem) -> bool:
    """Irving plus a size check; enough because matched sets never vary."""
    M = find_stable_matching(P)
    return not isinstance(M, NoStableMatching) and 2 * len(M) == len(P)


def require_perfect_core(P: PreferenceSystem) -> None:
    if not has_perfect_stable_matching(P):
        raise NotPerfectCore("instance must have a stable matching and all of them perfect")


def forced_surgery(P: PreferenceSystem, forced: Sequence[Edge]) -> PreferenceSystem | None:
    """Residual instance for stable matchings containing ``forced``.

    Removes the endpoints of the forced edges, then every edge ``wy`` for
    which some forced pair ``x-z`` has ``x`` preferring ``w`` to ``z`` while
    ``w`` prefers ``x`` to ``y``: choosing ``wy`` would let ``xw`` block.
    Returns None when two forced endpoints already block each other.

    A perfect matching of ``P`` extending ``forced`` is stable in ``P`` iff
    its remainder is a perfect stable matching of the result.
    """
    mate: dict[int, int] = {}
    for u, v in forced:
        mate[u] = v
        mate[v] = u
    for a in mate:
        for b in P.prefs(a):
            if b in mate and b != mate[a] and P.prefers(a, b, mate[a]) and P.prefers(b, a, mate[b]):
                return None
    rest = P.induced(v for v in P.agents if v not in mate)
    doomed: set[Edge] = set()
    for x, z in mate.items():
        for w in P.prefs(x):
            if w == z:
                break
            if w in mate:
                continue
            # x likes w better than z, so w must end up with someone it prefers to x
            past_x = False
            for y in P.prefs(w):
                if y == x:
                    past_x = True
                elif past_x and y not in mate:
                    doomed.add(edge(w, y))
    return rest.without_edges(doomed)


def edge_in_some_stable(P: PreferenceSystem, e: Sequence[int], *, checked: bool = False) -> bool:
    """Whether some stable matching of ``P`` contains ``e``."""
    u, v = P.check_edge(tuple(e))
    if not checked:
        require_perfect_core(P)
    residual = forced_surgery(P, [(u, v)])
    return residual is not None and has_perfect_stable_matching(residual)


def compute_em(P: PreferenceSystem) -> EdgeClassification:
    require_perfect_core(P)
    inside = frozenset(e for e in P.edges if edge_in_some_stable(P, e, checked=True))
    return EdgeClassification(inside, P.edge_set - inside)


def worst_for_an_endpoint(P: PreferenceSystem, e: Edge) -> bool:
    u, v = e
    return P.last(u) == v or P.last(v) == u


def reduce_to_h(
    P: PreferenceSystem,
    em: EdgeClassification | None = None,
    rng: random.Random | None = None,
) -> ReducedInstance:
    """Delete non-stable edges that are some endpoint's worst option, until
    none is left.

    The smallest eligible edge goes first unless ``rng`` picks at random.
    """
    if em is None:
        em = compute_em(P)
    lists = {a: list(P.prefs(a)) for a in P.agents}
    log: list[Edge] = []

    def eligible() -> list[Edge]:
        out = set()
        for a, seq in lists.items():
            if seq:
                f = edge(a, seq[-1])
                if f not in em.in_em:
                    out.add(f)
        return sorted(out)

    while True:
        cands = eligible()
        if not cands:
            break
        f = cands[0] if rng is None else rng.choice(cands)
        lists[f[0]].remove(f[1])
        lists[f[1]].remove(f[0])
        log.append(f)
    return ReducedInstance(PreferenceSystem(lists), tuple(log), em)


def is_valid_removal_sequence(P: PreferenceSystem, em: EdgeClassification, log: Iterable[Sequence[int]]) -> bool:
    """Replay ``log``: each edge must be outside E_M and, when removed, the
    worst remaining option of one endpoint."""
    current = P
    for f in log:
        f = edge(*f)
        if not current.has_edge(*f) or f in em.in_em or not worst_for_an_endpoint(current, f):
            return False
        current = current.without_edges([f])
    return True


def removal_preserves(P: PreferenceSystem, e: Sequence[int], em: EdgeClassification | None = None) -> bool:
    """Whether deleting ``e`` (outside E_M) leaves the stable set unchanged.

    A new stable matching of ``G - e`` would be one that ``e`` blocks in
    ``G``: both endpoints hold partners they rank below each other.  Each
    such pair of partner edges is tested for extension to a perfect stable
    matching of ``G - e``.
    """
    u, v = P.check_edge(tuple(e))
    if em is None:
        em = compute_em(P)
    if (u, v) in em.in_em:
        raise EdgeInEM((u, v))
    rest = P.without_edges([(u, v)])
    below_u = [edge(u, x) for x in P.prefs(u) if P.prefers(u, v, x)]
    below_v = [edge(v, y) for y in P.prefs(v) if P.prefers(v, u, y)]
    for f1 in below_u:
        for f2 in below_v:
            if other(f1, u) == other(f2, v):
                continue
            residual = forced_surgery(rest, [f1, f2])
            if residual is not None and has_perfect_stable_matching(residual):
                return False
    return True


def two_coloring(P: PreferenceSystem) -> tuple[dict[int, int], tuple[int, ...] | None]:
    """BFS 2-colouring, smallest agent of each component gets colour 0.

    Returns the colouring and, if it fails, an odd cycle.
    """
    color: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for s in P.agents:
        if s in color:
            continue
        color[s] = 0
        parent[s] = None
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in P.prefs(a):
                if b not in color:
                    color[b] = 1 - color[a]
                    parent[b] = a
                    queue.append(b)
                elif color[b] == color[a]:
                    return color, _odd_cycle(parent, a, b)
    return color, None


def _odd_cycle(parent: dict[int, int | None], a: int, b: int) -> tuple[int, ...]:
    def path(x: int) -> list[int]:
        out = [x]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    pa, pb = path(a), path(b)
    common = set(pa) & set(pb)
    i = next(k for k, x in enumerate(pa) if x in common)
    j = pb.index(pa[i])
    return tuple(pa[: i + 1] + pb[:j][::-1])


def is_bipartite_reducible(P: PreferenceSystem, reduced: ReducedInstance | None = None) -> Reducibility:
    """H is bipartite iff some bipartite subgraph has the same stable set."""
    if reduced is None:
        reduced = reduce_to_h(P)
    color, odd = two_coloring(reduced.h)
    if odd is not None:
        return Reducibility(False, reduced.h, odd_cycle=odd)
    a = frozenset(v for v, c in color.items() if c == 0)
    b = frozenset(v for v, c in color.items() if c == 1)
    return Reducibility(True, reduced.h, (a, b))
