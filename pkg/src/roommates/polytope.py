"""Fractional stable matching polytopes over exact rationals.

Three variants share one constraint family:

* ``FSM``        coordinates on E; ``x(delta(v)) <= 1``, ``x(phi(e)) >= 1``, ``x >= 0``.
* ``FSM_PRIME``  as FSM, plus ``x_e = 0`` off E_M and both sums taken over E_M.
* ``FSM_BAR``    coordinates on E_M only, constraints as in FSM_PRIME.

Vertices are never certified; the set of feasible points with coordinates in
{0, 1/2, 1} stands in for the vertex set.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadPartition, DomainMismatch, InstanceTooLarge, NotBipartite, NotSemiStable
from .kernels import halfintegral_kernel, run_with_buffer
from .model import Edge, Matching, PreferenceSystem, edge, phi
from .oracle import DEFAULT_MAX_AGENTS
from .reduction import EdgeClassification, ReducedInstance, compute_em, is_bipartite_reducible, reduce_to_h, two_coloring

HALF = Fraction(1, 2)


class PolytopeVariant(enum.Enum):
    FSM = "fsm"
    FSM_PRIME = "fsm-prime"
    FSM_BAR = "fsm-bar"

    @property
    def restricted(self) -> bool:
        return self is not PolytopeVariant.FSM


class FractionalPoint(Mapping):
    """Rational vector over a fixed edge domain; absent coordinates are 0."""

    def __init__(self, coords: Mapping[Sequence[int], object], domain: Iterable[Edge]):
        self.domain = frozenset(edge(*e) for e in domain)
        c: dict[Edge, Fraction] = {}
        for e, val in coords.items():
            e = edge(*e)
            if e not in self.domain:
                raise DomainMismatch(f"coordinate {e} lies outside the point's domain")
            val = Fraction(val)
            if val != 0:
                c[e] = val
        self._c = dict(sorted(c.items()))

    def __getitem__(self, e: Sequence[int]) -> Fraction:
        e = edge(*e)
        if e not in self.domain:
            raise KeyError(e)
        return self._c.get(e, Fraction(0))

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.domain))

    def __len__(self) -> int:
        return len(self.domain)

    @property
    def support(self) -> frozenset[Edge]:
        return frozenset(self._c)

    def nonzero(self) -> dict[Edge, Fraction]:
        return dict(self._c)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    def sum_over(self, edges: Iterable[Edge]) -> Fraction:
        return sum((self._c.get(e, Fraction(0)) for e in edges), Fraction(0))

    def restrict(self, domain: Iterable[Edge]) -> FractionalPoint:
        domain = frozenset(domain)
        return FractionalPoint({e: v for e, v in self._c.items() if e in domain}, domain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FractionalPoint):
            return NotImplemented
        return self.domain == other.domain and self._c == other._c

    def __hash__(self) -> int:
        return hash((self.domain, tuple(self._c.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{u}-{v}: {x}" for (u, v), x in self._c.items())
        return f"FractionalPoint({body})"


def incidence_point(M: Iterable[Edge], domain: Iterable[Edge]) -> FractionalPoint:
    return FractionalPoint({e: 1 for e in M}, domain)


@dataclass(frozen=True)
class Violation:
    kind: str  # "nonnegativity" | "support" | "matching" | "stability"
    index: int | Edge
    lhs: Fraction

    def __str__(self) -> str:
        where = f"{self.index[0]}-{self.index[1]}" if isinstance(self.index, tuple) else str(self.index)
        return f"{self.kind}[{where}] (lhs={self.lhs})"


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.member


def variant_domain(P: PreferenceSystem, variant: PolytopeVariant, em: EdgeClassification | None) -> frozenset[Edge]:
    if variant is PolytopeVariant.FSM_BAR:
        return em.in_em
    return P.edge_set


def _em_for(P: PreferenceSystem, variant: PolytopeVariant, em: EdgeClassification | None) -> EdgeClassification | None:
    if variant.restricted and em is None:
        return compute_em(P)
    return em


def membership(
    P: PreferenceSystem,
    variant: PolytopeVariant,
    x: FractionalPoint,
    em: EdgeClassification | None = None,
) -> MembershipVerdict:
    """Evaluate every constraint of ``variant`` at ``x`` exactly."""
    variant = PolytopeVariant(variant)
    em = _em_for(P, variant, em)
    domain = variant_domain(P, variant, em)
    if x.domain != domain:
        raise DomainMismatch(f"point domain does not match the {variant.value} coordinate set")
    keep = em.in_em if variant.restricted else P.edge_set
    bad: list[Violation] = []
    for e in sorted(domain):
        if x[e] < 0:
            bad.append(Violation("nonnegativity", e, x[e]))
    if variant is PolytopeVariant.FSM_PRIME:
        for e in sorted(P.edge_set - em.in_em):
            if x[e] != 0:
                bad.append(Violation("support", e, x[e]))
    for v in P.agents:
        s = x.sum_over(f for f in P.incident(v) if f in keep)
        if s > 1:
            bad.append(Violation("matching", v, s))
    for e in P.edges:
        s = x.sum_over(f for f in phi(P, e) if f in keep)
        if s < 1:
            bad.append(Violation("stability", e, s))
    return MembershipVerdict(not bad, tuple(bad))


# -- semi-stable partitions ----------------------------------------------------


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the smallest vertex, second vertex below the last."""
    c = list(cycle)
    i = c.index(min(c))
    c = c[i:] + c[:i]
    if len(c) > 2 and c[1] > c[-1]:
        c = [c[0]] + c[1:][::-1]
    return tuple(c)


def cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    return [edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def has_cyclic_preferences(P: PreferenceSystem, cycle: Sequence[int]) -> bool:
    """Each vertex prefers its successor to its predecessor, in one of the
    two directions."""
    k = len(cycle)
    if k < 3:
        return False
    fwd = all(P.prefers(cycle[i], cycle[(i + 1) % k], cycle[i - 1]) for i in range(k))
    bwd = all(P.prefers(cycle[i], cycle[i - 1], cycle[(i + 1) % k]) for i in range(k))
    return fwd or bwd


@dataclass(frozen=True)
class SemiStablePartition:
    singles: frozenset[Edge]
    cycles: frozenset[tuple[int, ...]]

    @classmethod
    def make(cls, singles: Iterable[Sequence[int]] = (), cycles: Iterable[Sequence[int]] = ()) -> SemiStablePartition:
        return cls(frozenset(edge(*e) for e in singles), frozenset(canonical_cycle(c) for c in cycles))

    def edges(self) -> frozenset[Edge]:
        out = set(self.singles)
        for c in self.cycles:
            out.update(cycle_edges(c))
        return frozenset(out)

    def point(self, domain: Iterable[Edge]) -> FractionalPoint:
        coords: dict[Edge, Fraction] = {e: Fraction(1) for e in self.singles}
        for c in self.cycles:
            for e in cycle_edges(c):
                coords[e] = HALF
        return FractionalPoint(coords, domain)

    def __repr__(self) -> str:
        s = " ".join(f"{u}-{v}" for u, v in sorted(self.singles))
        c = " ".join("(" + "-".join(map(str, cy)) + ")" for cy in sorted(self.cycles))
        return f"SemiStablePartition(singles=[{s}], cycles=[{c}])"


def check_partition(P: PreferenceSystem, C: SemiStablePartition, allowed: frozenset[Edge]) -> None:
    """Raise BadPartition unless ``C`` covers every agent exactly once with
    allowed edges and cyclic-preference cycles."""
    seen: list[int] = []
    for u, v in C.singles:
        if (u, v) not in allowed:
            raise BadPartition(f"single edge {u}-{v} is not an allowed edge")
        seen += [u, v]
    for c in C.cycles:
        if len(c) < 3:
            raise BadPartition(f"cycle {c} is too short")
        for e in cycle_edges(c):
            if e not in allowed:
                raise BadPartition(f"cycle {c} uses edge {e} which is not allowed")
        if not has_cyclic_preferences(P, c):
            raise BadPartition(f"cycle {c} has no cyclic preferences")
        seen += list(c)
    if len(seen) != len(set(seen)):
        raise BadPartition("components overlap")
    if set(seen) != set(P.agents):
        raise BadPartition("components do not cover every agent")


def semistable_feasible(
    P: PreferenceSystem,
    C: SemiStablePartition,
    variant: PolytopeVariant,
    em: EdgeClassification | None = None,
) -> bool:
    variant = PolytopeVariant(variant)
    em = _em_for(P, variant, em)
    allowed = em.in_em if variant.restricted else P.edge_set
    check_partition(P, C, allowed)
    return membership(P, variant, C.point(variant_domain(P, variant, em)), em).member


def _cycles_from(P: PreferenceSystem, start: int, free: set[int], allowed: frozenset[Edge]) -> Iterator[tuple[int, ...]]:
    """Cyclic-preference cycles whose smallest vertex is ``start``."""
    nbrs = {v: [u for u in P.prefs(v) if edge(u, v) in allowed] for v in free | {start}}

    def ok_at(pred: int, v: int, succ: int, forward: bool) -> bool:
        return P.prefers(v, succ, pred) if forward else P.prefers(v, pred, succ)

    path = [start]
    on_path = {start}

    def extend(forward: bool | None) -> Iterator[tuple[int, ...]]:
        tail = path[-1]
        for nxt in nbrs[tail]:
            if nxt == start and len(path) >= 3 and path[1] < path[-1]:
                if forward is not None and ok_at(path[-2], tail, start, forward) and ok_at(tail, start, path[1], forward):
                    yield tuple(path)
                continue
            if nxt in on_path or nxt not in free or nxt < start:
                continue
            orient = forward
            if len(path) >= 2:
                if orient is None:
                    orient = P.prefers(tail, nxt, path[-2])
                elif not ok_at(path[-2], tail, nxt, orient):
                    continue
            path.append(nxt)
            on_path.add(nxt)
            yield from extend(orient)
            path.pop()
            on_path.discard(nxt)

    yield from extend(None)


def enumerate_semistable(
    P: PreferenceSystem,
    variant: PolytopeVariant,
    em: EdgeClassification | None = None,
    max_agents: int = DEFAULT_MAX_AGENTS,
) -> frozenset[SemiStablePartition]:
    """All semi-stable partitions w.r.t. ``variant``, by exhaustive search."""
    if len(P) > max_agents:
        raise InstanceTooLarge(f"{len(P)} agents exceeds the bound of {max_agents}")
    variant = PolytopeVariant(variant)
    em = _em_for(P, variant, em)
    allowed = em.in_em if variant.restricted else P.edge_set
    domain = variant_domain(P, variant, em)
    found: set[SemiStablePartition] = set()
    singles: list[Edge] = []
    cycles: list[tuple[int, ...]] = []

    def rec(free: set[int]) -> None:
        if not free:
            C = SemiStablePartition(frozenset(singles), frozenset(cycles))
            if membership(P, variant, C.point(domain), em).member:
                found.add(C)
            return
        v = min(free)
        rest = free - {v}
        for u in P.prefs(v):
            if u in rest and edge(u, v) in allowed:
                singles.append(edge(u, v))
                rec(rest - {u})
                singles.pop()
        for c in list(_cycles_from(P, v, rest, allowed)):
            cycles.append(canonical_cycle(c))
            rec(rest - set(c))
            cycles.pop()

    rec(set(P.agents))
    return frozenset(found)


# -- H_C ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HCGraph:
    edges: frozenset[Edge]
    bipartite: bool
    odd_cycle: tuple[int, ...] | None = None


def build_hc(
    P: PreferenceSystem,
    C: SemiStablePartition,
    reduced: ReducedInstance | None = None,
) -> HCGraph:
    """Partition edges plus every H-edge sandwiched between partition edges
    in both endpoints' lists."""
    if reduced is None:
        reduced = reduce_to_h(P)
    if not semistable_feasible(P, C, PolytopeVariant.FSM_BAR, reduced.em):
        raise BadPartition("partition is not feasible for the projected polytope")
    h = reduced.h
    span: dict[int, tuple[int, int]] = {}
    for u, v in C.edges():
        for a, b in ((u, v), (v, u)):
            r = P.rank(a, b)
            lo, hi = span.get(a, (r, r))
            span[a] = (min(lo, r), max(hi, r))

    def inside(a: int, b: int) -> bool:
        lo, hi = span[a]
        return lo <= P.rank(a, b) <= hi

    ec = frozenset(e for e in h.edges if inside(*e) and inside(e[1], e[0]))
    _, odd = two_coloring(h.with_edges(ec))
    return HCGraph(ec, odd is None, odd)


# -- half-integral points --------------------------------------------------------------


def halfintegral_points(
    P: PreferenceSystem,
    variant: PolytopeVariant,
    em: EdgeClassification | None = None,
    max_agents: int = DEFAULT_MAX_AGENTS,
) -> frozenset[FractionalPoint]:
    """Every feasible point with coordinates in {0, 1/2, 1}."""
    if len(P) > max_agents:
        raise InstanceTooLarge(f"{len(P)} agents exceeds the bound of {max_agents}")
    variant = PolytopeVariant(variant)
    em = _em_for(P, variant, em)
    free = sorted(em.in_em) if variant.restricted else list(P.edges)
    domain = variant_domain(P, variant, em)
    col = {e: i for i, e in enumerate(free)}
    vidx = {a: i for i, a in enumerate(P.agents)}
    d = len(free)
    ends = np.array([[vidx[u], vidx[v]] for u, v in free], dtype=np.int64).reshape(d, 2)
    rows = set()
    for e in P.edges:
        row = tuple(sorted(col[f] for f in phi(P, e) if f in col))
        if not row:
            return frozenset()
        rows.add(row)
    rows = sorted(rows, key=lambda r: (r[-1], r))
    row_ptr = np.zeros(len(rows) + 1, dtype=np.int64)
    row_idx = np.array([i for r in rows for i in r], dtype=np.int64)
    row_ptr[1:] = np.cumsum([len(r) for r in rows])
    close_ptr = np.zeros(d + 1, dtype=np.int64)
    for r in rows:
        close_ptr[r[-1] + 1] += 1
    close_ptr = np.cumsum(close_ptr)
    close_rows = np.arange(len(rows), dtype=np.int64)
    out = run_with_buffer(
        halfintegral_kernel, d, d, len(vidx), ends, row_ptr, row_idx, close_ptr, close_rows
    )
    points = set()
    for row in out:
        coords = {free[i]: Fraction(int(h), 2) for i, h in enumerate(row.tolist()) if h}
        points.add(FractionalPoint(coords, domain))
    return frozenset(points)


def support_structure(P: PreferenceSystem, x: FractionalPoint) -> SemiStablePartition:
    """Read a point as singles (value 1) and cycles (value 1/2).

    Raises NotSemiStable if the support is anything else, fails to cover
    every agent, or a cycle lacks cyclic preferences.
    """
    singles = [e for e, v in x.nonzero().items() if v == 1]
    halves = [e for e, v in x.nonzero().items() if v == HALF]
    if len(singles) + len(halves) != len(x.nonzero()):
        raise NotSemiStable("coordinates outside {0, 1/2, 1}")
    adj: dict[int, list[int]] = {}
    for u, v in halves:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(n) != 2 for n in adj.values()):
        raise NotSemiStable("half-valued edges do not form disjoint cycles")
    cycles = []
    todo = set(adj)
    while todo:
        s = min(todo)
        cyc = [s]
        prev, cur = s, adj[s][0]
        while cur != s:
            cyc.append(cur)
            prev, cur = cur, adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        todo -= set(cyc)
        cycles.append(cyc)
    try:
        C = SemiStablePartition.make(singles, cycles)
        check_partition(P, C, P.edge_set)
    except BadPartition as exc:
        raise NotSemiStable(str(exc)) from None
    return C


def decompose_fractional(
    P: PreferenceSystem,
    x: FractionalPoint,
    parts: tuple[frozenset[int], frozenset[int]] | None = None,
    reduced: ReducedInstance | None = None,
) -> tuple[Matching, Matching]:
    """Split a semi-stable point into two stable matchings averaging to it.

    Cycle vertices on one side of H's bipartition take their preferred cycle
    neighbour in the first matching; the other side does so in the second.
    """
    C = support_structure(P, x)
    if reduced is None:
        reduced = reduce_to_h(P)
    if not semistable_feasible(P, C, PolytopeVariant.FSM_BAR, reduced.em):
        raise NotSemiStable("point is not feasible for the projected polytope")
    if parts is None:
        verdict = is_bipartite_reducible(P, reduced)
        if not verdict:
            raise NotBipartite(f"H has an odd cycle {verdict.odd_cycle}")
        parts = verdict.parts
    side_a = parts[0]
    m1, m2 = set(C.singles), set(C.singles)
    for cyc in C.cycles:
        k = len(cyc)
        for i, v in enumerate(cyc):
            succ, pred = cyc[(i + 1) % k], cyc[i - 1]
            best = succ if P.prefers(v, succ, pred) else pred
            (m1 if v in side_a else m2).add(edge(v, best))
    M1, M2 = Matching(m1), Matching(m2)
    avg = {e: Fraction(int(e in M1) + int(e in M2), 2) for e in M1 | M2}
    if FractionalPoint(avg, x.domain | M1 | M2) != FractionalPoint(x.nonzero(), x.domain | M1 | M2):
        raise NotSemiStable("decomposition does not average to the point")
    return M1, M2
