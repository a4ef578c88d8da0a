"""Factor-2 minimum-weight stable matching when E_M splits into single
edges and disjoint cycles.

Every stable matching keeps the single edges and picks one of the two
perfect matchings ("orientations") of each cycle.  After reweighting, only
the costlier orientation of a cycle carries a premium ``c >= 0``, and an
intermediate edge ``uv`` of H rules out the combinations in which both
``u`` and ``v`` hold their worse stable partner.  That leaves a
minimum-cost two-literal problem, solved here by a half-integral relaxation
and rounding.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionViolated
from .irving import perfect_core
from .model import Edge, EdgeWeights, Matching, PreferenceSystem, edge, is_stable
from .optcore import UNSATISFIABLE, ClosureInstance, TwoLitSystem, min_weight_closure_condensed, two_sat
from .polytope import canonical_cycle, has_cyclic_preferences
from .reduction import EdgeClassification, compute_em, reduce_to_h

log = logging.getLogger(__name__)

#: How often each solution path was taken since import.
PATH_COUNTS: Counter[str] = Counter()


@dataclass(frozen=True)
class CycleInfo:
    vertices: tuple[int, ...]
    plus: frozenset[Edge]  # the costlier orientation, holds the reference edge
    minus: frozenset[Edge]
    reference: Edge
    w_plus: Fraction
    w_minus: Fraction

    @property
    def premium(self) -> Fraction:
        return self.w_plus - self.w_minus


@dataclass(frozen=True)
class CycleStructure:
    singles: frozenset[Edge]
    cycles: tuple[CycleInfo, ...]
    em: EdgeClassification

    def cycle_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.cycles) for v in c.vertices}

    def matching(self, orientation: Mapping[int, bool]) -> Matching:
        """Singles plus, per cycle, ``plus`` if the flag is set else ``minus``."""
        chosen = set(self.singles)
        for i, c in enumerate(self.cycles):
            chosen |= c.plus if orientation[i] else c.minus
        return Matching(chosen)


def _orientations(cyc: tuple[int, ...]) -> tuple[frozenset[Edge], frozenset[Edge]]:
    k = len(cyc)
    even = frozenset(edge(cyc[i], cyc[i + 1]) for i in range(0, k, 2))
    odd = frozenset(edge(cyc[i], cyc[(i + 1) % k]) for i in range(1, k, 2))
    return even, odd


def check_cycle_form(P: PreferenceSystem, w: EdgeWeights | None = None, em: EdgeClassification | None = None) -> CycleStructure:
    """Split E_M into single edges and even cyclic-preference cycles.

    ``P`` must be in perfect-core form.  Raises PreconditionViolated naming
    a vertex of E_M-degree three or more.  Without ``w`` all premiums are 0.
    """
    if em is None:
        em = compute_em(P)
    adj: dict[int, list[int]] = {v: [] for v in P.agents}
    for u, v in sorted(em.in_em):
        adj[u].append(v)
        adj[v].append(u)
    for v in P.agents:
        if len(adj[v]) >= 3:
            raise PreconditionViolated(
                f"agent {v} has {len(adj[v])} stable partners", vertex=v, degree=len(adj[v])
            )
    singles: set[Edge] = set()
    cycles: list[CycleInfo] = []
    seen: set[int] = set()
    weight = (lambda e: w[e]) if w is not None else (lambda e: Fraction(0))
    for s in P.agents:
        if s in seen:
            continue
        if len(adj[s]) == 1:
            t = adj[s][0]
            if len(adj[t]) != 1:
                raise PreconditionViolated(f"stable-edge component at {s} is a path", vertex=s, degree=1)
            singles.add(edge(s, t))
            seen |= {s, t}
            continue
        if not adj[s]:
            raise PreconditionViolated(f"agent {s} has no stable partner", vertex=s, degree=0)
        cyc = [s]
        prev, cur = s, adj[s][0]
        while cur != s:
            if len(adj[cur]) != 2:
                raise PreconditionViolated(f"stable-edge component at {s} is a path", vertex=cur, degree=len(adj[cur]))
            cyc.append(cur)
            prev, cur = cur, adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        seen |= set(cyc)
        cyc = canonical_cycle(cyc)
        if len(cyc) % 2 or not has_cyclic_preferences(P, cyc):
            raise PreconditionViolated(f"stable-edge cycle {cyc} is odd or lacks cyclic preferences", vertex=s, degree=2)
        a, b = _orientations(cyc)
        wa = sum((weight(e) for e in a), Fraction(0))
        wb = sum((weight(e) for e in b), Fraction(0))
        # ties go to the orientation holding the smallest cycle edge
        if wb > wa or (wb == wa and min(b) < min(a)):
            a, b, wa, wb = b, a, wb, wa
        cycles.append(CycleInfo(cyc, a, b, min(a), wa, wb))
    return CycleStructure(frozenset(singles), tuple(cycles), em)


@dataclass(frozen=True)
class TildeWeights:
    wtilde: EdgeWeights
    w_minus_total: Fraction


def tilde_weights(P: PreferenceSystem, S: CycleStructure, w: EdgeWeights) -> TildeWeights:
    """Premium on each cycle's reference edge, zero elsewhere; the shared
    part goes into the constant."""
    wt = EdgeWeights(P, {c.reference: c.premium for c in S.cycles}, warn=False)
    const = sum((c.w_minus for c in S.cycles), Fraction(0)) + sum((w[e] for e in S.singles), Fraction(0))
    return TildeWeights(wt, const)


@dataclass(frozen=True)
class OrientationProblem:
    """One boolean per cycle (true: the ``plus`` orientation).

    ``polarity[v]`` is the cycle value under which ``v`` holds its preferred
    stable partner, so the vertex literal ``p_v`` is ``(cycle_of[v], polarity[v])``.
    """

    system: TwoLitSystem
    cycle_of: Mapping[int, int]
    polarity: Mapping[int, bool]
    vertex_clauses: tuple[tuple[int, int], ...]  # intermediate edges u-v read as (p_u or p_v)


def orientation_constraints(P: PreferenceSystem, S: CycleStructure, h: PreferenceSystem | None = None) -> OrientationProblem:
    if h is None:
        h = reduce_to_h(P, S.em).h
    cycle_of = S.cycle_of()
    polarity: dict[int, bool] = {}
    best: dict[int, int] = {}
    for i, c in enumerate(S.cycles):
        k = len(c.vertices)
        for j, v in enumerate(c.vertices):
            a, b = c.vertices[j - 1], c.vertices[(j + 1) % k]
            best[v] = a if P.prefers(v, a, b) else b
            polarity[v] = edge(v, best[v]) in c.plus
    clauses = []
    forced: dict[int, bool] = {}
    vertex_clauses = []
    for u, v in h.edges:
        if (u, v) in S.em.in_em:
            continue
        if u not in cycle_of or v not in cycle_of:
            raise AssertionError(f"intermediate edge {u}-{v} touches a single edge")
        vertex_clauses.append((u, v))
        lu, lv = (cycle_of[u], polarity[u]), (cycle_of[v], polarity[v])
        if lu[0] == lv[0]:
            if lu[1] == lv[1]:
                if forced.setdefault(lu[0], lu[1]) != lu[1]:
                    raise AssertionError(f"cycle {lu[0]} is forced both ways; no stable matching")
            continue
        clauses.append((lu, lv))
    system = TwoLitSystem(tuple(range(len(S.cycles))), tuple(sorted(set(clauses))), forced)
    return OrientationProblem(system, cycle_of, polarity, tuple(vertex_clauses))


@dataclass(frozen=True)
class ApproxResult:
    matching: Matching
    weight: Fraction
    bound: Fraction
    path: str  # "integral" | "rounded" | "fallback"
    relaxation: Fraction


def relax_orientation(cost: list[Fraction], system: TwoLitSystem) -> tuple[dict[int, Fraction], Fraction]:
    """Half-integral optimum of the split relaxation of
    ``min sum(cost[i] * q[i])`` over the clauses of ``system``.

    Each cycle variable ``q`` gets two copies: ``("P", i)`` chosen means
    ``q = 1`` in the first copy, ``("N", i)`` chosen means ``q = 0`` in the
    second, and ``q = (P + 1 - N) / 2``.  Every clause becomes two
    implications between copies, all of the "chosen requires chosen" form.
    The value is a lower bound on every satisfying assignment's cost.
    """
    weights: dict[tuple[str, int], Fraction] = {}
    for i, c in enumerate(cost):
        weights[("P", i)] = c / 2
        weights[("N", i)] = -c / 2
    big = sum(cost, Fraction(0)) + 1
    for i, val in system.forced.items():
        weights[("P", i)] += -big if val else big
        weights[("N", i)] += big if val else -big
    req: list[tuple[tuple[str, int], tuple[str, int]]] = []  # (b, a): b chosen requires a chosen
    for (i, si), (j, sj) in system.clauses:
        for (x, sx), (y, sy) in (((i, si), (j, sj)), ((j, sj), (i, si))):
            # not lit_x (read on one copy) implies lit_y (read on the other)
            if sx and sy:
                req.append((("N", x), ("P", y)))
            elif not sx and not sy:
                req.append((("P", x), ("N", y)))
            elif sx and not sy:
                # x false => y false, i.e. y true => x true, on matching copies
                req.append((("P", y), ("P", x)))
                req.append((("N", x), ("N", y)))
            else:
                req.append((("P", x), ("P", y)))
                req.append((("N", y), ("N", x)))
    chosen, total = min_weight_closure_condensed(ClosureInstance(weights, tuple(req)))
    q = {i: Fraction(int(("P", i) in chosen) + 1 - int(("N", i) in chosen), 2) for i in range(len(cost))}
    value = sum((cost[i] * q[i] for i in q), Fraction(0))
    return q, value


def _cheapen(system: TwoLitSystem, assign: dict[int, bool], cost: list[Fraction]) -> dict[int, bool]:
    """Greedily switch premium orientations off while all clauses hold."""
    assign = dict(assign)
    for i in sorted(range(len(cost)), key=lambda i: -cost[i]):
        if assign[i] and cost[i] > 0 and i not in system.forced:
            assign[i] = False
            if not system.satisfied_by(assign):
                assign[i] = True
    return assign


def exact_orientation(cost: list[Fraction], system: TwoLitSystem) -> dict[int, bool] | None:
    """Exact minimum-cost satisfying assignment by DFS with unit propagation."""
    n = len(cost)
    watch: dict[int, list[tuple[tuple[int, bool], tuple[int, bool]]]] = {i: [] for i in range(n)}
    for a, b in system.clauses:
        watch[a[0]].append((a, b))
        watch[b[0]].append((b, a))
    best: list = [None, None]

    def propagate(assign: dict[int, bool], var: int) -> bool:
        stack = [var]
        while stack:
            x = stack.pop()
            for (vx, px), (vy, py) in watch[x]:
                if assign[x] == px:
                    continue
                if vy in assign:
                    if assign[vy] != py:
                        return False
                else:
                    assign[vy] = py
                    stack.append(vy)
        return True

    def spent(assign: dict[int, bool]) -> Fraction:
        return sum((cost[i] for i, v in assign.items() if v), Fraction(0))

    def rec(assign: dict[int, bool]) -> None:
        if best[0] is not None and spent(assign) >= best[0]:
            return
        free = [i for i in range(n) if i not in assign]
        if not free:
            best[0], best[1] = spent(assign), dict(assign)
            return
        i = free[0]
        for val in (False, True):
            trial = dict(assign)
            trial[i] = val
            if propagate(trial, i):
                rec(trial)

    start: dict[int, bool] = {}
    for i, val in system.forced.items():
        start[i] = val
    if all(propagate(start, i) for i in list(start)):
        rec(start)
    return best[1]


@dataclass(frozen=True)
class OrientationSolution:
    assign: dict[int, bool]
    path: str  # "integral" | "rounded" | "fallback"
    relaxation: Fraction  # lower bound on the optimal cost

    def cost(self, cost: list[Fraction]) -> Fraction:
        return sum((cost[i] for i, v in self.assign.items() if v), Fraction(0))


def solve_orientation(cost: list[Fraction], system: TwoLitSystem) -> OrientationSolution:
    """Relax, round the half-valued variables through the residual clauses,
    and search exactly if that residual turns out unsatisfiable.

    Off the fallback path the cost is at most twice the relaxation value.
    ``system`` must be satisfiable.
    """
    if two_sat(system) is UNSATISFIABLE:
        raise AssertionError("orientation constraints are unsatisfiable")
    q, value = relax_orientation(cost, system)
    fixed = {i: v == 1 for i, v in q.items() if v != Fraction(1, 2)}
    if len(fixed) == len(q):
        if system.satisfied_by(fixed):
            return OrientationSolution(fixed, "integral", value)
    else:
        residual = TwoLitSystem(system.variables, system.clauses, {**system.forced, **fixed})
        sol = two_sat(residual)
        if sol is not UNSATISFIABLE:
            return OrientationSolution(_cheapen(residual, sol, cost), "rounded", value)
    log.info("rounded orientation infeasible; running exact search")
    return OrientationSolution(exact_orientation(cost, system), "fallback", value)


def approximate_min_weight(P: PreferenceSystem, w: EdgeWeights) -> tuple[Matching, Fraction, Fraction]:
    res = approximate_report(P, w)
    return res.matching, res.weight, res.bound


def approximate_report(P: PreferenceSystem, w: EdgeWeights) -> ApproxResult:
    """Stable matching of weight at most twice the optimum, with the path taken."""
    core = perfect_core(P)
    S = check_cycle_form(core, w)
    tw = tilde_weights(P, S, w)
    cost = [c.premium for c in S.cycles]
    sol = solve_orientation(cost, orientation_constraints(core, S).system)
    lower = sol.relaxation + tw.w_minus_total
    if sol.path == "integral":
        bound = lower
    elif sol.path == "rounded":
        bound = 2 * lower
    else:
        bound = sol.cost(cost) + tw.w_minus_total
    PATH_COUNTS[sol.path] += 1
    M = S.matching(sol.assign)
    verdict = is_stable(P, M)
    if not verdict:
        raise AssertionError(f"constructed matching is blocked by {verdict.witness}")
    return ApproxResult(M, w.total(M), bound, sol.path, lower)
