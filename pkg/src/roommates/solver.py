"""Exact weighted stable matching on bipartite-reducible instances.

H is bipartite, so its stable matchings form a distributive lattice.  The
proposer-optimal matching plus a rotation poset describes all of them, and
the best one is a minimum-weight closure of that poset.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotBipartite, NotReducible
from .irving import perfect_core
from .model import Edge, EdgeWeights, Matching, PreferenceSystem, edge
from .optcore import ClosureInstance, min_weight_closure
from .reduction import is_bipartite_reducible


def _check_sides(P: PreferenceSystem, side: frozenset[int]) -> None:
    for u, v in P.edges:
        if (u in side) == (v in side):
            raise NotBipartite(f"edge {u}-{v} does not cross the given side")


def proposer_optimal(P: PreferenceSystem, side: Iterable[int]) -> Matching:
    """Deferred acceptance with the agents of ``side`` proposing."""
    side = frozenset(side)
    _check_sides(P, side)
    nxt = dict.fromkeys(side, 0)
    held: dict[int, int] = {}
    free = deque(sorted(a for a in side if a in P))
    while free:
        m = free.popleft()
        lst = P.prefs(m)
        if nxt[m] >= len(lst):
            continue
        w = lst[nxt[m]]
        nxt[m] += 1
        cur = held.get(w)
        if cur is None:
            held[w] = m
        elif P.prefers(w, m, cur):
            held[w] = m
            free.append(cur)
        else:
            free.append(m)
    return Matching(edge(m, w) for w, m in held.items())


@dataclass(frozen=True)
class Rotation:
    """Cyclic exchange: proposer ``moves[i][0]`` leaves ``moves[i][1]`` for ``moves[i][2]``."""

    moves: tuple[tuple[int, int, int], ...]
    delta: Fraction

    def removed(self) -> list[Edge]:
        return [edge(m, old) for m, old, _ in self.moves]

    def added(self) -> list[Edge]:
        return [edge(m, new) for m, _, new in self.moves]


@dataclass(frozen=True)
class RotationSystem:
    base: Matching
    rotations: tuple[Rotation, ...]
    precedence: frozenset[tuple[int, int]]  # (i, j): rotation i must precede j
    side: frozenset[int]

    def apply(self, chosen: Iterable[int]) -> Matching:
        """Eliminate the chosen rotations (must be closed) from the base."""
        chosen = set(chosen)
        missing = [(i, j) for i, j in self.precedence if j in chosen and i not in chosen]
        if missing:
            raise ValueError(f"rotation set is not closed: {missing[0]}")
        mate = {}
        for u, v in self.base:
            m, w = (u, v) if u in self.side else (v, u)
            mate[m] = w
        for i in self._topological(chosen):
            for m, old, new in self.rotations[i].moves:
                assert mate[m] == old
                mate[m] = new
        return Matching(edge(m, w) for m, w in mate.items())

    @staticmethod
    def _topological(chosen: set[int]) -> list[int]:
        # rotations were found along one maximal chain, so index order is a linear extension
        return sorted(chosen)

    def closure_instance(self, sign: int = 1) -> ClosureInstance:
        return ClosureInstance(
            {i: sign * r.delta for i, r in enumerate(self.rotations)},
            tuple((j, i) for i, j in sorted(self.precedence)),
        )


def _exposed_rotation(P: PreferenceSystem, mate: dict[int, int], wmate: dict[int, int]):
    """Some rotation exposed in the current matching, or None."""
    succ: dict[int, int] = {}
    for m in sorted(mate):
        lst = P.prefs(m)
        for w in lst[P.rank(m, mate[m]):]:
            if w not in wmate:
                # w is single in every stable matching, so m can never drop below her
                break
            if P.prefers(w, m, wmate[w]):
                succ[m] = w
                break
    for start in sorted(succ):
        seen: dict[int, int] = {}
        path = []
        m = start
        while m in succ and m not in seen:
            seen[m] = len(path)
            path.append(m)
            m = wmate[succ[m]]
        if m in seen:
            cyc = path[seen[m]:]
            return tuple((x, mate[x], succ[x]) for x in cyc)
    return None


def rotation_system(P: PreferenceSystem, side: Iterable[int], w: EdgeWeights | None = None) -> RotationSystem:
    """Rotations met along one maximal elimination chain from the
    proposer-optimal matching, with their precedence relation."""
    side = frozenset(side)
    base = proposer_optimal(P, side)
    mate, wmate = {}, {}
    for u, v in base:
        m, x = (u, v) if u in side else (v, u)
        mate[m], wmate[x] = x, m
    weight = (lambda e: w[e]) if w is not None else (lambda e: Fraction(0))
    rotations: list[Rotation] = []
    while True:
        moves = _exposed_rotation(P, mate, wmate)
        if moves is None:
            break
        delta = sum((weight(edge(m, new)) - weight(edge(m, old)) for m, old, new in moves), Fraction(0))
        rotations.append(Rotation(moves, delta))
        for m, _, new in moves:
            mate[m] = new
            wmate[new] = m
    return RotationSystem(base, tuple(rotations), _precedence(P, rotations), side)


def _precedence(P: PreferenceSystem, rotations: list[Rotation]) -> frozenset[tuple[int, int]]:
    gave: dict[Edge, int] = {}  # pair created by a rotation
    crossing: dict[tuple[int, int], int] = {}  # (woman, man) -> rotation lifting her past that man
    for i, r in enumerate(rotations):
        k = len(r.moves)
        for j, (m, _, new) in enumerate(r.moves):
            gave[edge(m, new)] = i
            prev_holder = r.moves[(j + 1) % k][0]
            for x in P.prefs(new):
                if P.prefers(new, x, prev_holder) and not P.prefers(new, x, m):
                    crossing[(new, x)] = i
    prec: set[tuple[int, int]] = set()
    for j, r in enumerate(rotations):
        for m, old, new in r.moves:
            i = gave.get(edge(m, old))
            if i is not None and i != j:
                prec.add((i, j))
            lst = P.prefs(m)
            for x in lst[P.rank(m, old): P.rank(m, new) - 1]:
                i = crossing.get((x, m))
                if i is not None and i != j:
                    prec.add((i, j))
    return frozenset(prec)


@dataclass(frozen=True)
class ExactResult:
    matching: Matching
    weight: Fraction
    rotations: int


def optimize_exact(P: PreferenceSystem, w: EdgeWeights, direction: str = "min") -> tuple[Matching, Fraction]:
    """Minimum (or maximum) weight stable matching of a bipartite-reducible
    instance."""
    res = optimize_exact_report(P, w, direction)
    return res.matching, res.weight


def optimize_exact_report(P: PreferenceSystem, w: EdgeWeights, direction: str = "min") -> ExactResult:
    if direction not in ("min", "max"):
        raise ValueError("direction must be 'min' or 'max'")
    core = perfect_core(P)
    verdict = is_bipartite_reducible(core)
    if not verdict:
        raise NotReducible(f"H contains the odd cycle {verdict.odd_cycle}")
    side = verdict.parts[0]
    rs = rotation_system(verdict.h, side, w)
    chosen, _ = min_weight_closure(rs.closure_instance(1 if direction == "min" else -1))
    M = rs.apply(chosen)
    return ExactResult(M, w.total(M), len(rs.rotations))
