"""Random instance families used by the test corpora and benchmarks."""

from __future__ import annotations

import random

from .errors import NoStableMatchingError, PreconditionViolated
from .irving import perfect_core
from .model import EdgeWeights, PreferenceSystem


def random_instance(rng: random.Random, n: int, density: float = 0.5) -> PreferenceSystem:
    """Each pair acceptable with probability ``density``; lists shuffled."""
    prefs: dict[int, list[int]] = {a: [] for a in range(1, n + 1)}
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if rng.random() < density:
                prefs[a].append(b)
                prefs[b].append(a)
    for lst in prefs.values():
        rng.shuffle(lst)
    return PreferenceSystem(prefs)


def random_bipartite_instance(rng: random.Random, n_left: int, n_right: int, density: float = 0.6) -> PreferenceSystem:
    prefs: dict[int, list[int]] = {a: [] for a in range(1, n_left + n_right + 1)}
    for a in range(1, n_left + 1):
        for b in range(n_left + 1, n_left + n_right + 1):
            if rng.random() < density:
                prefs[a].append(b)
                prefs[b].append(a)
    for lst in prefs.values():
        rng.shuffle(lst)
    return PreferenceSystem(prefs)


def random_perfect_core(rng: random.Random, max_agents: int = 10, min_agents: int = 2) -> PreferenceSystem:
    """Perfect-core reduction of a random instance with a stable matching."""
    while True:
        n = rng.randint(max(min_agents, 2), max_agents)
        P = random_instance(rng, n, rng.uniform(0.3, 0.9))
        try:
            core = perfect_core(P)
        except NoStableMatchingError:
            continue
        if len(core) >= min_agents and core.edges:
            return core


def planted_cycle_instance(
    rng: random.Random, max_agents: int = 12, extra: float = 0.3, between_only: bool = False
) -> PreferenceSystem:
    """Disjoint even cyclic-preference cycles and single edges, plus random
    extra edges, most of them placed between an agent's two cycle partners.

    With ``between_only`` extra edges join cycle agents only and always sit
    strictly between both endpoints' cycle partners.
    """
    n = rng.choice([k for k in range(8 if between_only else 4, max_agents + 1, 2)])
    agents = list(range(1, n + 1))
    rng.shuffle(agents)
    prefs: dict[int, list[int]] = {a: [] for a in agents}
    on_cycle: set[int] = set()
    i = 0
    while i < n:
        left = n - i
        sizes = [k for k in ((4, 4, 6) if between_only else (4, 6, 8)) if k <= left]
        if sizes and (between_only or rng.random() < 0.7):
            k = rng.choice(sizes)
            cyc = agents[i: i + k]
            for j, v in enumerate(cyc):
                prefs[v] = [cyc[(j + 1) % k], cyc[j - 1]]
            on_cycle.update(cyc)
            i += k
        else:
            u, v = agents[i], agents[i + 1]
            prefs[u], prefs[v] = [v], [u]
            i += 2
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if b not in prefs[a]]
    if between_only:
        pairs = [(a, b) for a, b in pairs if a in on_cycle and b in on_cycle]
    for a, b in pairs:
        if rng.random() >= extra:
            continue
        for x, y in ((a, b), (b, a)):
            lst = prefs[x]
            if between_only:
                pos = rng.randint(1, len(lst) - 1)
            elif len(lst) >= 2 and rng.random() < 0.8:
                pos = rng.randint(1, len(lst) - 1)  # strictly inside the list
            else:
                pos = rng.randint(0, len(lst))
            lst.insert(pos, y)
    return PreferenceSystem(prefs)


def random_cycle_form(rng: random.Random, max_agents: int = 12) -> PreferenceSystem:
    """Planted instance whose perfect core has stable edges forming single
    edges and disjoint cycles."""
    from .approx import check_cycle_form

    while True:
        if rng.random() < 0.7:
            P = planted_cycle_instance(rng, max_agents, rng.uniform(0.02, 0.15), between_only=True)
        else:
            P = planted_cycle_instance(rng, max_agents, rng.uniform(0.1, 0.5))
        try:
            core = perfect_core(P)
            if not core.edges:
                continue
            check_cycle_form(core)
        except (NoStableMatchingError, PreconditionViolated):
            continue
        return P


def random_weights(rng: random.Random, P: PreferenceSystem, low: int = 0, high: int = 100) -> EdgeWeights:
    return EdgeWeights(P, {e: rng.randint(low, high) for e in P.edges})


def random_rich_core(rng: random.Random, max_agents: int = 10, unique_keep: float = 0.15) -> PreferenceSystem:
    """Perfect core with at least four agents drawn from a mix of plain,
    planted-cycle and bipartite instances.

    Cores with a single stable matching are kept only with probability
    ``unique_keep``, so the sample leans towards nontrivial stable sets.
    """
    from .reduction import compute_em

    while True:
        family = rng.randrange(3)
        if family == 0:
            P = random_instance(rng, rng.randint(4, max_agents), rng.uniform(0.3, 0.9))
        elif family == 1:
            P = planted_cycle_instance(rng, max_agents - max_agents % 2, rng.uniform(0.1, 0.6))
        else:
            k = rng.randint(2, max_agents // 2)
            P = random_bipartite_instance(rng, k, k, rng.uniform(0.5, 1.0))
        try:
            core = perfect_core(P)
        except NoStableMatchingError:
            continue
        if len(core) < 4:
            continue
        unique = len(compute_em(core).in_em) * 2 == len(core)
        if not unique or rng.random() < unique_keep:
            return core
