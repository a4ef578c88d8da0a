import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def pref_dicts(draw, min_n: int = 2, max_n: int = 8, bipartite: bool = False):
    """Random instance as a preference dict with shuffled lists."""
    n = draw(st.integers(min_n, max_n))
    pairs = [
        (a, b)
        for a in range(1, n + 1)
        for b in range(a + 1, n + 1)
        if not bipartite or (a % 2) != (b % 2)
    ]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    prefs = {a: [] for a in range(1, n + 1)}
    for (a, b), k in zip(pairs, keep):
        if k:
            prefs[a].append(b)
            prefs[b].append(a)
    return {a: draw(st.permutations(lst)) for a, lst in prefs.items()}
