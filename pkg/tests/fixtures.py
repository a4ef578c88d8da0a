"""Shared small instances (as plain dicts) and helpers for building them."""

from roommates import EdgeWeights, PreferenceSystem

EX1 = {1: [3, 4, 5, 2], 2: [1, 4, 3, 5, 6], 3: [5, 6, 1, 2], 4: [5, 6, 1, 2], 5: [1, 2, 3, 4], 6: [2, 3, 4]}
E2 = {1: [2], 2: [1]}
C6 = {1: [2, 6], 2: [3, 1], 3: [4, 2], 4: [5, 3], 5: [6, 4], 6: [1, 5]}
NOSM = {1: [2, 3, 4], 2: [3, 1, 4], 3: [1, 2, 4], 4: [1, 2, 3]}
PATH3 = {1: [2], 2: [1, 3], 3: [2]}
# men 1..3, women 4..6, cyclically shifted lists
LAT3 = {1: [4, 5, 6], 2: [5, 6, 4], 3: [6, 4, 5], 4: [2, 3, 1], 5: [3, 1, 2], 6: [1, 2, 3]}
TWO_C6 = {
    1: [2, 7, 6], 2: [3, 1], 3: [4, 2], 4: [5, 3], 5: [6, 4], 6: [1, 5],
    7: [8, 1, 12], 8: [9, 7], 9: [10, 8], 10: [11, 9], 11: [12, 10], 12: [7, 11],
}

# perfect-core instances whose H has an odd cycle, found by random search
NON_REDUCIBLE = [
    {1: [7, 3, 8, 2, 6, 5, 4], 2: [1, 6, 4, 7, 3, 8, 5], 3: [7, 8, 2, 5, 1, 4, 6], 4: [1, 6, 2, 3, 8, 7, 5],
     5: [7, 3, 1, 2, 4, 6, 8], 6: [8, 1, 5, 7, 4, 3, 2], 7: [2, 4, 6, 1, 8, 3, 5], 8: [4, 2, 1, 6, 5, 3, 7]},
    {1: [5, 8, 6, 3, 4], 2: [3, 6, 8, 5], 3: [1, 2, 6, 8, 5], 4: [6, 1, 7], 5: [7, 2, 6, 3, 1, 8],
     6: [3, 7, 8, 5, 1, 2, 4], 7: [4, 5, 6, 8], 8: [2, 7, 1, 6, 5, 3]},
    {1: [7, 2, 3, 8, 5, 4, 6], 2: [8, 6, 1, 3, 7, 4, 5], 3: [1, 6, 7, 8, 2, 5, 4], 4: [1, 8, 7, 6, 3, 5, 2],
     5: [3, 2, 8, 7, 1, 4, 6], 6: [4, 5, 3, 8, 7, 2, 1], 7: [3, 5, 8, 1, 2, 4, 6], 8: [4, 1, 5, 2, 6, 7, 3]},
    {1: [6, 7, 2, 4], 2: [1, 3, 6, 8, 7, 4, 5], 3: [6, 5, 8, 2, 7], 4: [1, 2, 7, 6, 5, 8], 5: [7, 2, 8, 4, 3],
     6: [4, 7, 2, 1, 3, 8], 7: [3, 1, 4, 5, 2, 6], 8: [6, 4, 2, 5, 3]},
    {1: [3, 8, 2, 7, 4], 2: [3, 5, 1, 6, 7], 3: [6, 4, 2, 1, 5, 8, 7], 4: [1, 8, 6, 7, 5, 3],
     5: [7, 4, 6, 3, 2, 8], 6: [4, 2, 3, 5, 8, 7], 7: [8, 1, 5, 4, 3, 6, 2], 8: [3, 5, 4, 7, 6, 1]},
]


def ps(d) -> PreferenceSystem:
    return PreferenceSystem(d)


def c6_weights(P: PreferenceSystem) -> EdgeWeights:
    return EdgeWeights(P, {(1, 2): 5, (2, 3): 1, (3, 4): 1, (4, 5): 1, (5, 6): 1, (1, 6): 1})


def ones(P: PreferenceSystem) -> EdgeWeights:
    return EdgeWeights(P, {e: 1 for e in P.edges})


def m(*pairs) -> frozenset:
    """Matching literal from two-digit shorthand, e.g. m(14, 25)."""
    return frozenset(tuple(sorted(divmod(p, 10))) for p in pairs)
