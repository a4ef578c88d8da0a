import json
import os
import random
import subprocess
import sys

import pytest

from roommates import _accel
from roommates.generators import random_perfect_core
from roommates.oracle import enumerate_stable_matchings
from roommates.polytope import PolytopeVariant, halfintegral_points

PROBE = """
import json, random, sys
from roommates import _accel
from roommates.generators import random_perfect_core
from roommates.oracle import enumerate_stable_matchings
from roommates.polytope import PolytopeVariant, halfintegral_points
rng = random.Random(17)
out = {"backend": _accel.backend(), "stable": [], "points": []}
for _ in range(25):
    P = random_perfect_core(rng, 8)
    out["stable"].append(sorted(sorted(map(list, M)) for M in enumerate_stable_matchings(P)))
    pts = halfintegral_points(P, PolytopeVariant.FSM)
    out["points"].append(sorted(sorted([list(e), str(v)] for e, v in x.nonzero().items()) for x in pts))
json.dump(out, sys.stdout)
"""


def probe(disable: bool) -> dict:
    env = dict(os.environ)
    env.pop("ROOMMATES_NO_NUMBA", None)
    if disable:
        env["ROOMMATES_NO_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def test_flag_selects_python_backend():
    assert probe(True)["backend"] == "python"


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed or disabled")
def test_backends_agree():
    fast, slow = probe(False), probe(True)
    assert fast["backend"] == "numba"
    assert fast["stable"] == slow["stable"] and fast["points"] == slow["points"]


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed or disabled")
def test_py_func_matches_compiled_kernel():
    from roommates import kernels
    from roommates.oracle import instance_arrays

    rng = random.Random(3)
    for _ in range(20):
        P = random_perfect_core(rng, 8)
        _, ptr, adj, rank = instance_arrays(P)
        n = len(P)
        fast = kernels.run_with_buffer(kernels.stable_matchings_kernel, n, n, ptr, adj, rank)
        slow = kernels.run_with_buffer(kernels.stable_matchings_kernel.py_func, n, n, ptr, adj, rank)
        assert (fast == slow).all()


def test_in_process_results_are_backend_independent_smoke():
    rng = random.Random(1)
    P = random_perfect_core(rng, 6)
    assert enumerate_stable_matchings(P)
    assert halfintegral_points(P, PolytopeVariant.FSM)
