"""Backtracking kernels behind the brute-force routines.

Both kernels work on dense integer arrays so they compile under numba; with
``ROOMMATES_NO_NUMBA=1`` the same source runs as ordinary Python.  Results
are written into a caller-supplied buffer and the total number of solutions
is returned, so a caller whose buffer was too small can retry with the exact
size.

Vertex states in :func:`stable_matchings_kernel`: ``-2`` undecided, ``-1``
unmatched, otherwise the partner index.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit

UNDECIDED = -2
UNMATCHED = -1
_NOTHING = -3


@njit
def _no_block_at(a, mate, ptr, adj, rank):
    ma = mate[a]
    for i in range(ptr[a], ptr[a + 1]):
        y = adj[i]
        if y == ma:
            continue
        my = mate[y]
        if my == UNDECIDED:
            continue
        a_wants = ma == UNMATCHED or rank[a, y] < rank[a, ma]
        if not a_wants:
            # adjacency is in preference order; everything further is worse
            break
        if my == UNMATCHED or rank[y, a] < rank[y, my]:
            return False
    return True


@njit
def stable_matchings_kernel(n, ptr, adj, rank, out):
    """Enumerate every stable matching (perfect or not).

    ``adj[ptr[v]:ptr[v+1]]`` lists the neighbours of ``v`` best first and
    ``rank[v, y]`` is the position of ``y`` there.  Each solution is a row of
    partner indices (``-1`` for unmatched).
    """
    cap = out.shape[0]
    if n == 0:
        return 1
    mate = np.full(n, UNDECIDED, dtype=np.int64)
    sv = np.zeros(n, dtype=np.int64)
    sc = np.zeros(n, dtype=np.int64)
    su = np.full(n, _NOTHING, dtype=np.int64)
    count = 0
    depth = 0
    while depth >= 0:
        v = sv[depth]
        u = su[depth]
        if u != _NOTHING:
            mate[v] = UNDECIDED
            if u >= 0:
                mate[u] = UNDECIDED
            su[depth] = _NOTHING
        c = sc[depth]
        deg = ptr[v + 1] - ptr[v]
        if c > deg:
            depth -= 1
            continue
        sc[depth] = c + 1
        if c < deg:
            u = adj[ptr[v] + c]
            if mate[u] != UNDECIDED:
                continue
            mate[v] = u
            mate[u] = v
        else:
            u = UNMATCHED
            mate[v] = UNMATCHED
        su[depth] = u
        if not _no_block_at(v, mate, ptr, adj, rank):
            continue
        if u >= 0 and not _no_block_at(u, mate, ptr, adj, rank):
            continue
        w = v + 1
        while w < n and mate[w] != UNDECIDED:
            w += 1
        if w == n:
            if count < cap:
                for i in range(n):
                    out[count, i] = mate[i]
            count += 1
            continue
        depth += 1
        sv[depth] = w
        sc[depth] = 0
        su[depth] = _NOTHING
    return count


@njit
def halfintegral_kernel(d, nv, ends, row_ptr, row_idx, close_ptr, close_rows, out):
    """Enumerate ``y in {0,1,2}^d`` (doubled coordinates) with every vertex
    sum at most 2 and every row sum at least 2.

    ``ends[k]`` are the endpoints of coordinate ``k``; a coordinate with
    ``ends[k, 1] < 0`` touches a single vertex.  Row ``r`` consists of the
    coordinates ``row_idx[row_ptr[r]:row_ptr[r+1]]`` and is checked once its
    largest coordinate is fixed; ``close_rows[close_ptr[k]:close_ptr[k+1]]``
    are the rows whose largest coordinate is ``k``.  Rows without coordinates
    must be rejected by the caller.
    """
    cap = out.shape[0]
    if d == 0:
        return 1
    vals = np.full(d, -1, dtype=np.int64)
    vsum = np.zeros(nv, dtype=np.int64)
    count = 0
    k = 0
    while k >= 0:
        a = ends[k, 0]
        b = ends[k, 1]
        cur = vals[k]
        if cur >= 0:
            vsum[a] -= cur
            if b >= 0:
                vsum[b] -= cur
        nxt = cur + 1
        if nxt > 2:
            vals[k] = -1
            k -= 1
            continue
        vals[k] = nxt
        vsum[a] += nxt
        if b >= 0:
            vsum[b] += nxt
        if vsum[a] > 2 or (b >= 0 and vsum[b] > 2):
            # larger values only make it worse
            vsum[a] -= nxt
            if b >= 0:
                vsum[b] -= nxt
            vals[k] = -1
            k -= 1
            continue
        ok = True
        for j in range(close_ptr[k], close_ptr[k + 1]):
            r = close_rows[j]
            s = 0
            for t in range(row_ptr[r], row_ptr[r + 1]):
                s += vals[row_idx[t]]
            if s < 2:
                ok = False
                break
        if not ok:
            continue
        if k == d - 1:
            if count < cap:
                for i in range(d):
                    out[count, i] = vals[i]
            count += 1
            continue
        k += 1
    return count


def run_with_buffer(kernel, width: int, *args, limit: int | None = None, initial: int = 64) -> np.ndarray:
    """Call ``kernel(*args, out)`` growing ``out`` until every row fits.

    With ``limit`` the buffer is capped and at most ``limit`` rows return.
    """
    size = initial if limit is None else min(initial, max(limit, 1))
    while True:
        out = np.empty((size, max(width, 1)), dtype=np.int64)
        total = kernel(*args, out)
        if limit is not None and size >= min(total, limit):
            return out[: min(total, limit), :width]
        if total <= size:
            return out[:total, :width]
        size = total if limit is None else min(total, limit)
