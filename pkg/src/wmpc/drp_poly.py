"""Polynomial solvers for DRP-TOTAL (linear assignment) and DRP-BTNK
(linear bottleneck assignment).

Both objectives collapse to a square matrix ``F`` where ``F[j][m]`` is the
receive cost machine ``m`` incurs if it serves interval ``j``.  Summing the
chosen entries gives the total cost; their maximum gives the receive
bottleneck.
"""

from __future__ import annotations

import math
from typing import Sequence

from .core import DrpInstance, InstanceError, Matrix, Permutation, as_matrix


def _square(F) -> Matrix:
    F = as_matrix(F, "F")
    n = len(F)
    if n == 0 or any(len(row) != n for row in F):
        raise InstanceError("assignment cost matrix must be square and non-empty")
    if any(v < 0 for row in F for v in row):
        raise InstanceError("assignment cost matrix must be non-negative")
    return F


def build_lap_cost(inst: DrpInstance) -> Matrix:
    """``F[j][k] = sum_i T[i][j] * C[i][k]``."""
    n = inst.n
    T, C = inst.T, inst.C
    F = [[0] * n for _ in range(n)]
    for i in range(n):
        Ti, Ci = T[i], C[i]
        for j in range(n):
            t = Ti[j]
            if t:
                row = F[j]
                for k in range(n):
                    row[k] += t * Ci[k]
    return tuple(tuple(row) for row in F)


def build_lbap_cost(inst: DrpInstance) -> Matrix:
    """``F[k][i] = sum_j T[j][k] * C[j][i]``: the receive cost at machine
    ``i`` when interval ``k`` is placed there.  Same numbers as
    :func:`build_lap_cost`, built by its own loop."""
    n = inst.n
    T, C = inst.T, inst.C
    return tuple(
        tuple(sum(T[j][k] * C[j][i] for j in range(n)) for i in range(n))
        for k in range(n)
    )


def solve_lap(F: Sequence[Sequence[int]]) -> tuple[Permutation, int]:
    """Hungarian method with row/column potentials, O(n^3).

    Returns ``sigma`` minimising ``sum_j F[j][sigma[j]]`` and that sum.
    All arithmetic stays in Python ints, so very large entries are exact.
    """
    F = _square(F)
    n = len(F)
    inf = math.inf
    # 1-based arrays; column 0 is the virtual column used by each augmentation
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    owner = [0] * (n + 1)  # owner[col] = row matched to col
    way = [0] * (n + 1)
    for row in range(1, n + 1):
        owner[0] = row
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            delta = inf
            j1 = 0
            Fi = F[i0 - 1]
            ui = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = Fi[j - 1] - ui - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    sigma = [0] * n
    for col in range(1, n + 1):
        sigma[owner[col] - 1] = col - 1
    perm = Permutation(tuple(sigma))
    return perm, sum(F[j][sigma[j]] for j in range(n))


def max_bipartite_matching(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum matching by repeated augmenting paths (Kuhn).

    ``adj[r]`` lists the right vertices adjacent to left vertex ``r``.
    Returns ``match_left`` with ``-1`` for unmatched left vertices.
    """
    n_left = len(adj)
    match_left = [-1] * n_left
    match_right = [-1] * n_right
    for root in range(n_left):
        # iterative DFS over alternating paths
        parent_right = {}
        seen = [False] * n_right
        stack = [(root, iter(adj[root]))]
        found = -1
        while stack and found < 0:
            left, it = stack[-1]
            for r in it:
                if seen[r]:
                    continue
                seen[r] = True
                parent_right[r] = left
                if match_right[r] < 0:
                    found = r
                    break
                stack.append((match_right[r], iter(adj[match_right[r]])))
                break
            else:
                stack.pop()
        if found < 0:
            continue
        r = found
        while True:
            left = parent_right[r]
            prev = match_left[left]
            match_left[left] = r
            match_right[r] = left
            if left == root:
                break
            r = prev
    return match_left


def _perfect_matching(F: Matrix, t: int) -> list[int] | None:
    n = len(F)
    adj = [[k for k in range(n) if F[j][k] <= t] for j in range(n)]
    match = max_bipartite_matching(adj, n)
    return None if -1 in match else match


def solve_lbap(F: Sequence[Sequence[int]]) -> tuple[Permutation, int]:
    """Bottleneck assignment: binary search over the sorted distinct entries of
    ``F`` for the smallest threshold admitting a perfect matching."""
    F = _square(F)
    values = sorted({v for row in F for v in row})
    lo, hi = 0, len(values) - 1
    best = _perfect_matching(F, values[hi])
    assert best is not None
    while lo < hi:
        mid = (lo + hi) // 2
        match = _perfect_matching(F, values[mid])
        if match is None:
            lo = mid + 1
        else:
            hi = mid
            best = match
    perm = Permutation(tuple(best))
    return perm, max(F[j][perm[j]] for j in range(len(F)))


def solve_drp_total(inst: DrpInstance) -> tuple[Permutation, int]:
    return solve_lap(build_lap_cost(inst))


def solve_drp_btnk(inst: DrpInstance) -> tuple[Permutation, int]:
    return solve_lbap(build_lbap_cost(inst))
