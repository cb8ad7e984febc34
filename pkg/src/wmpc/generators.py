"""Seeded workload generators. Same seed and parameters give the same instance."""

from __future__ import annotations

import random

from .core import DrpInstance, InstanceError
from .dap import DapInstance


def _cost_matrix(rng: random.Random, n: int, lo: int, hi: int) -> list[list[int]]:
    return [[0 if i == j else rng.randint(lo, hi) for j in range(n)] for i in range(n)]


def random_drp(n: int, seed: int, max_value: int = 9) -> DrpInstance:
    if n < 1:
        raise InstanceError("n must be positive")
    rng = random.Random(seed)
    T = [[rng.randint(0, max_value) for _ in range(n)] for _ in range(n)]
    return DrpInstance(T, _cost_matrix(rng, n, 0, max_value))


def rack_cost_matrix(racks: int, per_rack: int, intra: int, inter: int) -> list[list[int]]:
    """Cost ``intra`` inside a rack and ``inter`` across racks."""
    if racks < 1 or per_rack < 1:
        raise InstanceError("racks and per-rack must be positive")
    if not 0 <= intra < inter:
        raise InstanceError("rack costs need 0 <= intra < inter")
    n = racks * per_rack
    return [
        [0 if i == j else intra if i // per_rack == j // per_rack else inter for j in range(n)]
        for i in range(n)
    ]


def rack_drp(racks: int, per_rack: int, intra: int, inter: int, seed: int,
             max_value: int = 9) -> DrpInstance:
    C = rack_cost_matrix(racks, per_rack, intra, inter)
    n = len(C)
    rng = random.Random(seed)
    T = [[rng.randint(0, max_value) for _ in range(n)] for _ in range(n)]
    return DrpInstance(T, C)


def random_dap(n: int, N: int, seed: int, max_value: int = 9, max_cost: int = 9) -> DapInstance:
    if n < 2 or N < n - 1:
        raise InstanceError("random dap needs n >= 2 and N >= n-1")
    rng = random.Random(seed)
    datasets = [[] for _ in range(n)]
    for _ in range(N):
        datasets[rng.randrange(n)].append(rng.randint(0, max_value))
    return DapInstance(datasets, _cost_matrix(rng, n, 0, max_cost))


def _blocked_dap(n: int, per_machine: int, seed: int, inverse: bool) -> DapInstance:
    if n < 2 or per_machine < 1:
        raise InstanceError("blocked dap needs n >= 2 and per-machine >= 1")
    rng = random.Random(seed)
    datasets = []
    for i in range(n):
        block = n - 1 - i if inverse else i
        datasets.append([block * per_machine + v for v in range(per_machine)])
    return DapInstance(datasets, _cost_matrix(rng, n, 1, 9))


def sorted_dap(n: int, per_machine: int, seed: int) -> DapInstance:
    """Machine ``i`` already holds the ``i``-th block of the sorted order."""
    return _blocked_dap(n, per_machine, seed, inverse=False)


def inverse_sorted_dap(n: int, per_machine: int, seed: int) -> DapInstance:
    """Machine ``i`` holds the ``(n-1-i)``-th block: data sorted in reverse
    across machines."""
    return _blocked_dap(n, per_machine, seed, inverse=True)
