"""Hardness constructions turned into instance generators, plus the small
exhaustive deciders used to check them.

* PARTITION -> DRP-MSR
* 3-PARTITION -> DRP-SSR
* k-clique -> Selecting-PARTITION
* Selecting-PARTITION -> DAP-MSR (as a splitter graph with vector weights)

Machine and vertex numbering in docstrings is 1-based; the lists built here are
0-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import DrpInstance, InstanceError, SizeLimitError, _as_int
from .dap import SplitterGraph


@dataclass(frozen=True)
class PartitionInstance:
    S: tuple[int, ...]

    def __post_init__(self):
        S = tuple(_as_int(v, "PARTITION element") for v in self.S)
        if not S:
            raise InstanceError("PARTITION needs a non-empty set")
        if any(v < 1 for v in S):
            raise InstanceError("PARTITION elements must be positive")
        object.__setattr__(self, "S", S)

    @property
    def B(self) -> int:
        return sum(self.S)


@dataclass(frozen=True)
class ThreePartitionInstance:
    k: int
    s: tuple[int, ...]

    def __post_init__(self):
        s = tuple(_as_int(v, "3-PARTITION element") for v in self.s)
        if self.k < 1 or len(s) != 3 * self.k:
            raise InstanceError(f"3-PARTITION needs 3k={3 * self.k} numbers, got {len(s)}")
        if any(v < 1 for v in s):
            raise InstanceError("3-PARTITION elements must be positive")
        if sum(s) % self.k:
            raise InstanceError(f"sum {sum(s)} is not a multiple of k={self.k}")
        object.__setattr__(self, "s", s)

    @property
    def B(self) -> int:
        return sum(self.s) // self.k


@dataclass(frozen=True)
class SelectingPartitionInstance:
    S: tuple[int, ...]
    k: int

    def __post_init__(self):
        S = tuple(_as_int(v, "Selecting-PARTITION element") for v in self.S)
        if any(v < 0 for v in S):
            raise InstanceError("Selecting-PARTITION elements must be non-negative")
        # k > |S| is allowed (a no-instance); the clique reduction produces it
        # for graphs with too few vertices and edges
        if self.k < 2:
            raise InstanceError(f"need k >= 2, got k={self.k}")
        object.__setattr__(self, "S", S)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..vertices``."""

    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise InstanceError(f"self-loop on vertex {a}")
            if not (1 <= a <= self.vertices and 1 <= b <= self.vertices):
                raise InstanceError(f"edge ({a},{b}) outside 1..{self.vertices}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))


# ---------------------------------------------------------------- deciders


def subset_sums(values: Iterable[int]) -> set[int]:
    sums = {0}
    for v in values:
        sums |= {s + v for s in sums}
    return sums


def has_perfect_partition(S: Sequence[int]) -> bool:
    total = sum(S)
    return total % 2 == 0 and total // 2 in subset_sums(S)


def has_three_partition(s: Sequence[int], k: int) -> bool:
    """Exhaustive grouping into ``k`` triples of equal sum."""
    if len(s) != 3 * k or sum(s) % k:
        return False
    target = sum(s) // k

    def split(rest: tuple[int, ...]) -> bool:
        if not rest:
            return True
        first, others = rest[0], rest[1:]
        for a, b in itertools.combinations(range(len(others)), 2):
            if first + others[a] + others[b] == target:
                left = tuple(v for i, v in enumerate(others) if i != a and i != b)
                if split(left):
                    return True
        return False

    return split(tuple(sorted(s, reverse=True)))


def has_k_clique(g: Graph, k: int) -> bool:
    edges = set(g.edges)
    for combo in itertools.combinations(range(1, g.vertices + 1), k):
        if all((a, b) in edges for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def accepted_subsets(
    sp: SelectingPartitionInstance, max_size: int = 20, max_k: int = 10
) -> Iterator[tuple[int, ...]]:
    """Positions of every ``k``-subset that splits into two equal halves."""
    n, k = len(sp.S), sp.k
    if n > max_size or k > max_k:
        raise SizeLimitError(f"Selecting-PARTITION check capped at |S|<={max_size}, k<={max_k}")
    for combo in itertools.combinations(range(n), k):
        if has_perfect_partition([sp.S[i] for i in combo]):
            yield combo


def find_selecting_partition(
    sp: SelectingPartitionInstance, max_size: int = 20, max_k: int = 10
) -> tuple[int, ...] | None:
    return next(accepted_subsets(sp, max_size, max_k), None)


def check_selecting_partition(
    sp: SelectingPartitionInstance, max_size: int = 20, max_k: int = 10
) -> bool:
    return find_selecting_partition(sp, max_size, max_k) is not None


# ---------------------------------------------------------------- constructions


def _delta_cost_matrix(size: int, half: int, delta: int) -> list[list[int]]:
    # machine 1 reaches 3..half+2, machine 2 reaches half+3..2*half+2
    C = [[0] * size for _ in range(size)]
    for m in range(2, half + 2):
        C[0][m] = 1
    for m in range(half + 2, 2 * half + 2):
        C[1][m] = 1
    C[0][1] = C[1][0] = delta
    return C


def partition_to_drp_msr(p: PartitionInstance) -> DrpInstance:
    """``(2n+2)``-machine DRP-MSR instance whose optimum is ``B/2`` exactly
    when ``p`` has a perfect partition, and larger otherwise."""
    n = len(p.S)
    size = 2 * n + 2
    T = [[0] * size for _ in range(size)]
    for j, s in enumerate(p.S):
        T[0][j] = s
        T[1][j] = s
    return DrpInstance(T, _delta_cost_matrix(size, n, p.B))


def three_partition_to_drp_ssr(t: ThreePartitionInstance) -> DrpInstance:
    """``3k`` machines in ``k`` triangles; the first ``2k`` hold every number."""
    k = t.k
    n = 3 * k
    T = [list(t.s) if i < 2 * k else [0] * n for i in range(n)]
    C = [[1 if i != j and i % k == j % k else 0 for j in range(n)] for i in range(n)]
    return DrpInstance(T, C)


def smallest_prime_above(k: int) -> int:
    q = k + 1
    while q < 2 or any(q % d == 0 for d in range(2, math.isqrt(q) + 1)):
        q += 1
    return q


def kclique_to_selecting_partition(g: Graph, k: int) -> SelectingPartitionInstance:
    """Vertex ``i`` becomes ``(k-1) q^i`` and edge ``(i, j)`` becomes
    ``q^i + q^j`` for the smallest prime ``q > k``; the selection size is
    ``k + k(k-1)/2``."""
    if k < 2:
        raise InstanceError("k-clique reduction needs k >= 2")
    q = smallest_prime_above(k)
    S = [(k - 1) * q**i for i in range(1, g.vertices + 1)]
    S += [q**a + q**b for a, b in g.edges]
    return SelectingPartitionInstance(tuple(S), k + k * (k - 1) // 2)


class SelectingPartitionGraph(SplitterGraph):
    """Splitter graph with ``2k+2`` levels over the elements of ``S``.

    An edge entering level ``1..k`` at column ``j`` carries the vector
    ``(s_j, s_j, 0, ..., 0)``; edges entering later levels carry zeros.  The
    chosen columns of the first ``k`` levels therefore pick a ``k``-subset of
    ``S``, and the induced transmission matrix has the two-sender shape of the
    PARTITION construction.

    Padding columns follow the real ones (at least ``k+1``, and enough for
    ``2k+1`` columns overall) so every ``k``-subset can be completed to a full
    path.  Entering level ``1..k`` at a padding column
    costs ``(P, P, 0, ...)`` with ``P = sum(S) + 1``, which no optimum uses.
    """

    def __init__(self, sp: SelectingPartitionInstance):
        k = sp.k
        self.sp = sp
        self.k = k
        self.elements = tuple(sorted(sp.S))
        self.delta = sum(sp.S)
        self.pad_value = sum(sp.S) + 1
        size = 2 * k + 2
        C = _delta_cost_matrix(size, k, self.delta)
        pads = max(k + 1, 2 * k + 1 - len(self.elements))
        columns = self.elements + (self.pad_value,) * pads
        super().__init__(n=size, values=columns, C=C)

    def edge_vector(self, level: int, j: int, jp: int) -> tuple[int, ...]:
        vec = [0] * self.n
        if level <= self.k:
            vec[0] = vec[1] = self.values[jp - 1]
        return tuple(vec)

    def selected(self, columns: Sequence[int]) -> tuple[int, ...]:
        """Elements picked by the first ``k`` splitter columns."""
        return tuple(self.values[c - 1] for c in columns[: self.k])


def selecting_partition_to_dap_msr(sp: SelectingPartitionInstance) -> SelectingPartitionGraph:
    return SelectingPartitionGraph(sp)
