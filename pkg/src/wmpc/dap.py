"""Data allocation: choose ``n-1`` splitters from the data and an assignment of
the resulting intervals to machines.

Splitter choices are paths in a layered DAG.  Column ``j`` in ``1..N`` stands
for the ``j``-th smallest value of the global multiset; column ``0`` is the
source (minus infinity) and column ``N+1`` the sink (plus infinity).  An edge
entering level ``i`` from column ``j`` to column ``j' > j`` is interval ``i``,
i.e. the values in ``(s_j, s_j']``.

Each edge carries a vector: how many of those values each machine holds.
Paired with a receiving machine ``l`` it also carries a scalar, the receive
cost of ``l`` for that interval.  Summing the scalars along a path under a
permutation gives the TOTAL cost; their maximum gives BTNK.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Optional, Sequence

from .core import (
    DrpInstance,
    InstanceError,
    Matrix,
    Objective,
    Permutation,
    SizeLimitError,
    _as_int,
    as_matrix,
    brute_force_drp,
    eval_costs,
)
from .drp_exact import SearchConfig, _branch_and_bound

DEFAULT_DP_MACHINES = 16
DEFAULT_HARD_COLUMNS = 12
DEFAULT_HARD_MACHINES = 5


@dataclass(frozen=True)
class DapInstance:
    datasets: tuple[tuple[int, ...], ...]
    C: Matrix

    def __post_init__(self):
        data = tuple(tuple(sorted(_as_int(v, "data value") for v in S)) for S in self.datasets)
        n = len(data)
        if n < 2:
            raise InstanceError("DAP needs at least two machines")
        C = as_matrix(self.C, "C")
        if len(C) != n or any(len(row) != n for row in C):
            raise InstanceError(f"C must be {n}x{n}")
        for i in range(n):
            if C[i][i] != 0:
                raise InstanceError(f"C[{i + 1},{i + 1}] must be 0")
            if any(v < 0 for v in C[i]):
                raise InstanceError(f"C row {i + 1} has a negative entry")
        N = sum(len(S) for S in data)
        if N < n - 1:
            raise InstanceError(f"need at least n-1={n - 1} data values to pick splitters, got {N}")
        object.__setattr__(self, "datasets", data)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return len(self.datasets)

    @property
    def N(self) -> int:
        return sum(len(S) for S in self.datasets)

    def sorted_values(self) -> tuple[int, ...]:
        return tuple(sorted(itertools.chain.from_iterable(self.datasets)))


@dataclass(frozen=True)
class SplitterSelection:
    """``indices`` are 1-based columns into the globally sorted values."""

    indices: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise InstanceError(f"splitter indices must strictly increase: {self.indices}")


@dataclass(frozen=True)
class DapSolution:
    objective: Objective
    splitters: SplitterSelection
    perm: Permutation
    value: int
    induced_T: Matrix


class Decision(NamedTuple):
    answer: bool
    witness: Optional[tuple[SplitterSelection, Permutation]]


def build_acc(inst: DapInstance) -> Matrix:
    """``Acc[i][j] = |S_i ∩ (-inf, s_j]|`` for ``j`` in ``0..N+1``.

    Counting is by value, so duplicates of ``s_j`` all fall at or before
    column ``j``.
    """
    s = inst.sorted_values()
    rows = []
    for S in inst.datasets:
        row = [0]
        row += [bisect.bisect_right(S, v) for v in s]
        row.append(len(S))
        rows.append(tuple(row))
    return tuple(rows)


class SplitterGraph:
    """Layered splitter DAG with ``n`` levels over ``N`` candidate columns.

    Subclasses provide :meth:`edge_vector`; the scalar weight of an edge for
    receiving machine ``l`` is derived from it and ``C``.
    """

    def __init__(self, n: int, values: Sequence[int], C: Sequence[Sequence[int]],
                 objective: Objective | str = Objective.MSR):
        if n < 2:
            raise InstanceError("splitter graph needs at least two levels")
        self.n = n
        self.values = tuple(values)
        self.C = as_matrix(C, "C")
        self.objective = Objective.parse(objective)

    @property
    def N(self) -> int:
        return len(self.values)

    def edge_vector(self, level: int, j: int, jp: int) -> tuple[int, ...]:
        raise NotImplementedError

    def edge_weight(self, level: int, j: int, jp: int, label: int) -> int:
        vec = self.edge_vector(level, j, jp)
        C = self.C
        return sum(v * C[i][label] for i, v in enumerate(vec) if v)

    def edges_into(self, level: int) -> Iterator[tuple[int, int]]:
        N = self.N
        sources = (0,) if level == 1 else range(1, N + 1)
        targets = (N + 1,) if level == self.n else range(1, N + 1)
        for j in sources:
            for jp in targets:
                if j < jp:
                    yield j, jp

    def paths(self) -> Iterator[tuple[int, ...]]:
        """Internal columns of every source-to-sink path, lexicographically."""
        return itertools.combinations(range(1, self.N + 1), self.n - 1)

    def path_edges(self, columns: Sequence[int]) -> list[tuple[int, int, int]]:
        cols = (0, *columns, self.N + 1)
        return [(i + 1, cols[i], cols[i + 1]) for i in range(self.n)]

    def induced_T(self, columns: Sequence[int]) -> Matrix:
        """Column ``j`` of the result is the vector of the edge entering level ``j+1``."""
        vecs = [self.edge_vector(level, j, jp) for level, j, jp in self.path_edges(columns)]
        return tuple(tuple(vecs[j][i] for j in range(self.n)) for i in range(self.n))

    def path_cost(self, columns: Sequence[int], perm: Sequence[int], obj: Objective | str) -> int:
        """TOTAL or BTNK of a path under a permutation, from scalar weights."""
        obj = Objective.parse(obj)
        ws = [self.edge_weight(level, j, jp, perm[level - 1])
              for level, j, jp in self.path_edges(columns)]
        if obj is Objective.TOTAL:
            return sum(ws)
        if obj is Objective.BTNK:
            return max(ws)
        raise InstanceError("scalar path cost is defined for total/btnk only")

    def weight_values(self) -> list[int]:
        vals = set()
        for level in range(1, self.n + 1):
            for j, jp in self.edges_into(level):
                for l in range(self.n):
                    vals.add(self.edge_weight(level, j, jp, l))
        return sorted(vals)

    def selection(self, columns: Sequence[int]) -> SplitterSelection:
        return SplitterSelection(tuple(columns), tuple(self.values[c - 1] for c in columns))


class DapSplitterGraph(SplitterGraph):
    """Splitter graph of a data-allocation instance.

    Vector weight: ``Acc[:, j'] - Acc[:, j]``.  Scalar weight:
    ``F[j'][l] - F[j][l]`` with ``F[j][l] = sum_i Acc[i][j] * C[i][l]``.
    Both depend on the columns only, not on the level.
    """

    def __init__(self, inst: DapInstance, objective: Objective | str = Objective.TOTAL):
        super().__init__(inst.n, inst.sorted_values(), inst.C, objective)
        self.instance = inst
        self.acc = build_acc(inst)
        n, C, acc = self.n, self.C, self.acc
        self.F = tuple(
            tuple(sum(acc[i][j] * C[i][l] for i in range(n)) for l in range(n))
            for j in range(self.N + 2)
        )

    def edge_vector(self, level: int, j: int, jp: int) -> tuple[int, ...]:
        return tuple(row[jp] - row[j] for row in self.acc)

    def edge_weight(self, level: int, j: int, jp: int, label: int) -> int:
        return self.F[jp][label] - self.F[j][label]

    def weight_values(self) -> list[int]:
        # weights depend on the column pair only, so visit each pair once
        F, n, N = self.F, self.n, self.N
        pairs = [(0, jp) for jp in range(1, N + 1)] + [(j, N + 1) for j in range(1, N + 1)]
        if n > 2:
            pairs += itertools.combinations(range(1, N + 1), 2)
        return sorted({F[jp][l] - F[j][l] for j, jp in pairs for l in range(n)})


def build_splitter_graph(inst: DapInstance, obj: Objective | str = Objective.TOTAL) -> DapSplitterGraph:
    return DapSplitterGraph(inst, obj)


def induced_T(inst: DapInstance, indices: Sequence[int]) -> Matrix:
    """``T[i][j] = |S_i ∩ (s*_{j-1}, s*_j]|`` read off the Acc matrix."""
    acc = build_acc(inst)
    cols = (0, *indices, inst.N + 1)
    return tuple(
        tuple(row[cols[j + 1]] - row[cols[j]] for j in range(inst.n)) for row in acc
    )


# ---------------------------------------------------------------- level DP


def _label_dp(
    graph: SplitterGraph,
    combine: Callable[[int, int], int],
    alpha: Optional[int],
    dedup: bool,
    trace: Optional[Callable[[int, dict], None]],
) -> Optional[tuple[int, tuple[int, ...], tuple[int, ...]]]:
    """Propagate partial permutations level by level along the splitter graph.

    A state is ``(column, labels)`` where ``labels`` is the label set (bitmask)
    when ``dedup`` is on and the ordered partial permutation otherwise.  Each
    state keeps the best accumulated cost; states whose cost exceeds
    ``alpha`` are dropped.  Returns ``(cost, columns, perm)`` for the best
    complete path, or ``None``.
    """
    n, N = graph.n, graph.N
    empty = 0 if dedup else ()
    layer: dict = {(0, empty): (0, None)}
    history = []
    for level in range(1, n + 1):
        nxt: dict = {}
        by_col: dict[int, list] = {}
        for (k, key), (cost, _) in layer.items():
            by_col.setdefault(k, []).append((key, cost))
        for k, jp in graph.edges_into(level):
            states = by_col.get(k)
            if not states:
                continue
            weights = [graph.edge_weight(level, k, jp, l) for l in range(n)]
            for key, cost in states:
                for l in range(n):
                    if dedup:
                        if key >> l & 1:
                            continue
                        nkey = key | 1 << l
                    else:
                        if l in key:
                            continue
                        nkey = key + (l,)
                    c = combine(cost, weights[l])
                    if alpha is not None and c > alpha:
                        continue
                    old = nxt.get((jp, nkey))
                    if old is None or c < old[0]:
                        nxt[(jp, nkey)] = (c, (k, key, l))
        history.append(nxt)
        if trace is not None:
            trace(level, {state: cost for state, (cost, _) in nxt.items()})
        layer = nxt
        if not layer:
            return None
    (col, key), (cost, _) = min(layer.items(), key=lambda kv: kv[1][0])
    cols, labels = [], []
    for level in range(n, 0, -1):
        _, (k, pkey, l) = history[level - 1][(col, key)]
        labels.append(l)
        if level > 1:
            cols.append(k)
        col, key = k, pkey
    return cost, tuple(reversed(cols)), tuple(reversed(labels))


def _decision(graph: SplitterGraph, result) -> Decision:
    if result is None:
        return Decision(False, None)
    _, cols, labels = result
    return Decision(True, (graph.selection(cols), Permutation(labels)))


def decide_dap_total(
    graph: SplitterGraph, alpha: int, *, dedup: bool = True,
    trace: Optional[Callable[[int, dict], None]] = None,
) -> Decision:
    """Is there a path and permutation with summed edge weight ``<= alpha``?"""
    if alpha < 0:
        return Decision(False, None)
    return _decision(graph, _label_dp(graph, lambda a, b: a + b, alpha, dedup, trace))


def decide_dap_btnk(
    graph: SplitterGraph, alpha: int, *, dedup: bool = True,
    trace: Optional[Callable[[int, dict], None]] = None,
) -> Decision:
    """Is there a path and permutation whose every edge weight is ``<= alpha``?"""
    if alpha < 0:
        return Decision(False, None)
    return _decision(graph, _label_dp(graph, max, alpha, dedup, trace))


def _check_dp_size(inst: DapInstance, max_machines: int) -> None:
    if inst.n > max_machines:
        raise SizeLimitError(f"label-set DP capped at n<={max_machines}, got n={inst.n}")


def _solution(inst: DapInstance, obj: Objective, graph: SplitterGraph,
              cols: Sequence[int], perm: Permutation, value: int) -> DapSolution:
    return DapSolution(obj, graph.selection(cols), perm, value, induced_T(inst, cols))


def solve_dap_total(inst: DapInstance, max_machines: int = DEFAULT_DP_MACHINES) -> DapSolution:
    _check_dp_size(inst, max_machines)
    graph = build_splitter_graph(inst, Objective.TOTAL)
    value, cols, labels = _label_dp(graph, lambda a, b: a + b, None, True, None)
    return _solution(inst, Objective.TOTAL, graph, cols, Permutation(labels), value)


def solve_dap_btnk(inst: DapInstance, max_machines: int = DEFAULT_DP_MACHINES) -> DapSolution:
    """Binary search for the smallest edge weight that admits a full path."""
    _check_dp_size(inst, max_machines)
    graph = build_splitter_graph(inst, Objective.BTNK)
    values = graph.weight_values()
    lo, hi = 0, len(values) - 1
    best = decide_dap_btnk(graph, values[hi])
    assert best.answer
    while lo < hi:
        mid = (lo + hi) // 2
        d = decide_dap_btnk(graph, values[mid])
        if d.answer:
            hi, best = mid, d
        else:
            lo = mid + 1
    sel, perm = best.witness
    value = graph.path_cost(sel.indices, perm, Objective.BTNK)
    return _solution(inst, Objective.BTNK, graph, sel.indices, perm, value)


# ---------------------------------------------------------------- exhaustive


def solve_dap_hard(
    target: DapInstance | SplitterGraph,
    obj: Objective | str,
    max_columns: int = DEFAULT_HARD_COLUMNS,
    max_machines: int = DEFAULT_HARD_MACHINES,
    node_cap: int = 10**7,
) -> DapSolution:
    """Exact DAP-MSR / DAP-SSR: every source-to-sink path, each solved as a DRP
    by branch-and-bound.  Ties go to the lexicographically first path."""
    obj = Objective.parse(obj)
    if obj not in (Objective.MSR, Objective.SSR):
        raise InstanceError(f"solve_dap_hard handles msr/ssr, not {obj.value}")
    graph = target if isinstance(target, SplitterGraph) else build_splitter_graph(target, obj)
    if graph.N > max_columns or graph.n > max_machines:
        raise SizeLimitError(
            f"path enumeration capped at N<={max_columns}, n<={max_machines}; "
            f"got N={graph.N}, n={graph.n}"
        )
    cfg = SearchConfig(node_cap=node_cap)
    best = None
    for cols in graph.paths():
        T = graph.induced_T(cols)
        drp = DrpInstance(T, graph.C)
        bound = None if best is None else best[0] - 1
        perm, value, completed, _ = _branch_and_bound(drp, obj, bound, cfg)
        if not completed:
            raise SizeLimitError(f"branch-and-bound hit node cap {node_cap} on path {cols}")
        if perm is not None:
            best = (value, cols, perm, T)
    if best is None:
        raise InstanceError("splitter graph has no source-to-sink path")
    value, cols, perm, T = best
    return DapSolution(obj, graph.selection(cols), Permutation(perm), value, T)


def _count_in(S: Sequence[int], lo, hi) -> int:
    return sum(1 for x in S if (lo is None or x > lo) and (hi is None or x <= hi))


def brute_force_dap(inst: DapInstance, obj: Objective | str, cap: int = 9) -> DapSolution:
    """Every splitter choice times every permutation.

    Intervals are counted straight from the datasets (no Acc matrix, no graph).
    """
    obj = Objective.parse(obj)
    n = inst.n
    s = inst.sorted_values()
    best = None
    for cols in itertools.combinations(range(1, len(s) + 1), n - 1):
        bounds = [None, *(s[c - 1] for c in cols), None]
        T = tuple(
            tuple(_count_in(S, bounds[j], bounds[j + 1]) for j in range(n))
            for S in inst.datasets
        )
        perm, value = brute_force_drp(DrpInstance(T, inst.C), obj, cap)
        if best is None or value < best[0]:
            best = (value, cols, perm, T)
    value, cols, perm, T = best
    return DapSolution(
        obj, SplitterSelection(cols, tuple(s[c - 1] for c in cols)), perm, value, T
    )


def evaluate_dap(inst: DapInstance, indices: Sequence[int], perm, obj: Objective | str) -> int:
    T = induced_T(inst, indices)
    return eval_costs(DrpInstance(T, inst.C), perm).value(obj)


def quantile_splitters(N: int, n: int) -> tuple[int, ...]:
    """Columns ``ceil(j N / n)``: the even split a sort-based shuffle uses."""
    return tuple(math.ceil(j * N / n) for j in range(1, n))


def solve_dap(inst: DapInstance, obj: Objective | str, **caps) -> DapSolution:
    obj = Objective.parse(obj)
    if obj is Objective.TOTAL:
        return solve_dap_total(inst, caps.get("max_machines", DEFAULT_DP_MACHINES))
    if obj is Objective.BTNK:
        return solve_dap_btnk(inst, caps.get("max_machines", DEFAULT_DP_MACHINES))
    return solve_dap_hard(inst, obj, **caps)
