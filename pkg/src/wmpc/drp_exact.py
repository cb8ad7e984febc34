"""Exact branch-and-bound for DRP-MSR and DRP-SSR.

Intervals are assigned to machines one at a time.  Send and receive costs only
grow as the assignment extends (all of ``T`` and ``C`` are non-negative), so
the aggregate of a partial assignment is a valid lower bound for every
completion of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .core import DrpInstance, InstanceError, Objective, Permutation, eval_costs, receive_matrix

DEFAULT_NODE_CAP = 10**7


@dataclass(frozen=True)
class SearchConfig:
    node_cap: int = DEFAULT_NODE_CAP
    initial_incumbent: Optional[int] = None
    prune: bool = True
    # skip machines interchangeable with an unused lower-numbered one
    symmetry: bool = True
    # called as on_incumbent(value, perm_tuple) whenever the incumbent improves
    on_incumbent: Optional[Callable[[int, tuple[int, ...]], None]] = None

    def __post_init__(self):
        if self.node_cap <= 0:
            raise InstanceError("node_cap must be positive")


@dataclass(frozen=True)
class ExactResult:
    perm: Permutation
    value: int
    proven_optimal: bool
    nodes: int

    def __iter__(self):
        return iter((self.perm, self.value, self.proven_optimal))


def machine_classes(inst: DrpInstance) -> list[int]:
    """Map each machine to the smallest machine it can be swapped with.

    Machines ``a`` and ``b`` are interchangeable when exchanging their labels
    leaves ``T`` and ``C`` unchanged.  Such swaps compose, so the relation is an
    equivalence.
    """
    n = inst.n
    T, C = inst.T, inst.C

    def swappable(a: int, b: int) -> bool:
        if T[a] != T[b] or C[a][b] != C[b][a]:
            return False
        return all(
            C[a][x] == C[b][x] and C[x][a] == C[x][b] for x in range(n) if x != a and x != b
        )

    rep = list(range(n))
    for b in range(n):
        for a in range(b):
            if rep[a] == a and swappable(a, b):
                rep[b] = a
                break
    return rep


def _branch_and_bound(
    inst: DrpInstance,
    obj: Objective,
    bound: Optional[int],
    cfg: SearchConfig,
) -> tuple[Optional[tuple[int, ...]], Optional[int], bool, int]:
    """Depth-first search for a permutation with value ``<= bound``.

    Returns ``(perm, value, completed, nodes)``; ``perm`` is ``None`` when no
    permutation within ``bound`` was found.
    """
    n = inst.n
    T, C = inst.T, inst.C
    R = receive_matrix(inst)
    ssr = obj is Objective.SSR
    volume = [sum(T[i][j] for i in range(n)) for j in range(n)]
    order = sorted(range(n), key=lambda j: (-volume[j], j))
    rep = machine_classes(inst) if cfg.symmetry else list(range(n))
    senders = [[i for i in range(n) if T[i][j]] for j in range(n)]

    send = [0] * n
    rcv = [0] * n
    assigned = [-1] * n
    used = [False] * n

    best_val = bound
    best_perm: Optional[tuple[int, ...]] = None
    nodes = 0
    aborted = False

    def marginal(j: int, m: int, current: int) -> int:
        # aggregate after placing interval j on machine m
        agg = current
        Cm = [C[i][m] for i in senders[j]]
        if ssr:
            for i, c in zip(senders[j], Cm):
                extra = T[i][j] * c
                if i == m:
                    continue
                val = send[i] + extra + rcv[i]
                if val > agg:
                    agg = val
            val = send[m] + rcv[m] + R[j][m]
            if val > agg:
                agg = val
        else:
            for i, c in zip(senders[j], Cm):
                val = send[i] + T[i][j] * c
                if val > agg:
                    agg = val
            val = rcv[m] + R[j][m]
            if val > agg:
                agg = val
        return agg

    def pruned(agg: int) -> bool:
        if not cfg.prune or best_val is None:
            return False
        if best_perm is None:
            return agg > best_val
        return agg >= best_val

    def dfs(depth: int, current: int) -> None:
        nonlocal best_val, best_perm, nodes, aborted
        if aborted:
            return
        nodes += 1
        if nodes > cfg.node_cap:
            aborted = True
            return
        if depth == n:
            if best_perm is None:
                better = best_val is None or current <= best_val
            else:
                better = current < best_val
            if better:
                best_val = current
                best_perm = tuple(assigned)
                if cfg.on_incumbent is not None:
                    cfg.on_incumbent(current, best_perm)
            return
        j = order[depth]
        candidates = []
        seen_class = set()
        for m in range(n):
            if used[m]:
                continue
            if rep[m] in seen_class:
                continue
            seen_class.add(rep[m])
            agg = marginal(j, m, current)
            candidates.append((agg, m))
        candidates.sort()
        for agg, m in candidates:
            if pruned(agg):
                # sorted ascending, nothing later survives
                break
            for i in senders[j]:
                send[i] += T[i][j] * C[i][m]
            rcv[m] += R[j][m]
            used[m] = True
            assigned[j] = m
            dfs(depth + 1, agg)
            assigned[j] = -1
            used[m] = False
            rcv[m] -= R[j][m]
            for i in senders[j]:
                send[i] -= T[i][j] * C[i][m]
            if aborted:
                return

    dfs(0, 0)
    if best_perm is None:
        return None, None, not aborted, nodes
    return best_perm, best_val, not aborted, nodes


def solve_drp_exact(
    inst: DrpInstance, obj: Objective | str, cfg: SearchConfig | None = None
) -> ExactResult:
    """Minimise MSR or SSR exactly.

    If the search finishes inside ``cfg.node_cap`` nodes the result is proven
    optimal; otherwise the best permutation found so far is returned with
    ``proven_optimal=False``.
    """
    obj = Objective.parse(obj)
    if obj not in (Objective.MSR, Objective.SSR):
        raise InstanceError(f"branch-and-bound handles msr/ssr, not {obj.value}")
    cfg = cfg or SearchConfig()
    perm, value, completed, nodes = _branch_and_bound(inst, obj, cfg.initial_incumbent, cfg)
    if perm is None:
        if completed:
            raise InstanceError(
                f"initial_incumbent {cfg.initial_incumbent} is below the optimum"
            )
        fallback = Permutation.identity(inst.n)
        return ExactResult(fallback, eval_costs(inst, fallback).value(obj), False, nodes)
    return ExactResult(Permutation(perm), value, completed, nodes)
