"""Command-line front end: ``wmpc solve|eval|gen|bench``.

Exit codes: 0 success, 2 input error, 3 resource cap exceeded, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional, Sequence

from . import generators
from .core import (
    DEFAULT_BRUTE_FORCE_CAP,
    DrpInstance,
    InstanceError,
    Objective,
    Permutation,
    SizeLimitError,
    brute_force_drp,
    eval_costs,
)
from .dap import (
    DEFAULT_DP_MACHINES,
    DEFAULT_HARD_COLUMNS,
    DEFAULT_HARD_MACHINES,
    DapInstance,
    SplitterGraph,
    brute_force_dap,
    induced_T,
    quantile_splitters,
    solve_dap_btnk,
    solve_dap_hard,
    solve_dap_total,
)
from .drp_exact import DEFAULT_NODE_CAP, SearchConfig, solve_drp_exact
from .drp_poly import solve_drp_btnk, solve_drp_total
from .io import Instance, SolutionRecord, format_instance, format_solution, parse_instance
from .reductions import (
    Graph,
    PartitionInstance,
    SelectingPartitionGraph,
    SelectingPartitionInstance,
    ThreePartitionInstance,
    kclique_to_selecting_partition,
    partition_to_drp_msr,
    selecting_partition_to_dap_msr,
    three_partition_to_drp_ssr,
)

EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_INVARIANT = 4

# Selecting-PARTITION graphs have 2k+2 levels; 8 covers k <= 3
SP_GRAPH_MACHINES = 8


class InvariantError(RuntimeError):
    pass


def problem_kind(inst: Instance) -> str:
    if isinstance(inst, DrpInstance):
        return "drp"
    if isinstance(inst, (DapInstance, SplitterGraph)):
        return "dap"
    raise InstanceError(f"{type(inst).__name__} is not a solvable instance")


def _drp_of(inst, splitter_indices) -> DrpInstance:
    if isinstance(inst, DrpInstance):
        return inst
    if isinstance(inst, DapInstance):
        return DrpInstance(induced_T(inst, splitter_indices), inst.C)
    return DrpInstance(inst.induced_T(splitter_indices), inst.C)


def make_record(inst: Instance, obj: Objective, perm: Permutation,
                splitter_indices: Optional[Sequence[int]], proven: bool) -> SolutionRecord:
    kind = problem_kind(inst)
    if kind == "dap":
        N = inst.N
        idx = tuple(splitter_indices or ())
        if len(idx) != inst.n - 1 or any(not 1 <= c <= N for c in idx) or any(
            b <= a for a, b in zip(idx, idx[1:])
        ):
            raise InstanceError(f"need {inst.n - 1} strictly increasing splitter indices in 1..{N}")
        values = inst.sorted_values() if isinstance(inst, DapInstance) else inst.values
        splitters = tuple(values[c - 1] for c in idx)
    else:
        idx = splitters = None
    report = eval_costs(_drp_of(inst, idx), perm)
    return SolutionRecord(kind, obj, report.value(obj), perm, report.send, report.rcv,
                          proven, splitters, idx)


def verify_solution(inst: Instance, sol: SolutionRecord) -> bool:
    """Recompute a recorded solution from the instance alone."""
    again = make_record(inst, sol.objective, sol.perm, sol.splitter_indices, sol.proven_optimal)
    return again == sol


def solve(inst: Instance, obj: Objective, *, oracle: bool = False,
          brute_cap: int = DEFAULT_BRUTE_FORCE_CAP, node_cap: int = DEFAULT_NODE_CAP,
          max_machines: Optional[int] = None, max_columns: int = DEFAULT_HARD_COLUMNS,
          ) -> SolutionRecord:
    kind = problem_kind(inst)
    idx = None
    proven = True
    if kind == "drp":
        if oracle:
            perm, value = brute_force_drp(inst, obj, brute_cap)
        elif obj is Objective.TOTAL:
            perm, value = solve_drp_total(inst)
        elif obj is Objective.BTNK:
            perm, value = solve_drp_btnk(inst)
        else:
            res = solve_drp_exact(inst, obj, SearchConfig(node_cap=node_cap))
            perm, value, proven = res.perm, res.value, res.proven_optimal
    else:
        if oracle:
            if not isinstance(inst, DapInstance):
                raise InstanceError("--oracle needs a dap instance with datasets")
            sol = brute_force_dap(inst, obj, brute_cap)
        elif obj in (Objective.TOTAL, Objective.BTNK):
            if not isinstance(inst, DapInstance):
                raise InstanceError("spgraph instances support msr/ssr only")
            dp = solve_dap_total if obj is Objective.TOTAL else solve_dap_btnk
            sol = dp(inst, max_machines or DEFAULT_DP_MACHINES)
        else:
            default = SP_GRAPH_MACHINES if isinstance(inst, SelectingPartitionGraph) else DEFAULT_HARD_MACHINES
            sol = solve_dap_hard(inst, obj, max_columns=max_columns,
                                 max_machines=max_machines or default,
                                 node_cap=node_cap)
        perm, value, idx = sol.perm, sol.value, sol.splitters.indices
    record = make_record(inst, obj, perm, idx, proven)
    if record.value != value:
        raise InvariantError(f"solver reported {value}, re-evaluation gives {record.value}")
    return record


# ---------------------------------------------------------------- commands


def _read_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, path: Optional[str]) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise InstanceError(f"expected a comma separated integer list, got {text!r}") from None


def cmd_solve(args) -> int:
    inst = _read_instance(args.input)
    kind = problem_kind(inst)
    if args.problem and args.problem != kind:
        raise InstanceError(f"--problem {args.problem} but the input is a {kind} instance")
    record = solve(
        inst, Objective.parse(args.objective), oracle=args.oracle, brute_cap=args.max_n,
        node_cap=args.node_cap, max_machines=args.max_machines, max_columns=args.max_columns,
    )
    _write(format_solution(record), args.output)
    return 0


def cmd_eval(args) -> int:
    inst = _read_instance(args.input)
    raw = _int_list(args.perm)
    if sorted(raw) != list(range(1, len(raw) + 1)):
        raise InstanceError(f"--perm must list each of 1..{len(raw)} exactly once, got {raw}")
    perm = Permutation.from_one_based(raw)
    if len(perm) != inst.n:
        raise InstanceError(f"--perm has {len(perm)} entries, instance has n={inst.n}")
    idx = _int_list(args.splitters) if args.splitters else None
    if problem_kind(inst) == "dap" and idx is None:
        raise InstanceError("dap instances need --splitters")
    record = make_record(inst, Objective.TOTAL, perm, idx, False)
    report = eval_costs(_drp_of(inst, record.splitter_indices), perm)
    lines = [
        f"send {' '.join(map(str, report.send))}",
        f"rcv {' '.join(map(str, report.rcv))}",
        f"total {report.total}",
        f"btnk {report.btnk}",
        f"msr {report.msr}",
        f"ssr {report.ssr}",
    ]
    _write("\n".join(lines) + "\n", None)
    return 0


def _parse_edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for tok in text.replace(",", " ").split():
        try:
            a, b = tok.split("-")
            edges.append((int(a), int(b)))
        except ValueError:
            raise InstanceError(f"edge must look like 1-2, got {tok!r}") from None
    return edges


def build_generated(args) -> Instance:
    g = args.generator
    if g == "partition-msr":
        return partition_to_drp_msr(PartitionInstance(tuple(_int_list(args.set))))
    if g == "3partition-ssr":
        return three_partition_to_drp_ssr(ThreePartitionInstance(args.k, tuple(_int_list(args.values))))
    if g == "clique-sp":
        edges = _parse_edges(args.edges) if args.edges else []
        vertices = args.vertices or max((max(e) for e in edges), default=0)
        return kclique_to_selecting_partition(Graph(vertices, tuple(edges)), args.k)
    if g == "sp-dapmsr":
        return selecting_partition_to_dap_msr(SelectingPartitionInstance(tuple(_int_list(args.set)), args.k))
    if g == "random-drp":
        return generators.random_drp(args.n, args.seed, args.max_value)
    if g == "rack-drp":
        return generators.rack_drp(args.racks, args.per_rack, args.intra, args.inter, args.seed)
    if g == "random-dap":
        return generators.random_dap(args.n, args.N, args.seed, args.max_value)
    if g == "inverse-dap":
        return generators.inverse_sorted_dap(args.n, args.per_machine, args.seed)
    if g == "sorted-dap":
        return generators.sorted_dap(args.n, args.per_machine, args.seed)
    raise InstanceError(f"unknown generator {g!r}")


def cmd_gen(args) -> int:
    _write(format_instance(build_generated(args)), args.output)
    return 0


def baseline(inst: Instance, obj: Objective) -> int:
    """Identity assignment; for dap, splitters at the even ``N/n`` quantiles."""
    perm = Permutation.identity(inst.n)
    idx = quantile_splitters(inst.N, inst.n) if problem_kind(inst) == "dap" else None
    return make_record(inst, obj, perm, idx, False).value


def bench_instances(args) -> list[tuple[str, Instance]]:
    out = []
    for r in range(args.count):
        seed = args.seed + r
        if args.suite == "random-drp":
            inst = generators.random_drp(args.n, seed)
        elif args.suite == "rack-drp":
            per = max(1, args.n // 2)
            inst = generators.rack_drp(2, per, 1, 10, seed)
        elif args.suite == "random-dap":
            inst = generators.random_dap(args.n, args.N or 2 * args.n, seed)
        elif args.suite == "inverse-dap":
            inst = generators.inverse_sorted_dap(args.n, args.per_machine, seed)
        elif args.suite == "sorted-dap":
            inst = generators.sorted_dap(args.n, args.per_machine, seed)
        else:
            raise InstanceError(f"unknown suite {args.suite!r}")
        out.append((f"{args.suite}-{seed}", inst))
    return out


BENCH_HEADER = "id\tn\tN\tobjective\toptimized\tbaseline\tratio\tseconds\terror"


def ratio_text(optimized: int, base: int) -> str:
    if optimized > 0:
        return f"{base / optimized:.4f}"
    return "inf" if base > 0 else "1.0000"


def bench_rows(args) -> list[str]:
    obj = Objective.parse(args.objective)
    rows = [BENCH_HEADER]
    for name, inst in bench_instances(args):
        N = str(inst.N) if isinstance(inst, DapInstance) else "-"
        start = time.perf_counter()
        try:
            opt = solve(inst, obj, node_cap=args.node_cap).value
            base = baseline(inst, obj)
        except (InstanceError, SizeLimitError, InvariantError) as exc:
            rows.append(f"{name}\t{inst.n}\t{N}\t{obj.value}\t-\t-\t-\t-\t{exc}")
            continue
        secs = time.perf_counter() - start
        rows.append(
            f"{name}\t{inst.n}\t{N}\t{obj.value}\t{opt}\t{base}\t{ratio_text(opt, base)}\t{secs:.4f}\t"
        )
    return rows


def cmd_bench(args) -> int:
    _write("\n".join(bench_rows(args)) + "\n", args.output)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wmpc", description="Communication-cost solvers for weighted MPC.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--problem", choices=["drp", "dap"])
    s.add_argument("--objective", required=True, choices=[o.value for o in Objective])
    s.add_argument("--input", required=True)
    s.add_argument("--output", default="-")
    s.add_argument("--oracle", action="store_true", help="force exhaustive enumeration")
    s.add_argument("--max-n", type=int, default=DEFAULT_BRUTE_FORCE_CAP, help="brute-force machine cap")
    s.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    s.add_argument("--max-machines", type=int, default=None)
    s.add_argument("--max-columns", type=int, default=DEFAULT_HARD_COLUMNS)
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="evaluate a fixed assignment")
    e.add_argument("--input", required=True)
    e.add_argument("--perm", required=True, help="1-based machines, e.g. 2,1")
    e.add_argument("--splitters", help="1-based splitter indices into the sorted data")
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("gen", help="write a generated instance")
    g.add_argument("--output", default="-")
    gs = g.add_subparsers(dest="generator", required=True)
    x = gs.add_parser("partition-msr")
    x.add_argument("--set", required=True)
    x = gs.add_parser("3partition-ssr")
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--values", required=True)
    x = gs.add_parser("clique-sp")
    x.add_argument("--edges", default="")
    x.add_argument("--vertices", type=int, default=None)
    x.add_argument("--k", type=int, required=True)
    x = gs.add_parser("sp-dapmsr")
    x.add_argument("--set", required=True)
    x.add_argument("--k", type=int, required=True)
    x = gs.add_parser("random-drp")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--seed", type=int, required=True)
    x.add_argument("--max-value", type=int, default=9)
    x = gs.add_parser("rack-drp")
    x.add_argument("--racks", type=int, required=True)
    x.add_argument("--per-rack", type=int, required=True)
    x.add_argument("--intra", type=int, required=True)
    x.add_argument("--inter", type=int, required=True)
    x.add_argument("--seed", type=int, default=0)
    x = gs.add_parser("random-dap")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--N", type=int, required=True)
    x.add_argument("--seed", type=int, required=True)
    x.add_argument("--max-value", type=int, default=9)
    for name in ("inverse-dap", "sorted-dap"):
        x = gs.add_parser(name)
        x.add_argument("--n", type=int, required=True)
        x.add_argument("--per-machine", type=int, default=3)
        x.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="optimized vs identity-assignment baseline")
    b.add_argument("--suite", required=True,
                   choices=["random-drp", "rack-drp", "random-dap", "inverse-dap", "sorted-dap"])
    b.add_argument("--objective", required=True, choices=[o.value for o in Objective])
    b.add_argument("--count", type=int, default=20)
    b.add_argument("--n", type=int, default=5)
    b.add_argument("--N", type=int, default=None)
    b.add_argument("--per-machine", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    b.add_argument("--output", default="-")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"wmpc: size cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InstanceError as exc:
        print(f"wmpc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"wmpc: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
