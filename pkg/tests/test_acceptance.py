"""Acceptance criteria, one test each.

Every criterion draws from ``random.Random(<criterion number>)`` so the seeds
are fixed in advance.  Each run records a PASS/FAIL line; the lines are
printed in the pytest terminal summary, or directly when this file is run as
a script.
"""

import itertools
import random
import tempfile
import time
from pathlib import Path

from wmpc import cli
from wmpc.core import DrpInstance, Objective, brute_force_drp, eval_costs
from wmpc.dap import (
    DapInstance,
    brute_force_dap,
    build_splitter_graph,
    decide_dap_btnk,
    decide_dap_total,
    solve_dap_btnk,
    solve_dap_hard,
    solve_dap_total,
)
from wmpc.drp_exact import solve_drp_exact
from wmpc.drp_poly import build_lap_cost, build_lbap_cost, solve_drp_btnk, solve_drp_total
from wmpc.generators import inverse_sorted_dap
from wmpc.io import parse_instance
from wmpc.reductions import (
    Graph,
    PartitionInstance,
    SelectingPartitionInstance,
    ThreePartitionInstance,
    accepted_subsets,
    check_selecting_partition,
    has_k_clique,
    has_perfect_partition,
    has_three_partition,
    kclique_to_selecting_partition,
    partition_to_drp_msr,
    selecting_partition_to_dap_msr,
    three_partition_to_drp_ssr,
)

RESULTS: dict[int, str] = {}

SP_MACHINES = 8


def rand_drp(rng, n):
    T = [[rng.randint(0, 9) for _ in range(n)] for _ in range(n)]
    C = [[0 if i == j else rng.randint(0, 9) for j in range(n)] for i in range(n)]
    return DrpInstance(T, C)


def criterion(number: int, title: str, budget: float):
    """Run the check, time it, record one line, then assert."""

    def wrap(check):
        def run():
            start = time.perf_counter()
            failures = check(random.Random(number))
            secs = time.perf_counter() - start
            ok = not failures and secs < budget
            detail = f"{secs:.1f}s of {budget:.0f}s"
            if failures:
                detail += f"; {len(failures)} mismatches, first: {failures[0]}"
            elif secs >= budget:
                detail += "; over time budget"
            RESULTS[number] = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title} ({detail})"
            assert not failures, failures[:3]
            assert secs < budget

        run.__name__ = check.__name__
        return run

    return wrap


@criterion(1, "DRP-TOTAL equals brute force", 30)
def test_c01_drp_total(rng):
    bad = []
    for t in range(200):
        inst = rand_drp(rng, rng.randint(2, 7))
        got, want = solve_drp_total(inst)[1], brute_force_drp(inst, "total")[1]
        if got != want:
            bad.append((t, got, want))
    return bad


@criterion(2, "DRP-BTNK equals brute force", 30)
def test_c02_drp_btnk(rng):
    bad = []
    for t in range(200):
        inst = rand_drp(rng, rng.randint(2, 7))
        got, want = solve_drp_btnk(inst)[1], brute_force_drp(inst, "btnk")[1]
        if got != want:
            bad.append((t, got, want))
    return bad


@criterion(3, "F-matrix per-permutation identities", 60)
def test_c03_reduction_soundness(rng):
    bad = []
    for t in range(50):
        inst = rand_drp(rng, rng.randint(2, 6))
        n = inst.n
        Flap, Flbap = build_lap_cost(inst), build_lbap_cost(inst)
        for p in itertools.permutations(range(n)):
            r = eval_costs(inst, p)
            if sum(Flap[j][p[j]] for j in range(n)) != r.total:
                bad.append((t, p, "total"))
            if max(Flbap[j][p[j]] for j in range(n)) != r.btnk:
                bad.append((t, p, "btnk"))
    return bad


@criterion(4, "DRP-MSR/SSR branch-and-bound equals brute force", 120)
def test_c04_drp_exact(rng):
    bad = []
    for t in range(100):
        inst = rand_drp(rng, rng.randint(2, 7))
        for obj in ("msr", "ssr"):
            res = solve_drp_exact(inst, obj)
            want = brute_force_drp(inst, obj)[1]
            if not res.proven_optimal or res.value != want:
                bad.append((t, obj, res.value, want))
    return bad


@criterion(5, "PARTITION iff: MSR optimum = B/2", 300)
def test_c05_partition_iff(rng):
    bad = []
    for t in range(30):
        S = tuple(rng.randint(1, 20) for _ in range(rng.randint(1, 10)))
        p = PartitionInstance(S)
        res = solve_drp_exact(partition_to_drp_msr(p), "msr")
        if not res.proven_optimal or (2 * res.value == p.B) != has_perfect_partition(S):
            bad.append((S, res.value, res.proven_optimal))
    return bad


@criterion(6, "3-PARTITION iff: SSR optimum = B", 120)
def test_c06_three_partition_iff(rng):
    bad = []
    for k in (1, 2):
        for s in itertools.combinations_with_replacement(range(1, 10), 3 * k):
            if sum(s) % k:
                continue
            t = ThreePartitionInstance(k, s)
            res = solve_drp_exact(three_partition_to_drp_ssr(t), "ssr")
            if not res.proven_optimal or (res.value == t.B) != has_three_partition(s, k):
                bad.append((k, s, res.value))
    return bad


def _dap_draws(rng):
    out = []
    for _ in range(100):
        n = rng.choice((2, 3))
        N = rng.randint(n - 1, 8)
        data = [[] for _ in range(n)]
        for _ in range(N):
            data[rng.randrange(n)].append(rng.randint(0, 9))
        C = [[0 if i == j else rng.randint(0, 9) for j in range(n)] for i in range(n)]
        out.append(DapInstance(data, C))
    return out


@criterion(7, "DAP-TOTAL/BTNK DP equals brute force", 120)
def test_c07_dap_oracle(rng):
    bad = []
    for t, inst in enumerate(_dap_draws(rng)):
        for obj, solver in (("total", solve_dap_total), ("btnk", solve_dap_btnk)):
            got, want = solver(inst).value, brute_force_dap(inst, obj).value
            if got != want:
                bad.append((t, obj, got, want))
    return bad


@criterion(8, "decision answers no at optimum-1, yes at optimum", 60)
def test_c08_decision_tightness(_rng):
    bad = []
    # the instances of criterion 7
    for t, inst in enumerate(_dap_draws(random.Random(7))):
        g = build_splitter_graph(inst)
        for obj, decide in (("total", decide_dap_total), ("btnk", decide_dap_btnk)):
            opt = brute_force_dap(inst, obj).value
            if decide(g, opt - 1).answer or not decide(g, opt).answer:
                bad.append((t, obj, opt))
    return bad


@criterion(9, "k-clique iff Selecting-PARTITION", 60)
def test_c09_clique_iff(rng):
    bad = []
    for t in range(50):
        v = rng.randint(1, 6)
        p = rng.random()
        edges = tuple(e for e in itertools.combinations(range(1, v + 1), 2) if rng.random() < p)
        g = Graph(v, edges)
        for k in (2, 3):
            sp = kclique_to_selecting_partition(g, k)
            if check_selecting_partition(sp, max_size=25) != has_k_clique(g, k):
                bad.append((v, edges, k))
    return bad


@criterion(10, "Selecting-PARTITION iff DAP-MSR optimum = B/2", 300)
def test_c10_selecting_partition_iff(rng):
    bad = []
    for t in range(30):
        k = rng.choice((2, 3))
        S = tuple(rng.randint(0, 9) for _ in range(rng.randint(k, 5)))
        sp = SelectingPartitionInstance(S, k)
        opt = solve_dap_hard(selecting_partition_to_dap_msr(sp), "msr", max_machines=SP_MACHINES).value
        accepted = list(accepted_subsets(sp))
        hits_half = any(2 * opt == sum(S[i] for i in A) for A in accepted)
        if bool(accepted) != hits_half:
            bad.append((S, k, opt, [tuple(S[i] for i in A) for A in accepted]))
    return bad


@criterion(11, "optimized <= identity baseline; inverse-sorted gives 0", 60)
def test_c11_terasort_baseline(rng):
    bad = []
    for t in range(20):
        inst = inverse_sorted_dap(rng.randint(2, 5), rng.randint(1, 4), rng.randrange(10**6))
        opt = solve_dap_total(inst).value
        base = cli.baseline(inst, Objective.TOTAL)
        if opt != 0 or base <= 0:
            bad.append(("inverse", t, opt, base))
    parser = cli.build_parser()
    for suite, n in (("random-drp", 5), ("rack-drp", 6), ("random-dap", 4), ("sorted-dap", 4), ("inverse-dap", 4)):
        for obj in Objective:
            args = parser.parse_args(["bench", "--suite", suite, "--objective", obj.value,
                                      "--count", "20", "--n", str(n), "--seed", str(rng.randrange(1000))])
            for row in cli.bench_rows(args)[1:]:
                f = row.split("\t")
                if f[8] or int(f[4]) > int(f[5]):
                    bad.append((suite, obj.value, row))
    return bad


GENERATOR_RUNS = [
    ["random-drp", "--n", "6", "--seed", "7"],
    ["rack-drp", "--racks", "2", "--per-rack", "3", "--intra", "1", "--inter", "10", "--seed", "3"],
    ["random-dap", "--n", "3", "--N", "8", "--seed", "7"],
    ["inverse-dap", "--n", "4", "--seed", "2"],
    ["sorted-dap", "--n", "4", "--seed", "2"],
    ["partition-msr", "--set", "3,1,1,2"],
    ["3partition-ssr", "--k", "2", "--values", "1,2,3,1,2,3"],
    ["clique-sp", "--edges", "1-2,2-3,1-3,3-4", "--k", "3"],
    ["sp-dapmsr", "--set", "5,3,5,1", "--k", "2"],
]


@criterion(12, "solvers and generators are byte-deterministic", 60)
def test_c12_determinism(_rng):
    bad = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)

        def twice(name, argv_for):
            outs = []
            for r in range(2):
                path = tmp / f"{name}.{r}"
                code = cli.main(argv_for(str(path)))
                outs.append((code, path.read_bytes() if path.exists() else None))
            if outs[0][0] != 0 or outs[0] != outs[1]:
                bad.append((name, outs[0][0]))
            return tmp / f"{name}.0"

        for t, gen in enumerate(GENERATOR_RUNS):
            path = twice(f"gen{t}", lambda out: ["gen", "--output", out, *gen])
            inst = parse_instance(path.read_text())
            kind = path.read_text().split()[0]
            if kind == "sp":
                continue
            objectives = ["msr", "ssr"] if kind == "spgraph" else [o.value for o in Objective]
            for obj in objectives:
                base = ["solve", "--objective", obj, "--input", str(path)]
                twice(f"sol{t}{obj}", lambda out: [*base, "--output", out])
                if kind != "spgraph" and inst.n <= 7:
                    twice(f"orc{t}{obj}", lambda out: [*base, "--oracle", "--output", out])
    return bad


def pytest_terminal_summary_lines():
    return [RESULTS[k] for k in sorted(RESULTS)]


if __name__ == "__main__":
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_c")):
        try:
            fn()
        except AssertionError:
            pass
    print("\n".join(pytest_terminal_summary_lines()))
