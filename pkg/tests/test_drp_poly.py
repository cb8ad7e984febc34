import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from wmpc.core import DrpInstance, InstanceError, Permutation, brute_force_drp, eval_costs
from wmpc.drp_poly import (
    build_lap_cost,
    build_lbap_cost,
    max_bipartite_matching,
    solve_drp_btnk,
    solve_drp_total,
    solve_lap,
    solve_lbap,
)

from conftest import drp_instances, rand_drp


def test_lap_cost_example(example):
    assert build_lap_cost(example) == ((21, 5), (28, 10))


def test_lbap_cost_example(example):
    assert build_lbap_cost(example) == ((21, 5), (28, 10))


@pytest.mark.parametrize("build", [build_lap_cost, build_lbap_cost])
def test_cost_matrix_zero_inputs(build):
    T = [[1, 2], [3, 4]]
    assert build(DrpInstance(T, [[0, 0], [0, 0]])) == ((0, 0), (0, 0))
    assert build(DrpInstance([[0, 0], [0, 0]], [[0, 5], [7, 0]])) == ((0, 0), (0, 0))
    assert build(DrpInstance([[4]], [[0]])) == ((0,),)


@pytest.mark.parametrize(
    "F, value",
    [([[21, 5], [28, 10]], 31), ([[5, 2], [3, 4]], 5), ([[0, 1, 1], [1, 0, 1], [1, 1, 0]], 0)],
)
def test_solve_lap_small(F, value):
    perm, v = solve_lap(F)
    assert v == value == sum(F[j][perm[j]] for j in range(len(F)))


@pytest.mark.parametrize(
    "F, value",
    [([[21, 5], [28, 10]], 21), ([[5, 2], [3, 4]], 3), ([[0, 1, 1], [1, 0, 1], [1, 1, 0]], 0)],
)
def test_solve_lbap_small(F, value):
    perm, v = solve_lbap(F)
    assert v == value == max(F[j][perm[j]] for j in range(len(F)))


def test_lap_identity_on_zero_diagonal():
    F = [[0 if i == j else 1 for j in range(4)] for i in range(4)]
    assert solve_lap(F) == (Permutation.identity(4), 0)
    assert solve_lbap(F) == (Permutation.identity(4), 0)


def test_assignment_rejects_bad_matrix():
    with pytest.raises(InstanceError):
        solve_lap([[1, 2], [3]])
    with pytest.raises(InstanceError):
        solve_lbap([[1, -2], [3, 4]])


def test_empty_assignment_rejected():
    with pytest.raises(InstanceError):
        solve_lap([])


def test_matching_counts():
    # K_{2,2} minus one edge plus an isolated left vertex
    match = max_bipartite_matching([[0, 1], [0], []], 2)
    assert sum(m >= 0 for m in match) == 2
    assert match[2] == -1


def test_drp_total_example(example):
    assert solve_drp_total(example) == (Permutation.identity(2), 31)


def test_drp_btnk_example(example):
    perm, v = solve_drp_btnk(example)
    assert v == brute_force_drp(example, "btnk")[1] == 21
    assert eval_costs(example, perm).btnk == 21


def test_single_machine():
    inst = DrpInstance([[3]], [[0]])
    assert solve_drp_total(inst) == (Permutation.identity(1), 0)
    assert solve_drp_btnk(inst) == (Permutation.identity(1), 0)


def test_diagonal_T_costs_nothing():
    T = [[5 if i == j else 0 for j in range(4)] for i in range(4)]
    C = [[0 if i == j else 3 for j in range(4)] for i in range(4)]
    assert solve_drp_total(DrpInstance(T, C))[1] == 0


@pytest.mark.parametrize("seed", range(6))
def test_against_oracle_n3_n4(seed):
    rng = random.Random(seed)
    for n in (3, 4):
        inst = rand_drp(rng, n)
        assert solve_drp_total(inst)[1] == brute_force_drp(inst, "total")[1]
        assert solve_drp_btnk(inst)[1] == brute_force_drp(inst, "btnk")[1]


@settings(max_examples=60, deadline=None)
@given(drp_instances(min_n=1, max_n=5))
def test_per_permutation_soundness(inst):
    Flap, Flbap = build_lap_cost(inst), build_lbap_cost(inst)
    for p in itertools.permutations(range(inst.n)):
        r = eval_costs(inst, p)
        assert sum(Flap[j][p[j]] for j in range(inst.n)) == r.total
        assert max(Flbap[j][p[j]] for j in range(inst.n)) == r.btnk


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 50), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_lap_matches_scipy(F):
    rows, cols = linear_sum_assignment(np.array(F))
    perm, v = solve_lap(F)
    assert v == int(np.array(F)[rows, cols].sum())
    assert v == sum(F[j][perm[j]] for j in range(len(F)))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 20), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_lbap_value_is_entry_and_optimal(F):
    perm, v = solve_lbap(F)
    n = len(F)
    assert any(v in row for row in F)
    assert v == min(max(F[j][p[j]] for j in range(n)) for p in itertools.permutations(range(n)))


@settings(max_examples=40, deadline=None)
@given(drp_instances(min_n=1, max_n=5), st.integers(1, 7))
def test_scaling_C(inst, c):
    scaled = DrpInstance(inst.T, [[c * v for v in row] for row in inst.C])
    assert solve_drp_total(scaled)[1] == c * solve_drp_total(inst)[1]
    assert solve_drp_btnk(scaled)[1] == c * solve_drp_btnk(inst)[1]
    for obj in ("total", "btnk"):
        perms = list(itertools.permutations(range(inst.n)))
        a = [eval_costs(inst, p).value(obj) for p in perms]
        b = [eval_costs(scaled, p).value(obj) for p in perms]
        assert {p for p, v in zip(perms, a) if v == min(a)} == {p for p, v in zip(perms, b) if v == min(b)}


def test_deterministic():
    inst = rand_drp(random.Random(11), 6)
    assert solve_drp_total(inst) == solve_drp_total(inst)
    assert solve_drp_btnk(inst) == solve_drp_btnk(inst)
