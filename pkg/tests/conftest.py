import random

import pytest
from hypothesis import strategies as st

from wmpc.core import DrpInstance
from wmpc.dap import DapInstance

EXAMPLE_T = [[1, 2], [3, 4]]
EXAMPLE_C = [[0, 5], [7, 0]]


@pytest.fixture
def example():
    return DrpInstance(EXAMPLE_T, EXAMPLE_C)


def rand_drp(rng: random.Random, n: int, hi: int = 9) -> DrpInstance:
    T = [[rng.randint(0, hi) for _ in range(n)] for _ in range(n)]
    C = [[0 if i == j else rng.randint(0, hi) for j in range(n)] for i in range(n)]
    return DrpInstance(T, C)


def rand_dap(rng: random.Random, N: int, n: int, hi: int = 9) -> DapInstance:
    data = [[] for _ in range(n)]
    for _ in range(N):
        data[rng.randrange(n)].append(rng.randint(0, hi))
    C = [[0 if i == j else rng.randint(0, 9) for j in range(n)] for i in range(n)]
    return DapInstance(data, C)


@st.composite
def drp_instances(draw, min_n=1, max_n=5, hi=9):
    n = draw(st.integers(min_n, max_n))
    cell = st.integers(0, hi)
    T = [[draw(cell) for _ in range(n)] for _ in range(n)]
    C = [[0 if i == j else draw(cell) for j in range(n)] for i in range(n)]
    return DrpInstance(T, C)


@st.composite
def drp_with_perm(draw, min_n=1, max_n=5):
    inst = draw(drp_instances(min_n, max_n))
    perm = draw(st.permutations(range(inst.n)))
    return inst, tuple(perm)


@st.composite
def dap_instances(draw, n_choices=(2, 3), max_N=7, hi=6):
    n = draw(st.sampled_from(n_choices))
    N = draw(st.integers(n - 1, max_N))
    owners = draw(st.lists(st.integers(0, n - 1), min_size=N, max_size=N))
    vals = draw(st.lists(st.integers(0, hi), min_size=N, max_size=N))
    data = [[] for _ in range(n)]
    for o, v in zip(owners, vals):
        data[o].append(v)
    cell = st.integers(0, 9)
    C = [[0 if i == j else draw(cell) for j in range(n)] for i in range(n)]
    return DapInstance(data, C)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
