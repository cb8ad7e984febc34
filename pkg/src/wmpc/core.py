"""Cost model for one-round communication on a weighted complete network.

A DRP instance holds a transmission matrix ``T`` (``T[i][j]`` is the amount of
data on machine ``i`` that belongs to interval / virtual machine ``j``) and a
communication cost matrix ``C`` (``C[i][m]`` is the per-unit cost of moving
data from machine ``i`` to machine ``m``).  A permutation sends interval ``j``
to machine ``perm[j]``.

Everything here is exact integer arithmetic.  Machine and interval indices are
0-based internally; the file formats in :mod:`wmpc.io` are 1-based.
"""

from __future__ import annotations

import enum
import itertools
import numbers
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Matrix = tuple[tuple[int, ...], ...]

DEFAULT_BRUTE_FORCE_CAP = 9
_CHUNK = 40320


class InstanceError(ValueError):
    """Malformed instance or argument (maps to CLI exit code 2)."""


class SizeLimitError(RuntimeError):
    """Problem exceeds a configured enumeration or state-space cap."""


class Objective(enum.Enum):
    TOTAL = "total"
    BTNK = "btnk"
    MSR = "msr"
    SSR = "ssr"

    @classmethod
    def parse(cls, text: str | Objective) -> Objective:
        if isinstance(text, Objective):
            return text
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InstanceError(f"unknown objective {text!r}") from None


def _as_int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, numbers.Integral):
        raise InstanceError(f"{what} must be an integer, got {x!r}")
    return int(x)


def as_matrix(rows: Iterable[Iterable[int]], what: str = "matrix") -> Matrix:
    """Copy ``rows`` into an immutable tuple-of-tuples of Python ints."""
    return tuple(tuple(_as_int(v, what) for v in row) for row in rows)


def _check_square(M: Matrix, n: int, what: str) -> None:
    if len(M) != n:
        raise InstanceError(f"{what} has {len(M)} rows, expected {n}")
    for r, row in enumerate(M):
        if len(row) != n:
            raise InstanceError(f"{what} row {r + 1} has {len(row)} entries, expected {n}")
        for v in row:
            if v < 0:
                raise InstanceError(f"{what} row {r + 1} has negative entry {v}")


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``range(n)``; ``map[j]`` is the machine serving interval ``j``."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(_as_int(v, "permutation entry") for v in self.map)
        if sorted(m) != list(range(len(m))):
            raise InstanceError(f"not a permutation of 0..{len(m) - 1}: {list(m)}")
        object.__setattr__(self, "map", m)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_one_based(cls, values: Sequence[int]) -> Permutation:
        return cls(tuple(_as_int(v, "permutation entry") - 1 for v in values))

    def one_based(self) -> list[int]:
        return [v + 1 for v in self.map]

    def inverse(self) -> Permutation:
        inv = [0] * len(self.map)
        for j, m in enumerate(self.map):
            inv[m] = j
        return Permutation(tuple(inv))

    def __len__(self) -> int:
        return len(self.map)

    def __getitem__(self, j: int) -> int:
        return self.map[j]

    def __iter__(self):
        return iter(self.map)


@dataclass(frozen=True)
class DrpInstance:
    T: Matrix
    C: Matrix

    def __post_init__(self):
        T = as_matrix(self.T, "T")
        C = as_matrix(self.C, "C")
        n = len(T)
        if n == 0:
            raise InstanceError("instance needs at least one machine")
        _check_square(T, n, "T")
        _check_square(C, n, "C")
        for i in range(n):
            if C[i][i] != 0:
                raise InstanceError(f"C[{i + 1},{i + 1}] must be 0, got {C[i][i]}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return len(self.T)

    def relabel(self, sigma: Sequence[int]) -> DrpInstance:
        """Rename machine ``i`` to ``sigma[i]`` (rows of T, rows/cols of C)."""
        n = self.n
        T = [None] * n
        C = [[0] * n for _ in range(n)]
        for i in range(n):
            T[sigma[i]] = self.T[i]
            for k in range(n):
                C[sigma[i]][sigma[k]] = self.C[i][k]
        return DrpInstance(T, C)


@dataclass(frozen=True)
class CostReport:
    send: tuple[int, ...]
    rcv: tuple[int, ...]
    total: int
    btnk: int
    msr: int
    ssr: int

    def value(self, obj: Objective | str) -> int:
        return getattr(self, Objective.parse(obj).value)


def eval_costs(inst: DrpInstance, perm: Permutation | Sequence[int]) -> CostReport:
    if not isinstance(perm, Permutation):
        perm = Permutation(tuple(perm))
    n = inst.n
    if len(perm) != n:
        raise InstanceError(f"permutation has length {len(perm)}, instance has n={n}")
    T, C = inst.T, inst.C
    send = [0] * n
    rcv = [0] * n
    for i in range(n):
        Ti, Ci = T[i], C[i]
        for j in range(n):
            amount = Ti[j] * Ci[perm[j]]
            send[i] += amount
            rcv[perm[j]] += amount
    return CostReport(
        send=tuple(send),
        rcv=tuple(rcv),
        total=sum(send),
        btnk=max(rcv),
        msr=max(max(s, r) for s, r in zip(send, rcv)),
        ssr=max(s + r for s, r in zip(send, rcv)),
    )


def objective_value(inst: DrpInstance, perm, obj: Objective | str) -> int:
    return eval_costs(inst, perm).value(obj)


def receive_matrix(inst: DrpInstance) -> Matrix:
    """``R[j][m]``: receive cost at machine ``m`` if it serves interval ``j``."""
    n = inst.n
    T, C = inst.T, inst.C
    return tuple(
        tuple(sum(T[i][j] * C[i][m] for i in range(n)) for m in range(n))
        for j in range(n)
    )


def brute_force_drp(
    inst: DrpInstance, obj: Objective | str, cap: int = DEFAULT_BRUTE_FORCE_CAP
) -> tuple[Permutation, int]:
    """Enumerate all ``n!`` permutations and return the lexicographically
    smallest one attaining the minimum of ``obj``."""
    obj = Objective.parse(obj)
    n = inst.n
    if n > cap:
        raise SizeLimitError(f"brute force refuses n={n} > cap {cap}")
    T = np.array(inst.T, dtype=object)
    C = np.array(inst.C, dtype=object)
    # largest value any aggregate can take; fall back to Python ints past int64
    bound = 2 * int(T.sum()) * int(C.max(initial=0)) if n else 0
    dtype = np.int64 if bound < 2**62 else object
    T = T.astype(dtype)
    C = C.astype(dtype)
    # W[i, j, m] = T[i, j] * C[i, m]
    W = T[:, :, None] * C[:, None, :]

    best_val = None
    best_perm = None
    perms = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(perms, _CHUNK))
        if not block:
            break
        P = np.array(block, dtype=np.intp)
        k = len(block)
        send = np.zeros((k, n), dtype=dtype)
        rcv = np.zeros((k, n), dtype=dtype)
        ks = np.arange(k)
        for j in range(n):
            contrib = W[:, j, :][:, P[:, j]].T  # (k, n): machine i -> P[:, j]
            send += contrib
            rcv[ks, P[:, j]] += contrib.sum(axis=1)
        if obj is Objective.TOTAL:
            vals = send.sum(axis=1)
        elif obj is Objective.BTNK:
            vals = rcv.max(axis=1)
        elif obj is Objective.MSR:
            vals = np.maximum(send, rcv).max(axis=1)
        else:
            vals = (send + rcv).max(axis=1)
        pos = int(np.argmin(vals))
        v = int(vals[pos])
        if best_val is None or v < best_val:
            best_val, best_perm = v, block[pos]
    assert best_perm is not None
    return Permutation(best_perm), best_val

