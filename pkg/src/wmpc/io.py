"""Line-oriented text formats for instances and solutions.

Instance files::

    drp                     dap                     spgraph
    n 2                     n 2 N 4                 k 2
    T:                      S1:                     S:
    1 2                     1 2                     2 2
    3 4                     S2:
    C:                      3 4
    0 5                     C:
    7 0                     0 1
                            1 0

``spgraph`` is the Selecting-PARTITION splitter graph, stored by its
generating set; ``sp`` has the same body and holds a bare
Selecting-PARTITION instance.  Blank lines and ``#`` comments are ignored.
Matrix blocks need exactly ``n`` rows of ``n`` integers; dataset blocks may
span lines or be empty.

Solution files are ``key value...`` lines; machine numbers and splitter
indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .core import DrpInstance, InstanceError, Objective, Permutation
from .dap import DapInstance
from .reductions import SelectingPartitionGraph, SelectingPartitionInstance

Instance = Union[DrpInstance, DapInstance, SelectingPartitionGraph, SelectingPartitionInstance]


class FormatError(InstanceError):
    def __init__(self, lineno: Optional[int], msg: str):
        where = f"line {lineno}: " if lineno else ""
        super().__init__(where + msg)
        self.lineno = lineno


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _ints(no: int, line: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise FormatError(no, f"expected integers, got {line!r}") from None


def _header(no: int, line: str, keys: tuple[str, ...]) -> dict[str, int]:
    toks = line.split()
    if len(toks) != 2 * len(keys) or tuple(toks[0::2]) != keys:
        raise FormatError(no, f"expected '{' '.join(k + ' <int>' for k in keys)}', got {line!r}")
    vals = _ints(no, " ".join(toks[1::2]))
    return dict(zip(keys, vals))


def _blocks(lines: list[tuple[int, str]]) -> dict[str, tuple[int, list[tuple[int, str]]]]:
    blocks: dict[str, tuple[int, list]] = {}
    current = None
    for no, line in lines:
        if line.endswith(":"):
            label = line[:-1].strip()
            if label in blocks:
                raise FormatError(no, f"duplicate block {label!r}")
            blocks[label] = (no, [])
            current = label
        elif current is None:
            raise FormatError(no, f"data outside any block: {line!r}")
        else:
            blocks[current][1].append((no, line))
    return blocks


def _matrix(blocks, label: str, n: int, end_no: int) -> list[list[int]]:
    if label not in blocks:
        raise FormatError(end_no, f"missing block {label}:")
    start, rows = blocks[label]
    if len(rows) != n:
        raise FormatError(start, f"block {label}: expected {n} rows, got {len(rows)}")
    out = []
    for no, line in rows:
        vals = _ints(no, line)
        if len(vals) != n:
            raise FormatError(no, f"block {label}: expected {n} integers, got {len(vals)}")
        out.append(vals)
    return out


def parse_instance(text: str) -> Instance:
    lines = _lines(text)
    if not lines:
        raise FormatError(None, "empty instance file")
    end_no = lines[-1][0]
    no, kind = lines[0]
    if len(lines) < 2:
        raise FormatError(no, "truncated instance file")
    if kind == "drp":
        n = _header(*lines[1], ("n",))["n"]
        if n < 1:
            raise FormatError(lines[1][0], "n must be positive")
        blocks = _blocks(lines[2:])
        _no_extra(blocks, {"T", "C"})
        try:
            return DrpInstance(_matrix(blocks, "T", n, end_no), _matrix(blocks, "C", n, end_no))
        except FormatError:
            raise
        except InstanceError as exc:
            raise FormatError(None, str(exc)) from None
    if kind == "dap":
        head = _header(*lines[1], ("n", "N"))
        n, N = head["n"], head["N"]
        if n < 2:
            raise FormatError(lines[1][0], "dap needs n >= 2")
        blocks = _blocks(lines[2:])
        _no_extra(blocks, {"C"} | {f"S{i}" for i in range(1, n + 1)})
        datasets = []
        for i in range(1, n + 1):
            label = f"S{i}"
            if label not in blocks:
                raise FormatError(end_no, f"missing block {label}:")
            vals = []
            for lno, line in blocks[label][1]:
                vals += _ints(lno, line)
            datasets.append(vals)
        if sum(len(d) for d in datasets) != N:
            raise FormatError(lines[1][0], f"datasets hold {sum(len(d) for d in datasets)} values, header says N={N}")
        try:
            return DapInstance(datasets, _matrix(blocks, "C", n, end_no))
        except FormatError:
            raise
        except InstanceError as exc:
            raise FormatError(None, str(exc)) from None
    if kind in ("sp", "spgraph"):
        k = _header(*lines[1], ("k",))["k"]
        blocks = _blocks(lines[2:])
        _no_extra(blocks, {"S"})
        if "S" not in blocks:
            raise FormatError(end_no, "missing block S:")
        vals = []
        for lno, line in blocks["S"][1]:
            vals += _ints(lno, line)
        try:
            sp = SelectingPartitionInstance(tuple(vals), k)
        except InstanceError as exc:
            raise FormatError(None, str(exc)) from None
        return SelectingPartitionGraph(sp) if kind == "spgraph" else sp
    raise FormatError(no, f"unknown instance kind {kind!r}")


def _no_extra(blocks, allowed: set[str]) -> None:
    for label, (no, _) in blocks.items():
        if label not in allowed:
            raise FormatError(no, f"unexpected block {label}:")


def _row(vals) -> str:
    return " ".join(str(v) for v in vals)


def format_instance(inst: Instance) -> str:
    if isinstance(inst, DrpInstance):
        out = ["drp", f"n {inst.n}", "T:"]
        out += [_row(r) for r in inst.T]
        out.append("C:")
        out += [_row(r) for r in inst.C]
    elif isinstance(inst, DapInstance):
        out = ["dap", f"n {inst.n} N {inst.N}"]
        for i, S in enumerate(inst.datasets, 1):
            out.append(f"S{i}:")
            if S:
                out.append(_row(S))
        out.append("C:")
        out += [_row(r) for r in inst.C]
    elif isinstance(inst, SelectingPartitionGraph):
        out = ["spgraph", f"k {inst.sp.k}", "S:", _row(inst.sp.S)]
    elif isinstance(inst, SelectingPartitionInstance):
        out = ["sp", f"k {inst.k}", "S:", _row(inst.S)]
    else:
        raise TypeError(f"cannot serialise {type(inst).__name__}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class SolutionRecord:
    problem: str
    objective: Objective
    value: int
    perm: Permutation
    send: tuple[int, ...]
    rcv: tuple[int, ...]
    proven_optimal: bool
    splitters: Optional[tuple[int, ...]] = None
    splitter_indices: Optional[tuple[int, ...]] = None


def format_solution(sol: SolutionRecord) -> str:
    out = [
        f"problem {sol.problem}",
        f"objective {sol.objective.value}",
        f"value {sol.value}",
        f"perm {_row(sol.perm.one_based())}",
    ]
    if sol.splitter_indices is not None:
        out.append(f"splitters {_row(sol.splitters)}")
        out.append(f"splitter_indices {_row(sol.splitter_indices)}")
    out += [
        f"send {_row(sol.send)}",
        f"rcv {_row(sol.rcv)}",
        f"proven_optimal {'true' if sol.proven_optimal else 'false'}",
    ]
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> SolutionRecord:
    fields: dict[str, tuple[int, list[str]]] = {}
    for no, line in _lines(text):
        key, *rest = line.split()
        if key in fields:
            raise FormatError(no, f"duplicate field {key!r}")
        fields[key] = (no, rest)
    required = ("problem", "objective", "value", "perm", "send", "rcv", "proven_optimal")
    for key in required:
        if key not in fields:
            raise FormatError(None, f"solution is missing field {key!r}")

    def ints(key):
        no, toks = fields[key]
        return tuple(_ints(no, " ".join(toks)))

    flag = fields["proven_optimal"][1]
    if flag not in (["true"], ["false"]):
        raise FormatError(fields["proven_optimal"][0], "proven_optimal must be true or false")
    return SolutionRecord(
        problem=" ".join(fields["problem"][1]),
        objective=Objective.parse(" ".join(fields["objective"][1])),
        value=ints("value")[0],
        perm=Permutation.from_one_based(ints("perm")),
        send=ints("send"),
        rcv=ints("rcv"),
        proven_optimal=flag == ["true"],
        splitters=ints("splitters") if "splitters" in fields else None,
        splitter_indices=ints("splitter_indices") if "splitter_indices" in fields else None,
    )
