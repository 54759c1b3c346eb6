"""Brute-force FBCT, second-order zero differential spectra and DDTs.

Everything here is exhaustive over x; it is the ground truth the closed-form
evaluators are checked against.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from .field import Field
from .functions import FunctionTable

BUDGET_LOG2 = 36
SCOPES = ("nontrivial", "all")
METHODS = ("direct", "pairs")


class BudgetExceeded(RuntimeError):
    pass


def default_workers() -> int:
    env = os.environ.get("FBCT_DEFAULT_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _check_budget(field: Field, force: bool):
    if not force and field.q ** 3 > 2 ** BUDGET_LOG2:
        raise BudgetExceeded(
            f"brute-force table over {field.spec} needs q^3 = {field.q ** 3} steps "
            f"(> 2^{BUDGET_LOG2}); pass force=True to run anyway")


def _kernel_args(f: FunctionTable):
    field = f.field
    table = np.ascontiguousarray(f.table, dtype=np.int64)
    if field.char2:
        add = np.zeros((1, 1), dtype=np.int16)
        neg = np.zeros(1, dtype=np.int64)
    else:
        add = field.addition_table()
        neg = field.neg_table()
    return table, add, neg, field.char2


def _run_rows(kernel, args, rows: np.ndarray, out: np.ndarray, workers: int | None):
    # rows are split into contiguous chunks; every chunk owns its rows of `out`
    workers = default_workers() if workers is None else max(1, int(workers))
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if workers == 1 or len(rows) < 2:
        kernel(*args, rows, *out)
        return
    chunks = [c for c in np.array_split(rows, min(len(rows), workers * 4)) if len(c)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for fut in [pool.submit(kernel, *args, c, *out) for c in chunks]:
            fut.result()


def nontrivial_mask(field: Field) -> np.ndarray:
    """Pairs (a, b) whose entry is not forced to q."""
    xs = np.arange(field.q)
    a, b = xs[:, None], xs[None, :]
    mask = (a != 0) & (b != 0)
    if field.char2:
        mask &= a != b
    return mask


@dataclass(frozen=True, eq=False)
class FbctMatrix:
    field: Field
    values: np.ndarray
    function: str = ""

    @property
    def trivial_value(self) -> int:
        return self.field.q

    def __getitem__(self, ab):
        return int(self.values[ab])

    def __eq__(self, other):
        return (isinstance(other, FbctMatrix) and other.field == self.field
                and np.array_equal(other.values, self.values))

    def nontrivial_values(self) -> np.ndarray:
        return self.values[nontrivial_mask(self.field)]


@dataclass(frozen=True)
class Spectrum:
    """Histogram {i: omega_i} of FBCT entries over a scope of pairs.

    ``complete`` is False when only some omega_i are known (closed forms that
    leave a value to the oracle); ``assumptions`` names unproven statements
    the numbers rely on.
    """

    counts: dict = dc_field(default_factory=dict)
    scope: str = "nontrivial"
    complete: bool = True
    assumptions: tuple = ()

    def __post_init__(self):
        if self.scope not in SCOPES:
            raise ValueError(f"scope must be one of {SCOPES}")
        clean = {int(k): int(v) for k, v in sorted(self.counts.items()) if v}
        object.__setattr__(self, "counts", clean)

    def omega(self, i: int) -> int:
        return self.counts.get(i, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def max_value(self) -> int:
        return max(self.counts) if self.counts else 0

    def to_dict(self) -> dict:
        out = {"scope": self.scope, "spectrum": {str(k): v for k, v in self.counts.items()}}
        if not self.complete:
            out["complete"] = False
        if self.assumptions:
            out["assumptions"] = list(self.assumptions)
        return out


def expected_spectrum_total(field: Field, scope: str = "nontrivial") -> int:
    q = field.q
    if scope == "all":
        return q * q
    return (q - 1) * (q - 2) if field.char2 else (q - 1) ** 2


# -- single entries --------------------------------------------------------------

def nabla(f: FunctionTable, a: int, b: int) -> int:
    """Number of x with f(x+a+b) - f(x+a) - f(x+b) + f(x) = 0."""
    field = f.field
    a, b = field.check(a), field.check(b)
    t = f.table
    xs = np.arange(field.q, dtype=np.int64)
    if field.char2:
        return int(np.count_nonzero((t[xs ^ a ^ b] ^ t[xs ^ a] ^ t[xs ^ b] ^ t) == 0))
    xa = field.add_const_view(a)
    xb = field.add_const_view(b)
    xab = field.add_vec(xa, b)
    lhs = field.add_vec(t[xab], t)
    rhs = field.add_vec(t[xa], t[xb])
    return int(np.count_nonzero(lhs == rhs))


# -- full tables -----------------------------------------------------------------

def _expand_orbits(field: Field, out: np.ndarray):
    q = field.q
    xs = np.arange(q)
    if field.char2:
        a, b = np.nonzero((xs[:, None] <= xs[None, :]) & (xs[None, :] <= (xs[:, None] ^ xs[None, :])))
        c = a ^ b
        v = out[a, b]
        for x, y in ((a, b), (b, a), (a, c), (c, a), (b, c), (c, b)):
            out[x, y] = v
    else:
        neg = field.neg_table()
        canon = xs <= neg
        a, b = np.nonzero(canon[:, None] & canon[None, :] & (xs[:, None] <= xs[None, :]))
        v = out[a, b]
        na, nb = neg[a], neg[b]
        for x in (a, na):
            for y in (b, nb):
                out[x, y] = v
                out[y, x] = v


def fbct_table(f: FunctionTable, *, workers: int | None = None, reduce: bool = True,
               method: str = "direct", force: bool = False) -> FbctMatrix:
    """Full q x q table of nabla_f(a, b).

    method="direct" counts every entry over x (four lookups and a compare per
    step); with ``reduce`` only one pair per symmetry orbit is counted.
    method="pairs" builds each row from the classes of x -> f(x+a) - f(x),
    which is far cheaper for low-uniformity functions.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    field = f.field
    _check_budget(field, force)
    q = field.q
    args = _kernel_args(f)
    out = np.zeros((q, q), dtype=np.int32)
    xs = np.arange(q)
    if method == "direct":
        _run_rows(_kernels.fbct_entries_direct, args, xs, (bool(reduce), out), workers)
        if reduce:
            _expand_orbits(field, out)
    else:
        if reduce and not field.char2:
            neg = field.neg_table()
            rows = xs[xs <= neg]
            _run_rows(_kernels.fbct_rows_pairs, args, rows, (out,), workers)
            out[neg[rows]] = out[rows]
        else:
            _run_rows(_kernels.fbct_rows_pairs, args, xs, (out,), workers)
    out.setflags(write=False)
    return FbctMatrix(field, out, f.name)


def second_order_uniformity(m: FbctMatrix) -> int:
    """Max entry over a, b != 0 (and a != b when p = 2)."""
    vals = m.nontrivial_values()
    return int(vals.max()) if vals.size else 0


def second_order_uniformity_of(f: FunctionTable, *, workers: int | None = None,
                               force: bool = False) -> int:
    """Same value as second_order_uniformity(fbct_table(f)) without storing the matrix."""
    field = f.field
    _check_budget(field, force)
    q = field.q
    if q < 3:
        return 0
    xs = np.arange(1, q)
    if not field.char2:
        xs = xs[xs <= field.neg_table()[xs]]
    out = np.zeros(q, dtype=np.int64)
    table = np.ascontiguousarray(f.table, dtype=np.int32)
    if field.char2:
        kernel, args = _kernels.row_maxima_char2, (table,)
    elif field.n == 1:
        kernel, args = _kernels.row_maxima_prime, (table,)
    else:
        kernel, args = _kernels.row_maxima_table, (table, field.addition_table(), field.neg_table())
    _run_rows(kernel, args, xs, (out,), workers)
    return int(out.max())


def uniformity_witness(m: FbctMatrix) -> tuple[int, int, int]:
    """(value, a, b) for the first maximising nontrivial pair in row-major order."""
    masked = np.where(nontrivial_mask(m.field), m.values, -1)
    idx = int(np.argmax(masked))
    a, b = divmod(idx, m.field.q)
    return int(masked[a, b]), a, b


def spectrum(m: FbctMatrix, scope: str = "nontrivial") -> Spectrum:
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}")
    vals = m.nontrivial_values() if scope == "nontrivial" else m.values.ravel()
    keys, counts = np.unique(vals, return_counts=True)
    return Spectrum(dict(zip(keys.tolist(), counts.tolist())), scope)


def is_apn_via_fbct(m: FbctMatrix) -> bool:
    """All nontrivial entries zero (APN for p = 2, PN for odd p)."""
    return not np.any(m.nontrivial_values())


# -- differential distribution table ----------------------------------------------

@dataclass(frozen=True, eq=False)
class DdtMatrix:
    field: Field
    values: np.ndarray
    function: str = ""

    @property
    def uniformity(self) -> int:
        return int(self.values[1:].max()) if self.field.q > 1 else 0


def ddt_table(f: FunctionTable, *, workers: int | None = None, force: bool = False) -> DdtMatrix:
    """values[a, b] = #{x : f(x+a) - f(x) = b}."""
    field = f.field
    if not force and field.q ** 2 > 2 ** BUDGET_LOG2:
        raise BudgetExceeded(f"DDT over {field.spec} exceeds the compute budget")
    out = np.zeros((field.q, field.q), dtype=np.int32)
    _run_rows(_kernels.ddt_rows, _kernel_args(f), np.arange(field.q), (out,), workers)
    out.setflags(write=False)
    return DdtMatrix(field, out, f.name)


def differential_uniformity(f: FunctionTable | DdtMatrix, *, workers: int | None = None) -> int:
    if isinstance(f, FunctionTable):
        f = ddt_table(f, workers=workers)
    return f.uniformity
