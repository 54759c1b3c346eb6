"""Lookup-table functions on GF(p^n): the inverse map and its swapped variants."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .field import Field, FieldError, field_from_string


class TableError(ValueError):
    pass


class FunctionTable:
    """A function GF(p^n) -> GF(p^n) stored as its full value table.

    The table is copied and frozen on construction.
    """

    def __init__(self, field: Field, table, name: str = "table"):
        arr = np.array(table, dtype=np.int64).reshape(-1)
        if arr.shape[0] != field.q:
            raise TableError(f"table has {arr.shape[0]} entries, field {field.spec} needs {field.q}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            bad = int(arr[(arr < 0) | (arr >= field.q)][0])
            raise TableError(f"entry {bad} is not an element code of {field.spec}")
        arr.setflags(write=False)
        self.field = field
        self.table = arr
        self.name = name
        self.permutation = bool(np.unique(arr).size == field.q)

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __len__(self):
        return self.field.q

    def __eq__(self, other):
        return (isinstance(other, FunctionTable) and other.field == self.field
                and np.array_equal(other.table, self.table))

    def __repr__(self):
        return f"FunctionTable({self.name}, field={self.field.spec})"


@dataclass(frozen=True, eq=False)
class Transposition:
    """The transposition swapping alpha and beta; equality ignores order."""

    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha == self.beta:
            raise ValueError("a transposition needs two distinct points")

    def __eq__(self, other):
        return isinstance(other, Transposition) and {self.alpha, self.beta} == {other.alpha, other.beta}

    def __hash__(self):
        return hash(frozenset((self.alpha, self.beta)))

    def __call__(self, x: int) -> int:
        if x == self.alpha:
            return self.beta
        if x == self.beta:
            return self.alpha
        return x


def inverse_function(field: Field) -> FunctionTable:
    """x -> x^(q-2), so 0 maps to 0."""
    return FunctionTable(field, field.inv_vec(np.arange(field.q)), name="inv")


def swapped_inverse(field: Field, t: Transposition | tuple[int, int]) -> FunctionTable:
    """Inv o (alpha, beta): the images of Inv at alpha and beta exchanged."""
    if not isinstance(t, Transposition):
        t = Transposition(*t)
    field.check(t.alpha)
    field.check(t.beta)
    table = field.inv_vec(np.arange(field.q)).copy()
    table[t.alpha], table[t.beta] = field.inv(t.beta), field.inv(t.alpha)
    return FunctionTable(field, table, name=f"swap:{t.alpha},{t.beta}")


def identity_function(field: Field) -> FunctionTable:
    return FunctionTable(field, np.arange(field.q), name="identity")


def random_permutation(field: Field, rng: np.random.Generator) -> FunctionTable:
    return FunctionTable(field, rng.permutation(field.q), name="random")


def reduce_to_canonical(field: Field, t: Transposition | tuple[int, int]) -> tuple[Transposition, int]:
    """Map Inv o (alpha, beta) to the linearly equivalent Inv o (1, alpha^-1 beta).

    Returns the canonical transposition and the scaling s such that
    x -> s * F(s * x) is the canonical function.  A transposition (0, beta)
    is first read as (beta, 0), which lands on (1, 0) = (0, 1).
    """
    if not isinstance(t, Transposition):
        t = Transposition(*t)
    alpha, beta = field.check(t.alpha), field.check(t.beta)
    if alpha == 0:
        alpha, beta = beta, alpha
    return Transposition(1, field.mul(field.inv(alpha), beta)), alpha


def conjugate_by_scaling(f: FunctionTable, s: int) -> FunctionTable:
    """x -> s * f(s * x)."""
    field = f.field
    xs = np.arange(field.q)
    table = field.mul_vec(s, f.table[field.mul_vec(s, xs)])
    return FunctionTable(field, table, name=f"L{s}.{f.name}.L{s}")


def load_table(field: Field, raw: Sequence[int]) -> FunctionTable:
    """Validate a user-supplied S-box."""
    return FunctionTable(field, list(raw), name="table")


def read_sbox_file(path: str | Path) -> FunctionTable:
    """Read ``# field: p^n[:modulus]`` followed by q whitespace-separated codes."""
    text = Path(path).read_text()
    lines = text.splitlines()
    header = next((ln for ln in lines if ln.strip()), "")
    if not header.lstrip().startswith("#") or "field:" not in header:
        raise TableError(f"{path}: first line must be '# field: p^n[:modulus]'")
    try:
        field = field_from_string(header.split("field:", 1)[1].strip())
    except FieldError as exc:
        raise TableError(f"{path}: {exc}") from None
    body = text[text.index(header) + len(header):]
    try:
        values = [int(tok, 0) for tok in body.split()]
    except ValueError as exc:
        raise TableError(f"{path}: {exc}") from None
    f = load_table(field, values)
    f.name = f"table:{Path(path).name}"
    return f


def write_sbox_file(f: FunctionTable, path: str | Path, per_line: int = 16) -> None:
    rows = [f"# field: {f.field.spec}"]
    vals = [str(int(v)) for v in f.table]
    for i in range(0, len(vals), per_line):
        rows.append(" ".join(vals[i:i + per_line]))
    Path(path).write_text("\n".join(rows) + "\n")
