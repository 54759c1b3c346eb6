"""CSV / JSON serialisation of matrices, spectra and reports."""

from __future__ import annotations

import csv
import functools
import json
from importlib import resources
from typing import TextIO

import numpy as np

from .fbct import DdtMatrix, FbctMatrix, Spectrum, nontrivial_mask


def matrix_to_csv(m: FbctMatrix | DdtMatrix, out: TextIO, nontrivial_only: bool = False) -> None:
    """Write ``a,b,value`` rows in row-major order."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["a", "b", "value"])
    vals = m.values
    if nontrivial_only and isinstance(m, FbctMatrix):
        a_idx, b_idx = np.nonzero(nontrivial_mask(m.field))
    else:
        q = vals.shape[0]
        a_idx, b_idx = np.divmod(np.arange(q * q), q)
    writer.writerows(zip(a_idx.tolist(), b_idx.tolist(), vals[a_idx, b_idx].tolist()))


def matrix_to_obj(m: FbctMatrix | DdtMatrix) -> dict:
    kind = "fbct" if isinstance(m, FbctMatrix) else "ddt"
    return {"field": str(m.field.spec), "function": m.function, "kind": kind,
            "matrix": m.values.tolist()}


def spectrum_to_obj(sp: Spectrum, field=None, function: str | None = None) -> dict:
    out = {}
    if field is not None:
        out["field"] = str(field.spec)
    if function is not None:
        out["function"] = function
    out.update(sp.to_dict())
    return out


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


@functools.lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """Shipped JSON schema by short name: matrix, spectrum, report or closedform."""
    text = resources.files("swapfbct").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
