"""FBCT and second-order zero differential spectra of swapped inverse functions."""

from .fbct import (
    BudgetExceeded,
    FbctMatrix,
    Spectrum,
    ddt_table,
    differential_uniformity,
    fbct_table,
    is_apn_via_fbct,
    nabla,
    second_order_uniformity,
    second_order_uniformity_of,
    spectrum,
)
from .field import Field, FieldError, field_from_string, get_field
from .functions import (
    FunctionTable,
    TableError,
    Transposition,
    inverse_function,
    reduce_to_canonical,
    swapped_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "FbctMatrix", "Field", "FieldError", "FunctionTable", "Spectrum",
    "TableError", "Transposition", "ddt_table", "differential_uniformity", "fbct_table",
    "field_from_string", "get_field", "inverse_function", "is_apn_via_fbct", "nabla",
    "reduce_to_canonical", "second_order_uniformity", "second_order_uniformity_of",
    "spectrum", "swapped_inverse",
]
