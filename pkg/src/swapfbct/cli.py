"""Command-line front end: ``swapfbct <command> --field ... --fn ...``."""

from __future__ import annotations

import argparse
import contextlib
import io
import sys

from . import closedform as cf
from . import experiments as ex
from .export import dumps, matrix_to_csv, matrix_to_obj, spectrum_to_obj
from .fbct import (
    SCOPES,
    BudgetExceeded,
    ddt_table,
    fbct_table,
    nabla,
    spectrum,
    uniformity_witness,
)
from .field import Field, FieldError, field_from_string
from .functions import (
    TableError,
    Transposition,
    inverse_function,
    read_sbox_file,
    reduce_to_canonical,
    swapped_inverse,
)

EXIT_OK, EXIT_ERROR, EXIT_BUDGET, EXIT_IO, EXIT_CLAIM = 0, 1, 2, 3, 4


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# -- argument helpers -----------------------------------------------------------------

def _field(args) -> Field:
    if not args.field:
        raise CliError("--field is required")
    return field_from_string(args.field)


def _code(field: Field, value, name: str) -> int:
    if value is None:
        raise CliError(f"--{name} is required")
    try:
        return field.check(int(value, 0) if isinstance(value, str) else int(value))
    except (ValueError, FieldError) as exc:
        raise CliError(f"--{name}: {exc}") from None


def _parse_swap(field: Field, spec: str, gamma) -> tuple[int, int]:
    parts = spec.split(",")
    if len(parts) != 2:
        raise CliError(f"bad selector 'swap:{spec}'; expected swap:alpha,beta")
    out = []
    for part in parts:
        part = part.strip()
        if part in ("γ", "g", "gamma"):
            out.append(_code(field, gamma, "gamma"))
        else:
            out.append(_code(field, part, "fn"))
    if out[0] == out[1]:
        raise CliError("swap needs two distinct points")
    return out[0], out[1]


def _function(args, field: Field | None = None):
    sel = args.fn or "inv"
    if sel.startswith("table:"):
        f = read_sbox_file(sel[len("table:"):])
        if field is not None and f.field != field:
            raise CliError(f"table field {f.field.spec} differs from --field {field.spec}")
        return f
    field = field or _field(args)
    if sel == "inv":
        return inverse_function(field)
    if sel.startswith("swap:"):
        return swapped_inverse(field, _parse_swap(field, sel[len("swap:"):], args.gamma))
    raise CliError(f"unknown function selector {sel!r}; use inv, swap:a,b or table:path")


def _function_from_args(args):
    field = None if (args.fn or "").startswith("table:") and not args.field else _field(args)
    return _function(args, field)


@contextlib.contextmanager
def _output(path):
    if not path:
        yield sys.stdout
        return
    buf = io.StringIO()
    yield buf
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


# -- commands -------------------------------------------------------------------------

def cmd_fbct(args) -> int:
    f = _function_from_args(args)
    m = fbct_table(f, workers=args.workers, force=args.force)
    value, a, b = uniformity_witness(m)
    summary = [f"second_order_uniformity: {max(value, 0)}"]
    if value >= 0:
        summary.append(f"witness: a={a} b={b}")
    fmt = args.format or "text"
    with _output(args.out) as out:
        if fmt == "csv":
            matrix_to_csv(m, out, nontrivial_only=args.scope == "nontrivial")
        elif fmt == "json":
            obj = matrix_to_obj(m)
            out.write(dumps(obj) + "\n")
        else:
            for line in summary:
                out.write(line + "\n")
            if m.field.q <= 32:
                width = len(str(m.field.q))
                for row in m.values.tolist():
                    out.write(" ".join(str(v).rjust(width) for v in row) + "\n")
    if fmt != "text" or args.out:
        # keep machine-readable stdout clean
        stream = sys.stderr if not args.out else sys.stdout
        for line in summary:
            print(line, file=stream)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    f = _function_from_args(args)
    m = fbct_table(f, workers=args.workers, force=args.force)
    sp = spectrum(m, args.scope)
    fmt = args.format or "text"
    with _output(args.out) as out:
        if fmt == "json":
            obj = spectrum_to_obj(sp, m.field, f.name)
            obj["second_order_uniformity"] = max(uniformity_witness(m)[0], 0)
            out.write(dumps(obj) + "\n")
        elif fmt == "csv":
            out.write("value,count\n")
            for k, v in sp.counts.items():
                out.write(f"{k},{v}\n")
        else:
            out.write(dumps(sp.to_dict()["spectrum"]) + "\n")
    return EXIT_OK


def cmd_ddt(args) -> int:
    f = _function_from_args(args)
    d = ddt_table(f, workers=args.workers, force=args.force)
    fmt = args.format or "text"
    with _output(args.out) as out:
        if fmt == "csv":
            matrix_to_csv(d, out)
        elif fmt == "json":
            out.write(dumps(matrix_to_obj(d)) + "\n")
        else:
            out.write(f"differential_uniformity: {d.uniformity}\n")
            if d.field.q <= 32:
                width = len(str(d.field.q))
                for row in d.values.tolist():
                    out.write(" ".join(str(v).rjust(width) for v in row) + "\n")
    return EXIT_OK


def closed_form_value(field: Field, sel: str, a: int, b: int, gamma: int | None = None,
                      f8_rule: str = "stated") -> tuple[cf.ClosedFormCase, int | None]:
    """Closed form for Inv or a swapped inverse, routed through the (1, gamma) normal form.

    Returns the case and the canonical gamma (None for Inv and Inv o (0,1)).
    """
    if sel == "inv":
        fn = cf.nabla_inv_even if field.char2 else cf.nabla_inv_odd
        return fn(field, a, b), None
    if not sel.startswith("swap:"):
        raise CliError("closed forms exist for inv and swap:alpha,beta only")
    t, s = reduce_to_canonical(field, _parse_swap(field, sel[len("swap:"):], gamma))
    # canonical g(x) = s F(s x), so nabla_F(a, b) = nabla_g(a / s, b / s)
    a2, b2 = field.div(a, s), field.div(b, s)
    if t == Transposition(0, 1):
        fn = cf.nabla_inv01_even if field.char2 else cf.nabla_inv01_odd
        return fn(field, a2, b2), None
    g = t.beta
    if field.char2:
        return cf.nabla_inv1g_even(field, g, a2, b2, f8_rule), g
    if field.p == 3 and a2 == b2:
        return cf.nabla_inv1g_p3_diagonal(field, g, a2), g
    raise CliError("no closed form for this (field, function, a, b); only p = 2, "
                   "or p = 3 on the diagonal a = b")


def cmd_closedform(args) -> int:
    field = _field(args)
    sel = args.fn or "inv"
    a, b = _code(field, args.a, "a"), _code(field, args.b, "b")
    case, g = closed_form_value(field, sel, a, b, args.gamma, args.f8_rule)
    oracle = nabla(_function(args, field), a, b)
    fmt = args.format or "text"
    with _output(args.out) as out:
        if fmt == "json":
            obj = {"field": str(field.spec), "function": _function(args, field).name, "gamma": g,
                   "a": a, "b": b, "value": case.value, "case_label": case.label,
                   "exact": case.exact, "oracle": oracle}
            out.write(dumps(obj) + "\n")
        else:
            kind = "" if case.exact else " (upper bound)"
            out.write(f"value: {case.value}{kind}\ncase: {case.label}\noracle: {oracle}\n")
    return EXIT_OK


def _emit_report(args, report) -> int:
    with _output(args.out) as out:
        if (args.format or "text") == "json":
            out.write(report.to_json() + "\n")
        else:
            out.write(report.summary() + "\n")
    return EXIT_CLAIM if report.status == "fail" else EXIT_OK


def cmd_verify(args) -> int:
    if not args.experiment:
        raise CliError(f"--experiment is required; one of {', '.join(ex.EXPERIMENTS)}")
    field = field_from_string(args.field) if args.field else None
    gamma = None
    if args.gamma is not None:
        if field is None:
            raise CliError("--gamma needs --field")
        gamma = _code(field, args.gamma, "gamma")
    report = ex.run_experiment(args.experiment, field, gamma=gamma, limit=args.limit,
                               workers=args.workers, f8_rule=args.f8_rule, full=args.full)
    return _emit_report(args, report)


def cmd_sweep(args) -> int:
    return _emit_report(args, ex.sweep_odd_p(args.limit or 1000, workers=args.workers))


def cmd_gamma_classes(args) -> int:
    field = _field(args)
    classes = cf.gamma_trace_classes(field)
    with _output(args.out) as out:
        if (args.format or "text") == "json":
            out.write(dumps({"field": str(field.spec), "classes": classes}) + "\n")
        else:
            for key, gs in classes.items():
                out.write(f"{key}: {' '.join(map(str, gs))}\n")
    return EXIT_OK


COMMANDS = {
    "fbct": cmd_fbct, "spectrum": cmd_spectrum, "ddt": cmd_ddt, "closedform": cmd_closedform,
    "verify": cmd_verify, "sweep": cmd_sweep, "gamma-classes": cmd_gamma_classes,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", help="p^n[:c0,...,cn], e.g. 2^6 or 2^3:1,1,0,1")
    common.add_argument("--fn", help="inv | swap:alpha,beta | table:path (use swap:1,g with --gamma)")
    common.add_argument("--gamma", help="field element code")
    common.add_argument("--a", help="field element code")
    common.add_argument("--b", help="field element code")
    common.add_argument("--scope", choices=SCOPES, default="nontrivial")
    common.add_argument("--format", choices=("csv", "json", "text"))
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--workers", type=int, help="threads (default: FBCT_DEFAULT_WORKERS or CPU count)")
    common.add_argument("--force", action="store_true", help="ignore the compute budget")
    common.add_argument("--experiment", help=", ".join(ex.EXPERIMENTS))
    common.add_argument("--limit", type=int, help="sweep bound on p^n (or largest n for p3-conjecture)")
    common.add_argument("--f8-rule", choices=cf.F8_RULES, default="stated")
    common.add_argument("--full", action="store_true", help="keep every counterexample")

    parser = _Parser(prog="swapfbct", description="FBCT and second-order zero differential "
                     "spectra of swapped inverse functions", parents=[common])
    parser.add_argument("--list-gamma-classes", action="store_true",
                        help="print the trace classes of every gamma over --field and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = "gamma-classes" if args.list_gamma_classes else args.command
    if command is None:
        parser.print_help(sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CliError, FieldError, TableError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
