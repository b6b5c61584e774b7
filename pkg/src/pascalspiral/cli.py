"""Command-line front end.

Exit codes: 0 success, 2 domain error, 3 numeric oracle disagreement,
64 usage error.  Tables go to stdout as CSV or JSON, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .class_criteria import ClassKind, ClassParams, Criterion, closed_form, numeric_oracle
from .errors import DomainError, MonotonicityError, PreconditionError
from .explorer import ROW_FIELDS, OutputRow, q_star, sweep
from .inclusion import RTauParams
from .pascal_core import PascalParams, eval_G, eval_G_deriv, eval_phi, eval_phi_deriv, eval_psi, pmf
from .verify import equivalence_report, run_all

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_ORACLE = 3
EXIT_USAGE = 64
VERIFY_REL_TOL = 1e-9

__all__ = ["OutputRow", "ROW_FIELDS", "main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table(rows: list[dict], fields, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        json.dump([{k: r[k] for k in fields} for r in rows], out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_fmt(r[k]) for k in fields])


def _float_list(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:step`` (inclusive stop)."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise UsageError(f"step must be positive in {text!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + k * step, 12) for k in range(max(count, 0))]
        return [float(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}: {exc}") from None


def _add_class_args(p: argparse.ArgumentParser, multi: bool = False):
    if multi:
        p.add_argument("--alpha", default="0", help="comma list or start:stop:step (radians)")
        p.add_argument("--beta", default="0", help="comma list or start:stop:step")
    else:
        p.add_argument("--alpha", type=float, default=0.0, help="angle in radians (see --degrees)")
        p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--degrees", action="store_true", help="read --alpha in degrees")


def _add_rtau_args(p: argparse.ArgumentParser):
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--tau-re", type=float, default=0.0)
    p.add_argument("--tau-im", type=float, default=0.0)


def _rtau(args, required: bool) -> RTauParams | None:
    given = args.A is not None or args.B is not None
    if not required and not given:
        return None
    if args.A is None or args.B is None:
        raise UsageError("R^tau(A,B) criteria need both --A and --B")
    if args.tau_re == 0 and args.tau_im == 0:
        raise UsageError("R^tau(A,B) criteria need a nonzero --tau-re/--tau-im")
    return RTauParams(complex(args.tau_re, args.tau_im), args.A, args.B)


def _alpha(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def cmd_check(args) -> int:
    kind = ClassKind(args.class_kind.upper())
    criterion = Criterion.for_target(args.target, kind)
    rtau = _rtau(args, criterion.criterion_kind.value == "sufficient")
    c = ClassParams(_alpha(args.alpha, args.degrees), args.beta, kind)
    p = PascalParams(args.m, args.q)
    closed = closed_form(criterion, p, c, rtau)
    rows = [OutputRow.from_verdict(p.m, p.q, c, criterion, closed)]
    status = EXIT_OK
    if args.verify:
        numeric = numeric_oracle(criterion, p, c, rtau=rtau)
        rows.append(OutputRow.from_verdict(p.m, p.q, c, criterion, numeric))
        rep = equivalence_report(closed.lhs, (numeric.lhs, numeric.error_bound), VERIFY_REL_TOL)
        if not rep.passed or numeric.in_class != closed.in_class:
            print(
                f"oracle disagreement: closed {closed.lhs!r} vs numeric {numeric.lhs!r} "
                f"(allowed {rep.allowed:.3g})",
                file=sys.stderr,
            )
            status = EXIT_ORACLE
    write_table([r.as_dict() for r in rows], ROW_FIELDS, args.format)
    return status


_EVALUATORS = {
    "phi": eval_phi,
    "psi": eval_psi,
    "phi-deriv": eval_phi_deriv,
    "g": eval_G,
    "g-deriv": eval_G_deriv,
}
EVAL_FIELDS = ("series", "m", "q", "z_re", "z_im", "value_re", "value_im")


def cmd_eval(args) -> int:
    p = PascalParams(args.m, args.q)
    z = complex(args.z_re, args.z_im)
    rows = []
    for name in args.series.split(","):
        if name not in _EVALUATORS:
            raise UsageError(f"unknown series {name!r}; choose from {', '.join(_EVALUATORS)}")
        v = _EVALUATORS[name](z, p, args.tol)
        rows.append(dict(series=name, m=p.m, q=p.q, z_re=z.real, z_im=z.imag, value_re=v.real, value_im=v.imag))
    write_table(rows, EVAL_FIELDS, args.format)
    return EXIT_OK


BOUNDARY_FIELDS = (
    "m", "alpha", "beta", "criterion", "criterion_kind", "q_star", "bracket_width", "status", "evaluations", "certified",
)


def cmd_boundary(args) -> int:
    criterion = Criterion(args.criterion)
    rtau = _rtau(args, criterion.criterion_kind.value == "sufficient")
    c = ClassParams(_alpha(args.alpha, args.degrees), args.beta, criterion.kind)
    res = q_star(args.m, c, criterion, args.tol, rtau, verify=args.verify)
    certified = "" if res.certificate is None else res.certificate.certified
    row = dict(
        m=res.m, alpha=res.alpha, beta=res.beta, criterion=criterion.value,
        criterion_kind=criterion.criterion_kind.value, q_star=res.q_star, bracket_width=res.bracket_width,
        status=res.status.value, evaluations=res.evaluations, certified=certified,
    )
    write_table([row], BOUNDARY_FIELDS, args.format)
    if res.certificate is not None and not res.certificate.certified:
        print("numeric oracle does not confirm the threshold bracket", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def _criteria(text: str) -> list[Criterion]:
    try:
        return [Criterion(k.strip()) for k in text.split(",") if k.strip()]
    except ValueError:
        raise UsageError(f"unknown criterion in {text!r}; choose from {', '.join(k.value for k in Criterion)}") from None


def cmd_table(args) -> int:
    criteria = _criteria(args.criteria)
    needs_rtau = any(k.criterion_kind.value == "sufficient" for k in criteria)
    rtau = _rtau(args, needs_rtau)
    alphas = [_alpha(a, args.degrees) for a in _float_list(args.alpha)]
    classes = [ClassParams(a, b) for a in alphas for b in _float_list(args.beta)]
    rows = sweep(_int_list(args.m), _float_list(args.q), classes, criteria, rtau)
    for r in rows:
        if r.verdict == "error":
            print(f"m={r.m} q={r.q} {r.criterion}: {r.message}", file=sys.stderr)
    write_table([r.as_dict() for r in rows], ROW_FIELDS, args.format)
    return EXIT_OK


VERIFY_FIELDS = ("suite", "checks", "failures", "max_rel_error", "status")


def cmd_verify(args) -> int:
    suites = run_all()
    rows = [
        dict(suite=s.name, checks=s.checks, failures=s.failures, max_rel_error=s.max_rel_error,
             status="pass" if s.passed else "fail")
        for s in suites
    ]
    write_table(rows, VERIFY_FIELDS, args.format)
    for s in suites:
        for note in s.notes:
            print(f"{s.name}: {note}", file=sys.stderr)
    return EXIT_OK if all(s.passed for s in suites) else EXIT_ORACLE


def cmd_pmf(args) -> int:
    p = PascalParams(args.m, args.q)
    ks = [args.k] if args.k is not None else list(range(args.kmax + 1))
    write_table([dict(k=k, pmf=pmf(k, p)) for k in ks], ("k", "pmf"), args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pascalspiral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=fn)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        return p

    p = add("check", cmd_check, "closed-form membership verdict for Phi, G or the operator image")
    p.add_argument("--target", choices=("phi", "g", "operator"), required=True)
    p.add_argument("--class", dest="class_kind", choices=("tsp", "uct"), required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    _add_class_args(p)
    _add_rtau_args(p)
    p.add_argument("--verify", action="store_true", help="re-run the certified coefficient sum")

    p = add("eval", cmd_eval, "evaluate the series at a point of the disk")
    p.add_argument("--series", default="phi", help="comma list of " + ",".join(_EVALUATORS))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--z-re", type=float, required=True)
    p.add_argument("--z-im", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-14)

    p = add("boundary", cmd_boundary, "largest q for which a criterion holds")
    p.add_argument("--criterion", choices=[k.value for k in Criterion], required=True)
    p.add_argument("--m", type=int, required=True)
    _add_class_args(p)
    _add_rtau_args(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--verify", action="store_true", help="certify the bracket with coefficient sums")

    p = add("table", cmd_table, "sweep criteria over parameter grids")
    p.add_argument("--m", default="1", help="comma list of integers")
    p.add_argument("--q", default="0.05:0.9:0.05", help="comma list or start:stop:step")
    _add_class_args(p, multi=True)
    _add_rtau_args(p)
    p.add_argument("--criteria", default="thm1,thm2,thm5,thm6")

    add("verify", cmd_verify, "run the identity and closed-vs-numeric equivalence suites")

    p = add("pmf", cmd_pmf, "Pascal distribution probabilities")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int)
    group.add_argument("--kmax", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pascalspiral: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PreconditionError) as exc:
        print(f"pascalspiral: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except MonotonicityError as exc:
        print(f"pascalspiral: internal assumption failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
