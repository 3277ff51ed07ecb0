"""Command line front-end.

Subcommands: info, exponent, simulate, verify, moderate.  Output is CSV
(RFC 4180, CRLF rows) or JSON; rows are byte-identical across runs for the
same inputs.  A timestamp comment precedes the CSV header unless
--no-header is given, which drops both.  Exit codes: 0 success, 1 invalid
input, 2 solver failure, 3 numerical violation of a proved bound.

SOFTCOVER_PURE_NUMPY=1 forces the numpy backend; SOFTCOVER_THREADS caps the
numba thread pool.  Neither changes any computed value.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone

from . import kernels
from .codebooks import exact_expected_td, mc_expected_td
from .errors import BoundViolationError, SoftcoverError, SolverError, ValidationError
from .exponents import (
    achievability_exponent_cc,
    achievability_exponent_iid,
    bounds_at_m,
    moderate_deviation_scan,
    nshot_bounds,
    sc_exponent_cc,
    sc_exponent_iid,
)
from .info import (
    SolverConfig,
    petz_down_augustin_info,
    petz_down_renyi_info,
    sandwiched_augustin_info,
    sandwiched_renyi_info,
)
from .modelfile import load_model
from .sources import mutual_information, variances
from .verify import SUITES, run_suites


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2, which is the solver code
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(float(value))
    return str(value)


def _emit(rows, fmt: str, no_header: bool, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        doc = {"rows": rows}
        if not no_header:
            doc["generated"] = datetime.now(timezone.utc).isoformat()
        json.dump(doc, out, indent=2, default=_cell)
        out.write("\n")
        return
    keys = list(rows[0].keys()) if rows else []

    def line(cells):
        quoted = []
        for c in cells:
            if any(ch in c for ch in ",\"\r\n"):
                c = '"' + c.replace('"', '""') + '"'
            quoted.append(c)
        out.write(",".join(quoted) + "\r\n")

    if not no_header:
        out.write(f"# generated {datetime.now(timezone.utc).isoformat()}\r\n")
        line(keys)
    for row in rows:
        line([_cell(v) for v in row.values()])


def _add_common(p: argparse.ArgumentParser, model: bool = True) -> None:
    if model:
        p.add_argument("--model", required=True, help="path to a JSON model file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-header", action="store_true", help="suppress the CSV header and timestamp")
    p.add_argument("--seed", type=int, default=0)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="softcover",
        description="Soft-covering information quantities, exponents, and simulations.",
        epilog="Environment: SOFTCOVER_PURE_NUMPY forces the numpy backend; "
        "SOFTCOVER_THREADS caps numba threads.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="information quantities of a model")
    _add_common(p)
    p.add_argument(
        "--alpha",
        required=True,
        help="comma-separated orders in (0, 2] excluding 1; starred cells are nan below 1",
    )

    p = sub.add_parser("exponent", help="covering exponents at a rate")
    _add_common(p)
    p.add_argument("--rate", type=float, required=True, help="rate in nats")
    p.add_argument("--n", type=int, default=None, help="also report finite-n bounds at this n")

    p = sub.add_parser("simulate", help="expected covering error of random codebooks")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--kind", choices=("iid", "cc"), default="iid")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--exact", action="store_true", help="full enumeration instead of Monte Carlo")

    p = sub.add_parser("verify", help="run the verification suites")
    _add_common(p, model=False)
    p.add_argument("--suite", action="append", choices=tuple(SUITES) + ("all",), default=None)

    p = sub.add_parser("moderate", help="moderate-deviation scan above the mutual information")
    _add_common(p)
    p.add_argument("--t", type=float, required=True, help="rate-approach power in (0, 1/2)")
    p.add_argument("--c", type=float, required=True, help="rate-approach coefficient")
    p.add_argument("--n-list", required=True, help="comma-separated block lengths")
    return parser


def _parse_alphas(text: str) -> list:
    try:
        alphas = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as err:
        raise ValidationError(f"--alpha must be comma-separated reals: {err}") from err
    if not alphas:
        raise ValidationError("--alpha names no orders")
    for a in alphas:
        if not 0.0 < a <= 2.0 or a == 1.0:
            raise ValidationError(f"alpha must lie in (0, 2] excluding 1, got {a!r}")
    return alphas


def _cmd_info(args) -> list:
    # One row per alpha (starred cells are nan below 1, outside their
    # domain), then a summary row carrying I, V, V-breve.  An unconverged
    # solve still emits its row, flagged, and the command exits 2.
    cq = load_model(args.model)
    cfg = SolverConfig(seed=args.seed)
    blank = {
        "alpha": math.nan,
        "i_star": math.nan,
        "i_star_breve": math.nan,
        "i_down": math.nan,
        "i_down_breve": math.nan,
        "mutual_information": math.nan,
        "v": math.nan,
        "v_breve": math.nan,
        "converged": True,
    }
    rows = []
    for a in _parse_alphas(args.alpha):
        row = dict(blank, alpha=a)
        if a > 1.0:
            r_star = sandwiched_renyi_info(cq, a, cfg)
            r_breve = sandwiched_augustin_info(cq, a, cfg)
            row["i_star"] = r_star.value
            row["i_star_breve"] = r_breve.value
            row["converged"] = r_star.converged and r_breve.converged
        row["i_down"] = petz_down_renyi_info(cq, a).value
        row["i_down_breve"] = petz_down_augustin_info(cq, a).value
        rows.append(row)
    v, v_breve = variances(cq)
    rows.append(dict(blank, mutual_information=mutual_information(cq), v=v, v_breve=v_breve))
    bad = [row["alpha"] for row in rows if not row["converged"]]
    if bad:
        exc = SolverError(
            "solver did not converge at alpha " + ", ".join(repr(b) for b in bad) + "; rows flagged"
        )
        exc.rows = rows
        raise exc
    return rows


def _cmd_exponent(args) -> list:
    cq = load_model(args.model)
    cfg = SolverConfig(seed=args.seed)
    rate = args.rate
    i_val = mutual_information(cq)
    v, v_breve = variances(cq)
    e_iid, a_iid = achievability_exponent_iid(cq, rate, cfg)
    e_cc, a_cc = achievability_exponent_cc(cq, rate, cfg)
    s_iid, b_iid = sc_exponent_iid(cq, rate)
    s_cc, b_cc = sc_exponent_cc(cq, rate)
    row = {
        "rate": rate,
        "mutual_information": i_val,
        "v": v,
        "v_breve": v_breve,
        "ach_exp_iid": e_iid,
        "alpha_ach_iid": a_iid,
        "ach_exp_cc": e_cc,
        "alpha_ach_cc": a_cc,
        "sc_exp_iid": s_iid,
        "alpha_sc_iid": b_iid,
        "sc_exp_cc": s_cc,
        "alpha_sc_cc": b_cc,
    }
    if args.n is None:
        return [row]
    rec = nshot_bounds(cq, args.n, rate, cfg)
    row.update(rec.fields())
    return [row]


def _cmd_simulate(args) -> list:
    cq = load_model(args.model)
    cfg = SolverConfig(seed=args.seed)
    if args.exact:
        est = exact_expected_td(cq, args.n, args.M, args.kind)
    else:
        est = mc_expected_td(cq, args.n, args.M, args.kind, seed=args.seed, samples=args.samples)
    bounds = bounds_at_m(cq, args.n, args.M, args.kind, cfg)
    slack = 1e-10 if est.exact else 4.0 * est.half_width_95 + 1e-10
    row = {
        "kind": args.kind,
        "n": args.n,
        "M": args.M,
        "mean": est.mean,
        "half_width_95": est.half_width_95,
        "samples": est.samples,
        "exact": est.exact,
        "ach_bound": bounds["ach"],
        "sc_bound": bounds["sc"],
        "backend": kernels.backend_name(),
    }
    message = None
    if est.mean > bounds["ach"] + slack:
        message = f"measured error {est.mean!r} exceeds the achievability bound {bounds['ach']!r}"
    elif est.mean < bounds["sc"] - slack:
        message = f"measured error {est.mean!r} falls below the strong-converse bound {bounds['sc']!r}"
    if message is not None:
        exc = BoundViolationError(message)
        exc.rows = [row]
        raise exc
    return [row]


def _cmd_verify(args) -> list:
    rows = run_suites(args.suite, seed=args.seed)
    out = [r.fields() for r in rows]
    failed = [r for r in rows if not r.passed]
    if failed:
        worst = failed[0]
        exc = BoundViolationError(
            f"{len(failed)} verification check(s) failed, first: {worst.suite}/{worst.check} "
            f"lhs={worst.lhs!r} rhs={worst.rhs!r}",
        )
        exc.rows = out
        raise exc
    return out


def _cmd_moderate(args) -> list:
    cq = load_model(args.model)
    cfg = SolverConfig(seed=args.seed)
    try:
        ns = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    except ValueError as err:
        raise ValidationError(f"--n-list must be comma-separated integers: {err}") from err
    rows = moderate_deviation_scan(cq, args.t, args.c, ns, cfg)
    return [r.fields() for r in rows]


_COMMANDS = {
    "info": _cmd_info,
    "exponent": _cmd_exponent,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "moderate": _cmd_moderate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except ValidationError as err:
        print(f"softcover: error: {err}", file=sys.stderr)
        return err.exit_code
    try:
        rows = _COMMANDS[args.command](args)
    except SoftcoverError as err:
        print(f"softcover: error: {err}", file=sys.stderr)
        extra = getattr(err, "rows", None)
        if extra:
            _emit(extra, args.format, args.no_header)
        return getattr(err, "exit_code", 1)
    _emit(rows, args.format, args.no_header)
    return 0


if __name__ == "__main__":
    sys.exit(main())
