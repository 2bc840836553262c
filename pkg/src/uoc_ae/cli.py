"""Command-line front end: ``price``, ``table`` and ``check``.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass, replace
from typing import Optional

from .cases import CASES
from .checks import SUITES
from .expansion import ConvergenceWarning, price_ae
from .montecarlo import SCHEMES, McConfig, simulate
from .params import ENDPOINT_MAPS, ConfigError, DomainError, PriceResult
from .runspec import OUTPUTS, RunSpec, read_config, spec_from_mapping

CSV_FIELDS = ("case", "strike", "method", "value", "zeroth", "correction", "stderr",
              "rel_err_pct")


@dataclass
class Row:
    case: Optional[int]
    strike: float
    method: str
    value: float
    zeroth: Optional[float]
    correction: Optional[float]
    stderr: Optional[float]
    rel_err_pct: Optional[float] = None

    def as_dict(self):
        return {f: getattr(self, f) for f in CSV_FIELDS}


class NumericalFailure(RuntimeError):
    pass


def run_method(spec: RunSpec, method: str) -> PriceResult:
    if method == "mc":
        est = simulate(spec.model, spec.option, spec.mc, workers=spec.workers)
        return PriceResult(est.price, None, None, est.stderr, "mc")
    return price_ae(spec.model, spec.option, 0 if method == "ae0" else 1, spec.quad)


def price_rows(spec: RunSpec, case=None) -> list:
    """Price ``spec`` with each of its methods.

    Expansion rows get a relative error against the simulation row when one
    was requested.  A quadrature convergence warning becomes
    :class:`NumericalFailure` after all rows are computed.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        results = {m: run_method(spec, m) for m in spec.methods}
    rows = [Row(case, spec.option.K, m, r.value, r.zeroth, r.correction, r.stderr)
            for m, r in results.items()]
    if "mc" in results and results["mc"].value > 0:
        ref = results["mc"].value
        for row in rows:
            if row.method != "mc":
                row.rel_err_pct = 100.0 * (row.value - ref) / ref
    failures = [str(w.message) for w in caught if issubclass(w.category, ConvergenceWarning)]
    if failures:
        raise NumericalFailure("; ".join(failures), rows)
    return rows


def _num(x, fmt):
    return "-" if x is None else format(x, fmt)


def render_rows(rows, output: str) -> str:
    if output == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v)
                        for k, v in r.as_dict().items()})
        return buf.getvalue()
    if output == "json-lines":
        return "".join(json.dumps(r.as_dict()) + "\n" for r in rows)
    head = f"{'method':<7}{'strike':>9}{'value':>11}{'zeroth':>11}{'correction':>12}{'stderr':>10}{'rel err':>10}"
    lines = [head, "-" * len(head)]
    for r in rows:
        err = "-" if r.rel_err_pct is None else f"{r.rel_err_pct:+.2f}%"
        lines.append(f"{r.method:<7}{r.strike:>9g}{r.value:>11.3f}{_num(r.zeroth, '.3f'):>11}"
                     f"{_num(r.correction, '.3f'):>12}{_num(r.stderr, '.4f'):>10}{err:>10}")
    return "\n".join(lines) + "\n"


def render_case_table(case_id: int, rows) -> str:
    """One case in the layout: strike | MC | AE first (err) | AE zeroth (err)."""
    case = CASES[case_id]
    by = {(r.strike, r.method): r for r in rows}
    has_mc = any(r.method == "mc" for r in rows)
    title = (f"Case {case_id}: S={case.S:g} sigma={case.sigma:g} c={case.c:g} q={case.q:g} "
             f"eps*nu={case.eps_nu:g} rho={case.rho:g} eps*lambda={case.eps_lam:g} "
             f"theta={case.theta:g} H={case.H:g} T={case.T:g}")
    cols = (["MC"] if has_mc else []) + ["AE first", "AE zeroth"]
    lines = [title, f"{'Strike':<8}" + "".join(f"{c:>20}" for c in cols)]
    for K in case.strikes:
        cells = []
        if has_mc:
            mc = by[(K, "mc")]
            cells.append(f"{mc.value:.3f} ±{mc.stderr:.3f}")
        for m in ("ae1", "ae0"):
            r = by[(K, m)]
            cell = f"{r.value:.3f}"
            if r.rel_err_pct is not None:
                cell += f" ({r.rel_err_pct:+.2f}%)"
            cells.append(cell)
        lines.append(f"{K:<8g}" + "".join(f"{c:>20}" for c in cells))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- parsing

_FLAG_KEYS = (
    "spot", "sigma", "rate", "div", "eps", "eps-nu", "eps-lambda", "theta", "rho",
    "strike", "barrier", "maturity", "method", "paths", "steps", "seed", "quad-time",
    "quad-space", "quad-map", "output", "scheme", "workers",
)


def _add_mc_flags(p):
    p.add_argument("--paths", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--bridge", action="store_true", default=None,
                   help="Brownian-bridge continuous-monitoring correction")
    p.add_argument("--workers", type=int)


def _add_quad_flags(p):
    p.add_argument("--quad-time", type=int)
    p.add_argument("--quad-space", type=int)
    p.add_argument("--quad-map", choices=ENDPOINT_MAPS)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uoc-ae",
        description="Up-and-out call pricing under stochastic volatility by asymptotic "
                    "expansion, with a Monte Carlo benchmark.")
    sub = parser.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("price", help="price one contract")
    pp.add_argument("--config", help="key = value configuration file; flags override it")
    for name in ("spot", "sigma", "rate", "div", "eps", "eps-nu", "eps-lambda", "theta",
                 "rho", "strike", "barrier", "maturity"):
        pp.add_argument(f"--{name}", type=float)
    pp.add_argument("--method", help="comma-separated subset of ae0,ae1,mc")
    pp.add_argument("--output", choices=OUTPUTS)
    _add_mc_flags(pp)
    _add_quad_flags(pp)

    pt = sub.add_parser("table", help="reproduce the six benchmark cases")
    pt.add_argument("--case", type=int, nargs="+", choices=sorted(CASES), default=sorted(CASES))
    pt.add_argument("--mc", action="store_true", help="add the Monte Carlo column")
    pt.add_argument("--output", choices=OUTPUTS, default="text-table")
    _add_mc_flags(pt)
    _add_quad_flags(pt)

    pc = sub.add_parser("check", help="run certification suites")
    pc.add_argument("what", nargs="*", metavar="{" + ",".join(sorted(SUITES)) + ",all}",
                    help="suites to run (default: all)")
    pc.add_argument("--printed", action="store_true",
                    help="certify the printed Greek formulas instead of the engine's")
    return parser


def _flag_values(args) -> dict:
    out = {}
    for key in _FLAG_KEYS:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            out[key] = val
    if getattr(args, "bridge", None):
        out["bridge"] = True
    return out


def spec_from_args(args) -> RunSpec:
    values = read_config(args.config) if getattr(args, "config", None) else {}
    flags = _flag_values(args)
    # a product flag supersedes the split value from the file
    if "eps-nu" in flags:
        values.pop("nu", None)
    if "eps-lambda" in flags:
        values.pop("lambda", None)
    values.update(flags)
    return spec_from_mapping(values)


def cmd_price(args, out) -> int:
    spec = spec_from_args(args)
    try:
        rows = price_rows(spec)
        code = 0
    except NumericalFailure as exc:
        msg, rows = exc.args
        print(f"error: {msg}", file=sys.stderr)
        code = 1
    out.write(render_rows(rows, spec.output))
    return code


def cmd_table(args, out) -> int:
    methods = ("mc", "ae1", "ae0") if args.mc else ("ae1", "ae0")
    code = 0
    all_rows = []
    md = McConfig()
    mc = McConfig(args.paths or md.n_paths, args.steps or md.n_steps,
                  md.seed if args.seed is None else args.seed,
                  args.scheme or md.scheme, bool(args.bridge))
    for cid in args.case:
        case = CASES[cid]
        case_rows = []
        for K in case.strikes:
            base = spec_from_mapping({"strike": K, "barrier": case.H, "method": ",".join(methods),
                                      **{k: v for k, v in _flag_values(args).items()
                                         if k.startswith("quad")}})
            spec = replace(base, model=case.model(), option=case.option(K), mc=mc,
                           workers=args.workers or 1)
            try:
                rows = price_rows(spec, case=cid)
            except NumericalFailure as exc:
                msg, rows = exc.args
                print(f"error: case {cid} K={K:g}: {msg}", file=sys.stderr)
                code = 1
            case_rows += rows
        all_rows += case_rows
        if args.output == "text-table":
            out.write(render_case_table(cid, case_rows) + "\n")
    if args.output != "text-table":
        out.write(render_rows(all_rows, args.output))
    return code


def cmd_check(args, out) -> int:
    unknown = set(args.what) - set(SUITES) - {"all"}
    if unknown:
        raise ConfigError(f"check: unknown suite(s) {sorted(unknown)}")
    names = sorted(SUITES) if not args.what or "all" in args.what else args.what
    ok = True
    for name in names:
        lines = SUITES[name](printed=True) if (name == "greeks" and args.printed) else SUITES[name]()
        for line in lines:
            out.write(f"[{name}] {line.render()}\n")
            ok &= line.passed
    out.write("all checks passed\n" if ok else "some checks FAILED\n")
    return 0 if ok else 1


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"price": cmd_price, "table": cmd_table, "check": cmd_check}[args.command]
    try:
        return handler(args, out)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
