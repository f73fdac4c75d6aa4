"""Command-line front end: one binary, one subcommand per experiment.

Exit codes: 0 success, 1 an invariant check or acceptance item failed,
2 usage error (unknown subcommand or bad parameters).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import acceptance, addcomb, class_groups, cm_analytics, ec_isogeny, honda_tate
from .finite_field import FieldError, field_of_order
from .harness import isogeny_class_sets, random_traces

WORKERS_ENV = "ISOGENY_CENSUS_WORKERS"

# anchor labels name the statement each experiment exercises
ANCHORS = {
    "class-number": "class number of an imaginary quadratic order",
    "isogeny-size": "isogeny class size as a sum of class numbers",
    "isogeny-members": "isogeny class size as a sum of class numbers",
    "curve-census": "isogeny class size as a sum of class numbers",
    "supersingular": "supersingular j-invariants",
    "weil-census": "Weil polynomial census and Newton polygons",
    "weil-scaling": "Weil polynomial census and Newton polygons",
    "cm-density": "positivity of CM types on Frobenius powers",
    "cm-independence": "multiplicative independence of Frobenius angles",
    "disc-report": "discriminants of Frobenius power orders",
    "sumprod": "sum-product estimate over finite fields",
    "ruzsa-sweep": "Ruzsa triangle inequality",
    "dotprod-check": "dot-product avoidance bound",
    "build-r": "hypersurface meeting every ordinary isogeny class",
    "hypersurface-search": "hypersurface meeting every ordinary isogeny class",
    "acceptance": "artifact acceptance suite",
}


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    params: dict
    seed: int = 0
    output_format: str = "json"
    workers: int = 1


@dataclass
class ReportRecord:
    experiment: str
    anchor: str
    inputs: dict
    outputs: dict
    verdict: str | None = None
    wall_time: float | None = None
    table: list | None = field(default=None, repr=False)  # rows for CSV output

    def as_dict(self, timing=False):
        out = {"experiment": self.experiment, "anchor": self.anchor,
               "inputs": self.inputs, "outputs": self.outputs}
        if self.verdict is not None:
            out["verdict"] = self.verdict
        if timing:
            out["wall_time"] = self.wall_time
        return out


# --- parsing helpers ---------------------------------------------------------

def _int_list(text):
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, int) and abs(x) > 2**53:
        return str(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return str(x)
    return x


def _record(args, outputs, verdict=None, table=None):
    inputs = {k: v for k, v in vars(args).items()
              if k not in ("func", "command", "format", "out", "timing", "workers")}
    return ReportRecord(args.command, ANCHORS[args.command], _jsonable(inputs),
                        _jsonable(outputs), verdict, table=table)


def _parse_set(F, text, seed):
    if text.startswith("random:"):
        try:
            size, s = (int(t) for t in text[len("random:"):].split(","))
        except ValueError:
            raise UsageError("--set random:<size>,<seed>")
        if not 0 < size <= F.q:
            raise UsageError(f"random set size must be in [1, {F.q}]")
        rng = np.random.default_rng(s)
        return addcomb.GroundSet(F, rng.choice(F.q, size=size, replace=False))
    vals = _int_list(text)
    if any(v < 0 or v >= F.q for v in vals):
        raise UsageError(f"set elements are field indices in [0, {F.q})")
    return addcomb.GroundSet(F, vals)


def _weil_record(args):
    try:
        return honda_tate.WeilPolynomialRecord.from_coeffs(args.poly, args.q)
    except ValueError as e:
        raise UsageError(str(e))


# --- subcommands ---------------------------------------------------------------

def cmd_class_number(args, cfg):
    if args.disc is not None:
        if args.fundamental is not None or args.conductor is not None:
            raise UsageError("give --disc or --fundamental/--conductor, not both")
        f, D_K = class_groups.fundamental_decomposition(args.disc)
        disc = args.disc
    else:
        if args.fundamental is None:
            raise UsageError("need --disc or --fundamental")
        D_K, f = args.fundamental, args.conductor or 1
        if not class_groups.is_fundamental(D_K) or D_K >= 0:
            raise UsageError(f"{D_K} is not a negative fundamental discriminant")
        if f < 1:
            raise UsageError("conductor must be >= 1")
        disc = f * f * D_K
    h = class_groups.class_number_order(D_K, f)
    out = {"disc": disc, "h": h, "method": "conductor formula", "D_K": D_K, "f": f}
    if args.verbose:
        # the Euler factor without 1/p, for comparison only
        out["h_without_1_over_p"] = str(class_groups.class_number_order_as_printed(D_K, f))
    verdict = None
    if args.check:
        hf = class_groups.class_number_forms(disc)
        out["h_forms"] = hf
        verdict = "pass" if hf == h else "fail"
    return _record(args, out, verdict), str(h)


def cmd_isogeny_size(args, cfg):
    s = ec_isogeny.isogeny_class_summary(args.trace, args.q, args.n)
    return _record(args, s.as_dict()), str(s.size)


def cmd_isogeny_members(args, cfg):
    s = ec_isogeny.isogeny_class_summary(args.trace, args.q, 1, members=True)
    out = s.as_dict()
    return _record(args, out), None


def cmd_curve_census(args, cfg):
    rows = ec_isogeny.curve_census(args.q)
    by_trace = ec_isogeny.enumerate_curves_by_trace(args.q)
    table = [["A", "B", "j", "trace"]] + [list(r) for r in rows]
    return _record(args, {"classes": len(rows), "by_trace": by_trace}, table=table), None


def cmd_supersingular(args, cfg):
    js = ec_isogeny.supersingular_j_invariants(args.p, args.method)
    out = {"p": args.p, "method": args.method, "j": sorted(int(j) for j in js)}
    verdict = None
    if args.cross_check:
        other = "legendre" if args.method == "trace" else "trace"
        agree = ec_isogeny.supersingular_j_invariants(args.p, other) == js
        verdict = "pass" if agree else "fail"
    return _record(args, out, verdict), None


def cmd_weil_census(args, cfg):
    if args.g not in (1, 2):
        raise UsageError("only g = 1 and g = 2 are supported")
    recs = honda_tate.enumerate_weil_polynomials(args.g, args.q, args.ordinary_only)
    d = 2 * args.g
    table = [[f"c{i}" for i in range(d + 1)] + ["slopes", "ordinary"]]
    for r in recs:
        table.append(list(r.coeffs) + [" ".join(str(s) for s in r.newton_slopes), int(r.ordinary)])
    out = {"g": args.g, "q": args.q, "count": len(recs),
           "ordinary": sum(r.ordinary for r in recs),
           "polynomials": [list(r.coeffs) for r in recs]}
    return _record(args, out, table=table), None


def cmd_weil_scaling(args, cfg):
    if args.g not in (1, 2):
        raise UsageError("only g = 1 and g = 2 are supported")
    r = honda_tate.census_scaling(args.g, args.q)
    verdict = "pass" if abs(r.slope - r.target) <= 0.15 else "fail"
    return _record(args, r.as_dict(), verdict), None


def cmd_cm_density(args, cfg):
    rec = _weil_record(args)
    prof = cm_analytics.weil_root_profile(rec, args.precision)
    rep = cm_analytics.positivity_density(prof, args.nmax)
    out = rep.as_dict()
    out["angles"] = [float(t) for t in prof.angles]
    verdict = None
    if not rep.degenerate:
        verdict = "pass" if abs(rep.density - rep.target) <= 0.02 else "fail"
    return _record(args, out, verdict), None


def cmd_cm_independence(args, cfg):
    rec = _weil_record(args)
    prof = cm_analytics.weil_root_profile(rec, args.precision)
    v = cm_analytics.multiplicative_independence_heuristic(prof, args.bound, args.tol)
    out = {"label": v.label, "witness": v.witness, "residual": v.residual,
           "bound": v.bound, "tolerance": v.tolerance,
           "angles": [float(t) for t in prof.angles]}
    return _record(args, out), None


def cmd_disc_report(args, cfg):
    rec = _weil_record(args)
    prof = cm_analytics.weil_root_profile(rec, 40)
    reports = []
    for n in range(1, args.n + 1):
        try:
            r = cm_analytics.discriminant_report(rec, n, prof)
        except cm_analytics.DegenerateError as e:
            reports.append({"n": n, "degenerate": str(e)})
            continue
        d = r.as_dict()
        d["relerr_Rprime"] = r.relerr_Rprime
        d["relerr_Rplus"] = r.relerr_Rplus
        reports.append(d)
    ok = all("degenerate" in d or (d["unit_circle_factor"] <= d["unit_circle_bound"]
                                   and d["relerr_Rprime"] <= 1e-6 and d["relerr_Rplus"] <= 1e-6)
             for d in reports)
    return _record(args, {"reports": reports}, "pass" if ok else "fail"), None


def cmd_sumprod(args, cfg):
    F = field_of_order(args.q)
    A = _parse_set(F, args.set, cfg.seed)
    st = addcomb.sum_product_stats(A, args.slack)
    out = {"set": A.tolist(), "size": st.size, "sumset": st.sumset,
           "productset": st.productset, "shifted_productset": st.shifted_productset,
           "exponents": list(st.exponents), "max_exponent": st.max_exponent,
           "threshold": st.threshold, "meets_threshold": st.meets_threshold}
    table = [["size", "sumset", "productset", "shifted_productset", "max_exponent"],
             [st.size, st.sumset, st.productset, st.shifted_productset, st.max_exponent]]
    return _record(args, out, table=table), None


def _sweep_output(res):
    out = {"trials": res.trials, "checks": res.checks, "violations": len(res.violations),
           "first_violations": res.violations[:5]}
    table = [["trials", "checks", "violations"], [res.trials, res.checks, len(res.violations)]]
    return out, table, ("pass" if res.ok else "fail")


def cmd_ruzsa_sweep(args, cfg):
    res = addcomb.ruzsa_sweep(args.trials, cfg.seed, args.family, args.form)
    out, table, verdict = _sweep_output(res)
    return _record(args, out, verdict, table), None


def cmd_dotprod_check(args, cfg):
    if args.trials == 0:
        res = addcomb.dot_product_exhaustive(args.q, args.n)
    else:
        res = addcomb.dot_product_sweep(args.trials, cfg.seed, qs=(args.q,), ns=(args.n,))
    out, table, verdict = _sweep_output(res)
    return _record(args, out, verdict, table), None


def cmd_build_r(args, cfg):
    return _record(args, addcomb.build_hypersurface(args.N).describe()), None


def _parse_classes(F, text, arity, rng):
    if text == "random":
        traces = random_traces(F.q, arity, rng)
        return isogeny_class_sets(F.q, traces), traces
    if text.startswith("traces:"):
        traces = _int_list(text[len("traces:"):])
        if len(traces) != arity:
            raise UsageError(f"need {arity} traces")
        return isogeny_class_sets(F.q, traces), traces
    if text.startswith("sets:"):
        parts = text[len("sets:"):].split(";")
        if len(parts) != arity:
            raise UsageError(f"need {arity} ';'-separated sets")
        return [_parse_set(F, p, None) for p in parts], None
    raise UsageError("--classes is random, traces:a1,...,a6N or sets:s1;s2;...")


def cmd_hypersurface_search(args, cfg):
    F = field_of_order(args.q)
    H = addcomb.build_hypersurface(args.N)
    rng = np.random.default_rng(cfg.seed)
    classes, traces = _parse_classes(F, args.classes, H.arity, rng)
    res = addcomb.hypersurface_search(classes, H, args.budget, args.mode, cfg.seed, cfg.workers)
    out = res.as_dict()
    out["traces"] = traces
    out["class_sizes"] = [len(c) for c in classes]
    verdict = None
    if res.found:
        value, _ = addcomb.evaluate_R(H, res.witness, early_exit=False)
        verdict = "pass" if value.is_zero() else "fail"
    return _record(args, out, verdict), None


def cmd_acceptance(args, cfg):
    results = acceptance.acceptance_suite(args.filter, emit=None, inject=args.inject)
    lines = [r.line(timing=args.timing) for r in results]
    if not results:
        raise UsageError(f"no criterion matches filter {args.filter!r}")
    out = {"criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                         "measured": r.measured, "tolerance": r.tolerance} for r in results],
           "failed": [r.number for r in results if not r.passed]}
    verdict = "pass" if all(r.passed for r in results) else "fail"
    return _record(args, out, verdict), "\n".join(lines)


# --- parser ------------------------------------------------------------------

def build_parser():
    glob = argparse.ArgumentParser(add_help=False)
    glob.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    glob.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    glob.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    glob.add_argument("--out", default=argparse.SUPPRESS, help="write the report here")
    glob.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                      help="include wall time (breaks byte-identical output)")

    parser = argparse.ArgumentParser(prog="isogeny-census", parents=[glob],
                                     description="Isogeny-class census experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, parents=[glob], help=help)
        p.set_defaults(func=func)
        return p

    p = add("class-number", cmd_class_number, "class number of an imaginary quadratic order")
    p.add_argument("--disc", type=int)
    p.add_argument("--fundamental", type=int)
    p.add_argument("--conductor", type=int)
    p.add_argument("--check", action="store_true", help="cross-check against reduced forms")
    p.add_argument("--verbose", action="store_true",
                   help="also report the Euler-factor variant without 1/p")

    p = add("isogeny-size", cmd_isogeny_size, "ordinary isogeny class size over F_{q^n}")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--trace", type=int, required=True)
    p.add_argument("--n", type=int, default=1)

    p = add("isogeny-members", cmd_isogeny_members, "j-invariants in an isogeny class")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--trace", type=int, required=True)

    p = add("curve-census", cmd_curve_census, "brute-force curve census over F_q")
    p.add_argument("--q", type=int, required=True)

    p = add("supersingular", cmd_supersingular, "supersingular j-invariants for F_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--method", choices=("trace", "legendre"), default="trace")
    p.add_argument("--cross-check", action="store_true")

    p = add("weil-census", cmd_weil_census, "all Weil q-polynomials of degree 2g")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--ordinary-only", action="store_true")

    p = add("weil-scaling", cmd_weil_scaling, "census growth exponent")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--q", type=_int_list, required=True)

    for name, func, help in (("cm-density", cmd_cm_density, "positivity density"),
                             ("cm-independence", cmd_cm_independence, "angle relation scan"),
                             ("disc-report", cmd_disc_report, "discriminants of Frobenius powers")):
        p = add(name, func, help)
        p.add_argument("--poly", type=_int_list, required=True,
                       help="coefficients, leading first, e.g. 1,-1,5")
        p.add_argument("--q", type=int, required=True)
        if name == "cm-density":
            p.add_argument("--nmax", type=int, default=100_000)
        if name == "cm-independence":
            p.add_argument("--bound", type=int, default=20)
            p.add_argument("--tol", type=float, default=1e-9)
        if name == "disc-report":
            p.add_argument("--n", type=int, default=6)
        else:
            p.add_argument("--precision", type=int, default=30)

    p = add("sumprod", cmd_sumprod, "sum, product and shifted product set sizes")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--set", required=True, help="csv of field indices or random:size,seed")
    p.add_argument("--slack", type=float, default=0.1)

    p = add("ruzsa-sweep", cmd_ruzsa_sweep, "random Ruzsa inequality checks")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--family", choices=("cyclic", "multiplicative"), default="cyclic")
    p.add_argument("--form", choices=("corollary", "triangle"), default="corollary")

    p = add("dotprod-check", cmd_dotprod_check, "dot-product bound checks (trials 0 = exhaustive)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)

    p = add("build-r", cmd_build_r, "describe the structured polynomial R")
    p.add_argument("--N", type=int, required=True)

    p = add("hypersurface-search", cmd_hypersurface_search, "search a class product for R = 0")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--classes", default="random")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--mode", choices=("structured", "lex"), default="structured")

    p = add("acceptance", cmd_acceptance, "run the acceptance criteria")
    p.add_argument("--filter")
    p.add_argument("--inject", choices=sorted(acceptance.INJECTIONS),
                   help="deliberately break something to test the suite")
    return parser


def _default_workers():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        w = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV}={raw!r} is not an integer")
    return w


def _render(record, text, cfg, timing):
    if cfg.output_format == "csv":
        if record.table is None:
            raise UsageError(f"{cfg.command} has no CSV form; use --format json")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(record.table)
        return buf.getvalue()
    body = json.dumps(record.as_dict(timing), sort_keys=True)
    return (text + "\n" if text else "") + body + "\n"


def dispatch(argv=None, stdout=None):
    """Parse, run and emit; returns the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    for k, v in (("seed", 0), ("format", "json"), ("out", None), ("timing", False)):
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        workers = args.workers if hasattr(args, "workers") else _default_workers()
        if workers < 1:
            raise UsageError("workers must be >= 1")
        args.workers = workers
        cfg = ExperimentConfig(args.command, {}, args.seed, args.format, workers)
        t0 = time.perf_counter()
        record, text = args.func(args, cfg)
        record.wall_time = time.perf_counter() - t0
        rendered = _render(record, text, cfg, args.timing)
    except (UsageError, ValueError, FieldError) as e:
        # library ValueErrors are parameter problems (bad q, non-Weil input, ...)
        print(f"isogeny-census: error: {e}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rendered)
    else:
        stdout.write(rendered)
    return 1 if record.verdict == "fail" else 0


def main(argv=None):
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
