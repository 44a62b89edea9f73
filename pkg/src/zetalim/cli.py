"""Command-line front end: ``zetalim <command> [options]``.

Exit codes: 0 success, 1 some envelope check failed, 2 usage or parse
error, 3 enumeration budget exceeded, 4 inconsistent data or bad model.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import archimedean_integrals, digamma, hurwitz_zeta, l_at_one, theorem2_residual, z_nf, z_nf_regularized
from .asymfam import (
    TVInvariants,
    basic_inequality,
    corollary13_residual,
    corollary15_residual,
    estimate_invariants,
    kappa_limit,
    load_family,
    synth_family,
    theorem_onehalf_residual,
)
from .corpus import CurveData, default_corpus
from .errors import (
    BadModel,
    BudgetExceeded,
    DomainError,
    InconsistentData,
    InputError,
    NearZeroOfZeta,
    ZetalimError,
)
from .explicitff import r0_bound, r3_bound, theorem1_residual
from .ffcore import count_table, load_corpus, places_from_counts, projective_line
from .lfunc import rh_check, z_ff_closed
from .nfquad import QQ, QuadraticField, bs_family_nf, bs_sum_nf, class_number_imag, load_fields, residue_kappa
from .reports import Report, RunConfig, finite_or_none, load_constants, row_from_report, skip_row

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_INCONSISTENT = 0, 1, 2, 3, 4
EXTENDED_BITS = 128

DEFAULT_GRIDS = {
    "verify-ff": ((10, 11, 12, 13, 14), (0.05, 0.1, 0.25)),
    "verify-nf": ((100, 1000, 10000), (0.1, 0.3, 0.5)),
    "family": (tuple(range(1, 15)), (0.05, 0.1, 0.25)),
}


class UsageError(ZetalimError):
    pass


def parse_int_grid(text: str) -> tuple[int, ...]:
    """``10,12,14`` or an inclusive range ``10:14``; ``1e3`` is accepted."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ":" in part:
                lo, hi = (int(float(x)) for x in part.split(":"))
                out.extend(range(lo, hi + 1))
            elif part:
                out.append(int(float(part)))
    except ValueError as exc:
        raise UsageError(f"bad integer grid {text!r}") from exc
    if not out:
        raise UsageError("empty N grid")
    return tuple(out)


def parse_eps_grid(text: str) -> tuple[complex, ...]:
    try:
        out = tuple(complex(p.strip().replace(" ", "")) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise UsageError(f"bad eps grid {text!r}") from exc
    if not out:
        raise UsageError("empty eps grid")
    if any(e.real <= 0 for e in out):
        raise UsageError("every eps needs a positive real part")
    return out


def _eps_value(e: complex):
    return e.real if e.imag == 0 else e


def _grids(args, command):
    Ns, eps = DEFAULT_GRIDS[command]
    if args.N_grid:
        Ns = parse_int_grid(args.N_grid)
    if args.eps is not None:
        eps = parse_eps_grid(args.eps)
    elif args.eps_grid:
        eps = parse_eps_grid(args.eps_grid)
    return tuple(Ns), tuple(complex(e) for e in eps)


def _config(args, command, Ns=(), eps=(), inputs=()):
    constants = load_constants(args.constants) if args.constants else None
    kw = {"constants": constants} if constants else {}
    return RunConfig(command, tuple(Ns), tuple(eps), seed=args.seed, precision=args.precision,
                     budget=args.budget, inputs=tuple(str(i) for i in inputs), **kw)


def _precision_bits(args):
    return EXTENDED_BITS if args.precision == "extended" else None


def _emit_json(obj, args, name):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def _finish(report: Report, args, stem: str) -> int:
    if args.out:
        report.write(args.out, stem)
    else:
        sys.stdout.write(report.csv_text())
    s = report.summary()
    print(f"{stem}: {s['pass']} pass, {s['fail']} fail, {s['skip']} skip", file=sys.stderr)
    return EXIT_FAIL if report.failures else EXIT_OK


# count


def cmd_count(args) -> int:
    curve = _load_one_curve(args)
    counts = count_table(curve, args.B, args.budget)
    places = places_from_counts(counts)
    _emit_json({"N": list(counts.N), "phi": {str(q): c for q, c in places.by_norm().items()}}, args, "count.json")
    return EXIT_OK


def _load_one_curve(args):
    if not args.curve:
        raise UsageError("--curve FILE is required")
    curves = load_corpus(args.curve)
    if len(curves) != 1:
        raise UsageError("expected a single curve")
    return curves[0]


# zeta


def cmd_zeta(args) -> int:
    if args.curve:
        eps = complex(args.eps) if args.eps is not None else 0j
        out = []
        for curve in load_corpus(args.curve):
            data = CurveData(curve, args.budget, _precision_bits(args))
            rts = data.inverse_roots
            rh = rh_check(rts, curve.r)
            row = {
                "id": curve.label, "r": curve.r, "g": curve.genus,
                "lpoly": list(data.lpoly.coeffs),
                "class_number": data.lpoly.class_number,
                "inverse_roots": [[z.real, z.imag] for z in rts],
                "rh_max_deviation": rh.max_deviation, "rh_pass": rh.passed,
            }
            z = z_ff_closed(rts, curve.r, curve.genus, eps)
            row["Z"] = {"eps": [eps.real, eps.imag], "value": [z.real, z.imag]}
            out.append(row)
        _emit_json(out if len(out) > 1 else out[0], args, "zeta.json")
        return EXIT_OK
    if args.field:
        s = complex(args.s)
        out = []
        for K in load_fields(args.field):
            res = residue_kappa(K)
            row = {"field": K.label, "D": K.D, "h": res.h, "w": res.w, "R": res.R, "kappa": res.kappa}
            try:
                zs = z_nf(K, s) if abs(s - 1) > 1e-6 else None
                row["Z"] = None if zs is None else [zs.real, zs.imag]
                zr = z_nf_regularized(K, s)
                row["Z_regularized"] = [zr.real, zr.imag]
            except NearZeroOfZeta as exc:
                row["Z"] = f"skipped: {exc}"
            if K.D != 1:
                row["L1"] = l_at_one(K.D)
            out.append(row)
        _emit_json(out if len(out) > 1 else out[0], args, "zeta.json")
        return EXIT_OK
    raise UsageError("zeta needs --curve or --field")


# verify-ff


def _ff_rows(task):
    curve, Ns, eps_grid, consts, bits, budget = task
    data = CurveData(curve, budget, bits)
    depth = max(Ns)
    counts, places = data.counts(depth), data.places(depth)
    rts, g, r = data.inverse_roots, curve.genus, curve.r
    rows, stats = [], {"max_abs_S2": 0.0, "R0_ok": 0, "R3_ok": 0, "cells": 0, "max_identity_gap": 0.0}
    for N in Ns:
        for eps in eps_grid:
            rep = theorem1_residual(counts, places, rts, g, N, _eps_value(eps), consts["c1"], consts["c2"])
            rows.append(row_from_report(curve.label, "ff_truncation", r, g, N, eps, rep))
            c = rep.components
            stats["cells"] += 1
            stats["max_abs_S2"] = max(stats["max_abs_S2"], abs(c["S2"]))
            stats["max_identity_gap"] = max(stats["max_identity_gap"], c["identity_gap"])
            stats["R0_ok"] += abs(c["R0"]) <= r0_bound(r, g, N, eps.real)
            stats["R3_ok"] += abs(c["R3"]) <= r3_bound(r, g, N, eps.real)
    return rows, stats


def run_verify_ff(curves, cfg: RunConfig, bits=None, jobs: int = 1) -> Report:
    for N in cfg.N_grid:
        if N < 10:
            raise UsageError("the function-field residual needs N >= 10")
    tasks = [(c, cfg.N_grid, cfg.eps_grid, cfg.constants["ff"], bits, cfg.budget) for c in curves]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_ff_rows, tasks))
    else:
        results = [_ff_rows(t) for t in tasks]
    rows, agg = [], {"max_abs_S2": 0.0, "R0_ok": 0, "R3_ok": 0, "cells": 0, "max_identity_gap": 0.0}
    for rs, st in results:
        rows.extend(rs)
        for k in ("R0_ok", "R3_ok", "cells"):
            agg[k] += st[k]
        for k in ("max_abs_S2", "max_identity_gap"):
            agg[k] = max(agg[k], st[k])
    return Report(cfg, rows, {"curves": len(curves), **agg})


def cmd_verify_ff(args) -> int:
    Ns, eps = _grids(args, "verify-ff")
    curves = load_corpus(args.curve) if args.curve else default_corpus(args.seed)
    cfg = _config(args, "verify-ff", Ns, eps, [args.curve or f"default-corpus(seed={args.seed})"])
    return _finish(run_verify_ff(curves, cfg, _precision_bits(args), args.jobs), args, "verify_ff")


# verify-nf


def run_verify_nf(fields, cfg: RunConfig) -> Report:
    consts = cfg.constants["nf"]
    rows, diag = [], {}
    for K in fields:
        for eps in cfg.eps_grid:
            series = []
            for N in cfg.N_grid:
                if N < 10:
                    raise UsageError("the number-field residual needs N >= 10")
                try:
                    rep = theorem2_residual(K, N, _eps_value(eps), consts["c1"], consts["c2"])
                except NearZeroOfZeta:
                    rows.append(skip_row(K.label, "nf_truncation", "-", K.g, N, eps))
                    continue
                rows.append(row_from_report(K.label, "nf_truncation", "-", K.g, N, eps, rep))
                series.append(abs(rep.components["diagnostic"]))
            key = f"{K.label}@{eps.real!r}{'+' + repr(eps.imag) + 'j' if eps.imag else ''}"
            diag[key] = {
                "abs_diagnostic": series,
                "decreasing": all(b < a for a, b in zip(series, series[1:])),
            }
    return Report(cfg, rows, {"diagnostic": diag})


def cmd_verify_nf(args) -> int:
    if not args.field:
        raise UsageError("--field FILE is required")
    Ns, eps = _grids(args, "verify-nf")
    cfg = _config(args, "verify-nf", Ns, eps, [args.field])
    return _finish(run_verify_nf(load_fields(args.field), cfg), args, "verify_nf")


# family


def family_invariants(spec) -> tuple[TVInvariants, dict]:
    info = {}
    if spec.members:
        est = estimate_invariants(list(spec.members), window=min(len(spec.members), 3), r=spec.r)
        info["spread"] = {str(q): v for q, v in sorted(est.spread.items())}
        return est.invariants, info
    inv = spec.targets
    if spec.schedule:
        fam = synth_family(inv, spec.schedule)
        info["equality"] = fam.equality
        info["synth_members"] = [{"g": m.g, "phi": {str(q): c for q, c in sorted(m.phi.items())}} for m in fam.members]
    return inv, info


def run_family(spec, cfg: RunConfig, label: str = "family") -> Report:
    inv, info = family_invariants(spec)
    C = cfg.constants["family"]["C"]
    r = inv.r if inv.is_ff else "-"
    rows = []
    slopes = {}
    for eps in cfg.eps_grid:
        res = []
        for N in cfg.N_grid:
            rep = corollary13_residual(inv, N, _eps_value(eps), C)
            rows.append(row_from_report(label, "family_shifted", r, 0, N, eps, rep))
            res.append(abs(rep.residual))
        slopes[repr(eps.real)] = finite_or_none(_decay_slope(cfg.N_grid, res))
    reps, fit = theorem_onehalf_residual(inv, cfg.N_grid)
    for N, rep in zip(cfg.N_grid, reps):
        rows.append(row_from_report(label, "family_half", r, 0, N, 0, rep))
        rep15 = corollary15_residual(inv, N, fit)
        rows.append(row_from_report(label, "family_kappa", r, 0, N, 0, rep15))
    kap = kappa_limit(inv)
    extra = {
        "basic_inequality": basic_inequality(inv),
        "kappa": kap.value,
        "kappa_tail_bound": kap.tail_bound,
        "delta_hat": finite_or_none(fit.delta),
        "delta_fit_residual": fit.fit_residual,
        "shifted_decay_slope": slopes,
        **info,
    }
    return Report(cfg, rows, extra)


def _decay_slope(Ns, values) -> float:
    """Least-squares slope of ln|value| against N; -inf when all vanish."""
    pts = [(n, v) for n, v in zip(Ns, values) if v > 10 * np.finfo(float).eps]
    if len(pts) < 2:
        return -math.inf
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def cmd_family(args) -> int:
    if not args.family:
        raise UsageError("--family FILE is required")
    Ns, eps = _grids(args, "family")
    cfg = _config(args, "family", Ns, eps, [args.family])
    return _finish(run_family(load_family(args.family), cfg, Path(args.family).stem), args, "family")


# bs-sum


BS_SCHEMA_LINE = "# zetalim bs schema 1"
BS_COLUMNS = ("id", "N", "g", "partial_sum", "log_kappa", "normalized_sum", "log_kappa_over_g", "note")


def bs_csv(entries) -> str:
    buf = io.StringIO()
    buf.write(BS_SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BS_COLUMNS)
    for e in entries:
        w.writerow([x if isinstance(x, (str, int)) else repr(float(x)) for x in e])
    return buf.getvalue()


def cmd_bs(args) -> int:
    if not args.field:
        raise UsageError("--field FILE is required")
    fields = load_fields(args.field)
    N = args.N
    entries = []
    summary = {"version": __version__, "N": N}
    for K in fields:
        b = bs_sum_nf(K, N)
        norm = b.partial_sum / b.g if b.g > 0 else math.nan
        ratio = b.log_kappa / b.g if b.g > 0 else math.nan
        entries.append((b.label, N, b.g, b.partial_sum, b.log_kappa, norm, ratio, b.note))
    if len(fields) >= 3 and all(K.D != 1 for K in fields):
        fam = bs_family_nf(fields, N)
        entries.append(("family", N, math.nan, fam.family_sum, math.nan, fam.family_sum, fam.kappa_ratios[-1], fam.note))
        summary["family_sum"] = fam.family_sum
        summary["kappa_ratios"] = list(fam.kappa_ratios)
    text = bs_csv(entries)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bs_sum.csv").write_text(text)
        (out / "bs_sum.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# selftest


def selftest_checks():
    """(name, passed) pairs for a quick installation check."""
    gamma = 0.57721566490153286
    checks = []
    p1 = count_table(projective_line(2), 3)
    checks.append(("P1/F2 counts", p1.N == (3, 5, 9)))
    checks.append(("digamma(1/2)", abs(digamma(0.5) + gamma + 2 * math.log(2)) < 1e-12))
    checks.append(("zeta(2)", abs(hurwitz_zeta(2).real - math.pi**2 / 6) < 1e-12))
    checks.append(("h(-23) = 3", class_number_imag(-23) == 3))
    checks.append(("kappa(Q(i)) = pi/4", abs(residue_kappa(QuadraticField(-1)).kappa - math.pi / 4) < 1e-9))
    arch = archimedean_integrals(1000, 0.5)
    checks.append(("archimedean I", arch.gaps[0] <= 4 / math.sqrt(1000)))
    curve = default_corpus(0, {3: {2: 1}})[0]
    data = CurveData(curve)
    rep = theorem1_residual(data.counts(10), data.places(10), data.inverse_roots, 2, 10, 0.1)
    checks.append(("function-field residual cell", rep.passed))
    rep2 = theorem2_residual(QQ, 1000, 0.3)
    checks.append(("number-field residual cell", rep2.passed))
    return checks


def cmd_selftest(args) -> int:
    ok = True
    for name, passed in selftest_checks():
        print(f"{'PASS' if passed else 'FAIL'} {name}")
        ok &= bool(passed)
    return EXIT_OK if ok else EXIT_FAIL


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", help="curve or corpus JSON file")
    common.add_argument("--field", help="field JSON file ({\"d\": -23} or a list)")
    common.add_argument("--family", help="family JSON file")
    common.add_argument("--N-grid", dest="N_grid", help="comma list or lo:hi range of N")
    common.add_argument("--eps-grid", dest="eps_grid", help="comma list of eps values (complex allowed)")
    common.add_argument("--eps", help="single eps (shorthand for --eps-grid)")
    common.add_argument("--precision", choices=("double", "extended"), default="double")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output directory")
    common.add_argument("--constants", help="envelope constants JSON file")
    common.add_argument("--budget", type=int, default=None, help="enumeration budget (default ZETALIM_BUDGET or 1e8)")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="zetalim", description="Truncated zeta log-derivative residuals for global fields.")
    parser.add_argument("--version", action="version", version=f"zetalim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("count", parents=[common], help="point and place counts of a curve")
    p.add_argument("--B", type=int, default=3, help="count over F_{r^n} for n <= B")
    p.set_defaults(func=cmd_count)
    p = sub.add_parser("zeta", parents=[common], help="L-polynomial, inverse roots and Z values")
    p.add_argument("--s", default="2", help="evaluation point for --field")
    p.set_defaults(func=cmd_zeta)
    sub.add_parser("verify-ff", parents=[common], help="function-field residual grid").set_defaults(func=cmd_verify_ff)
    sub.add_parser("verify-nf", parents=[common], help="number-field residual grid").set_defaults(func=cmd_verify_nf)
    sub.add_parser("family", parents=[common], help="family corollaries").set_defaults(func=cmd_family)
    p = sub.add_parser("bs-sum", parents=[common], help="Brauer-Siegel partial sums")
    p.add_argument("--N", type=int, default=10)
    p.set_defaults(func=cmd_bs)
    sub.add_parser("selftest", parents=[common], help="quick installation check").set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InputError, DomainError) as exc:
        print(f"zetalim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"zetalim: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InconsistentData, BadModel, ZetalimError) as exc:
        print(f"zetalim: inconsistent data: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
