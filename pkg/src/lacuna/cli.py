"""Command-line front end for evaluation, classification, certification.

One report per invocation, to stdout or ``--output``, as json, csv, or
text. Exit codes are a stable contract: 0 success, 1 verification
failure, 2 usage or range error. Reports carry no timestamps, paths,
or machine identity, so identical configuration and seed give
byte-identical bytes; json objects are emitted with sorted keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import bessel
from . import certificate as ct
from . import integrals as ig
from . import spectrum as sp
from .errors import LacunaError, RangeError, SpectrumError

SCHEMA = "lacuna-verify/1"
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the report-producing subcommands."""

    r_max: float = ig.DEFAULT_R_MAX
    tol: float = ig.DEFAULT_TOL
    order_cap: int = ig.ORDER_GUARANTEE_CAP
    seed: int = 0
    fmt: str = "json"
    output: str | None = None
    use_cache: bool = True
    threads: int = 1

    def __post_init__(self) -> None:
        if not (self.r_max > 0 and self.tol > 0 and self.order_cap > 0):
            raise RangeError("r_max, tol and order_cap must be positive")
        if self.threads < 1:
            raise RangeError(f"threads must be >= 1, got {self.threads}")
        if self.fmt not in _FORMATS:
            raise RangeError(f"format must be one of {_FORMATS}")


def _config(args: argparse.Namespace, default_fmt: str) -> RunConfig:
    return RunConfig(
        r_max=getattr(args, "r_max", ig.DEFAULT_R_MAX),
        tol=getattr(args, "tol", ig.DEFAULT_TOL),
        order_cap=getattr(args, "order_cap", ig.ORDER_GUARANTEE_CAP),
        seed=getattr(args, "seed", 0),
        fmt=args.format or default_fmt,
        output=args.output,
        use_cache=not args.no_cache,
        threads=args.threads,
    )


# ---------------------------------------------------------------------------
# output plumbing


def _finite(x: float) -> float | None:
    # json has no portable infinity; absent bound -> null
    return None if math.isinf(x) else x


def _emit(text: str, cfg: RunConfig) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, cfg: RunConfig) -> None:
    payload = {"schema": SCHEMA, **payload}
    _emit(json.dumps(payload, sort_keys=True, indent=2), cfg)


def _emit_csv(header: list[str], rows: list[list], cfg: RunConfig) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit(buf.getvalue(), cfg)


# ---------------------------------------------------------------------------
# spectrum construction shared by two subcommands


def _add_spectrum_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambdas", help="comma-separated absolute values, e.g. 0,1,5,25")
    parser.add_argument("--base", type=int, help="geometric generator base (> 3)")
    parser.add_argument("--depth", type=int, help="number of positive generator powers")
    parser.add_argument("--scale", type=int, default=1, help="generator multiplier")


def _spectrum_from_args(args: argparse.Namespace) -> sp.SpectrumSet:
    if args.lambdas is not None:
        if args.base is not None or args.depth is not None:
            raise RangeError("give either --lambdas or --base/--depth, not both")
        try:
            lams = [int(part) for part in args.lambdas.split(",") if part.strip() != ""]
        except ValueError as exc:
            raise RangeError(f"bad --lambdas entry: {exc}") from None
        return sp.make_spectrum(lams)
    if args.base is None or args.depth is None:
        raise RangeError("need --lambdas or both --base and --depth")
    return sp.make_spectrum(base=args.base, depth=args.depth, scale=args.scale)


def _spectrum_desc(spectrum: sp.SpectrumSet) -> dict:
    return {
        "lambdas": list(spectrum.lambdas),
        "elements": sorted(spectrum.elements),
    }


# ---------------------------------------------------------------------------
# bessel


def cmd_bessel(args: argparse.Namespace) -> int:
    cfg = _config(args, "text")
    if args.bessel_cmd == "eval":
        value = bessel.besselj(args.n, args.x)
        if cfg.fmt == "json":
            _emit_json(
                {"command": "bessel.eval", "n": args.n, "x": args.x, "value": value}, cfg
            )
        elif cfg.fmt == "csv":
            _emit_csv(["n", "x", "value"], [[args.n, args.x, repr(value)]], cfg)
        else:
            _emit(repr(value), cfg)
        return EXIT_OK
    seq = bessel.j1_zeros(args.count)
    values = [float(z) for z in seq.zeros]
    if cfg.fmt == "json":
        _emit_json({"command": "bessel.zeros", "count": args.count, "zeros": values}, cfg)
    elif cfg.fmt == "csv":
        _emit_csv(["r", "zero"], [[r, repr(z)] for r, z in enumerate(values)], cfg)
    else:
        _emit("\n".join(repr(z) for z in values), cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# integrals


def _integral_row(k: int, m: int, n: int, iv: ig.IntegralValue) -> list:
    return [k, m, n, repr(iv.value), repr(iv.error_bound), iv.method]


def _emit_triple_report(command: str, row: list, cfg: RunConfig) -> None:
    if cfg.fmt == "csv":
        _emit_csv(["k", "m", "n", "value", "error", "method"], [row], cfg)
    elif cfg.fmt == "json":
        k, m, n, value, error, method = row
        _emit_json(
            {
                "command": command,
                "k": k,
                "m": m,
                "n": n,
                "value": float(value),
                "error": float(error),
                "method": method,
            },
            cfg,
        )
    else:
        k, m, n, value, error, method = row
        _emit(f"({k},{m},{n}) = {value} +- {error} [{method}]", cfg)


def cmd_integrals(args: argparse.Namespace) -> int:
    cfg = _config(args, "csv")
    sub = args.integrals_cmd
    if sub == "F":
        k, m, n = args.orders
        rv = ig.f_ratio(k, m, n, r_max=cfg.r_max, tol=cfg.tol)
        if cfg.fmt == "json":
            _emit_json(
                {
                    "command": "integrals.F",
                    "k": k,
                    "m": m,
                    "n": n,
                    "value": rv.value,
                    "lo": rv.lo,
                    "hi": rv.hi,
                },
                cfg,
            )
        elif cfg.fmt == "csv":
            err = max(rv.value - rv.lo, rv.hi - rv.value)
            _emit_csv(
                ["k", "m", "n", "value", "error", "method"],
                [[k, m, n, repr(rv.value), repr(err), "direct_ratio"]],
                cfg,
            )
        else:
            _emit(f"F({k},{m},{n}) = {rv.value!r} in [{rv.lo!r}, {rv.hi!r}]", cfg)
        return EXIT_OK
    if sub == "copt":
        iv = ig.c_opt(r_max=cfg.r_max, tol=cfg.tol)
        _emit_triple_report("integrals.copt", _integral_row(0, 0, 0, iv), cfg)
        return EXIT_OK
    if sub == "tilde":
        k, m, n = args.orders
        cap = max(cfg.order_cap, abs(k), abs(m), abs(n))
        table = ig.build_table(cap, cache=cfg.use_cache)
        iv = ig.i_tilde(abs(k), abs(m), abs(n), table)
        _emit_triple_report("integrals.tilde", _integral_row(k, m, n, iv), cfg)
        return EXIT_OK
    if sub == "direct":
        iv = ig.i_direct(tuple(args.orders), r_max=cfg.r_max, tol=cfg.tol)
        if cfg.fmt == "csv":
            _emit_csv(
                ["n1", "n2", "n3", "n4", "n5", "n6", "value", "error", "method"],
                [[*args.orders, repr(iv.value), repr(iv.error_bound), iv.method]],
                cfg,
            )
        elif cfg.fmt == "json":
            _emit_json(
                {
                    "command": "integrals.direct",
                    "orders": list(args.orders),
                    "value": iv.value,
                    "error": iv.error_bound,
                    "method": iv.method,
                },
                cfg,
            )
        else:
            _emit(
                f"I{tuple(args.orders)} = {iv.value!r} +- {iv.error_bound!r}", cfg
            )
        return EXIT_OK
    return _sweep_suite(args, cfg)


def _sweep_suite(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.suite != "bounds-f":
        raise RangeError(f"unknown suite {args.suite!r}; available: bounds-f")
    n_max = args.n_max
    sweep = ig.sweep_diagonal(n_max, r_max=cfg.r_max, tol=cfg.tol, cache=cfg.use_cache)

    def worst(points, threshold):
        entries = [(sweep.ratio_lo(*p), p) for p in points]
        if not entries:
            return None
        lo, point = min(entries)
        return {
            "threshold": threshold,
            "worst_point": list(point),
            "worst_lo": lo,
            "margin": lo - threshold,
            "status": "pass" if lo > threshold else "fail",
        }

    rows: list[dict] = []

    def row(family, points, threshold):
        data = worst(points, threshold)
        if data is None:
            rows.append({"family": family, "status": "skipped"})
        else:
            rows.append({"family": family, **data})

    row("single (n,0,0) > 5, 2 <= n", [(n, 0, 0) for n in range(2, n_max + 1)], 5.0)
    f100 = sweep.value(0, 0, 0) / sweep.value(1, 0, 0) if n_max >= 1 else None
    if f100 is not None:
        dev = abs(f100 - 5.0)
        rows.append(
            {
                "family": "single (1,0,0) within 2e-2 of 5",
                "threshold": 2e-2,
                "worst_point": [1, 0, 0],
                "worst_lo": f100,
                "margin": 2e-2 - dev,
                "status": "pass" if dev <= 2e-2 else "fail",
            }
        )
    row(
        "pair-zero (n,n,0) > 7.94",
        [(n, n, 0) for n in range(1, min(20, n_max) + 1)],
        7.94,
    )
    row(
        "pair-zero (n,n,0) > 10.8, 3 <= n",
        [(n, n, 0) for n in range(3, min(21, n_max) + 1)],
        10.8,
    )
    row("diagonal (n,n,n) > 3.2", [(n, n, n) for n in range(1, n_max + 1)], 3.2)
    cap = min(30, n_max)
    row(
        "pair (n,n,m) > 10, n != m, not {1,1,2}",
        [
            (n, n, m)
            for n in range(1, cap + 1)
            for m in range(1, cap + 1)
            if n != m and (n, m) != (1, 2)
        ],
        10.0,
    )
    row(
        "distinct (n,m,k) > 18, not (3,2,0)",
        [
            (n, m, k)
            for n in range(1, cap + 1)
            for m in range(0, n)
            for k in range(0, m)
            if (n, m, k) != (3, 2, 0)
        ],
        18.0,
    )
    passed = all(r["status"] != "fail" for r in rows)
    if cfg.fmt == "json":
        _emit_json(
            {
                "command": "integrals.sweep",
                "suite": args.suite,
                "config": {
                    "n_max": n_max,
                    "r_max": cfg.r_max,
                    "tol": cfg.tol,
                    "quad_diff": sweep.quad_diff,
                },
                "rows": rows,
                "passed": passed,
            },
            cfg,
        )
    elif cfg.fmt == "csv":
        header = ["family", "threshold", "worst_point", "worst_lo", "margin", "status"]
        body = [
            [
                r["family"],
                r.get("threshold", ""),
                " ".join(str(v) for v in r.get("worst_point", [])),
                repr(r["worst_lo"]) if "worst_lo" in r else "",
                repr(r["margin"]) if "margin" in r else "",
                r["status"],
            ]
            for r in rows
        ]
        _emit_csv(header, body, cfg)
    else:
        lines = []
        for r in rows:
            if r["status"] == "skipped":
                lines.append(f"SKIP  {r['family']}")
            else:
                lines.append(
                    f"{r['status'].upper():4}  {r['family']}: worst "
                    f"{tuple(r['worst_point'])} -> {r['worst_lo']:.4f} "
                    f"(margin {r['margin']:+.4f})"
                )
        lines.append("suite: " + ("pass" if passed else "FAIL"))
        _emit("\n".join(lines), cfg)
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(args: argparse.Namespace) -> int:
    cfg = _config(args, "json")
    spectrum = _spectrum_from_args(args)
    points = sp.classify_brute_force(spectrum)
    entries = []
    counts = {"unique": 0, "trivial": 0, "exception": 0}
    for p in points:
        cls = p.kind.name.lower()
        counts[cls] += 1
        entries.append(
            {
                "D": p.point,
                "class": cls,
                "subtype": p.subtype.name.lower() if p.subtype else None,
                "families": sorted(p.family_tags),
                "reps": [list(r.entries) for r in p.reps],
                "boundary_safe": p.boundary_safe,
            }
        )
    unique_sums, witness = sp.has_unique_pair_sums(spectrum)
    cross = None
    if args.cross_check:
        brute = {
            (p.point, tuple(r.entries for r in p.reps), p.subtype)
            for p in points
            if p.kind is sp.PointKind.EXCEPTION and p.boundary_safe
        }
        equations = {
            (p.point, tuple(r.entries for r in p.reps), p.subtype)
            for p in sp.exceptions_from_equations(spectrum)
            if p.boundary_safe
        }
        cross = "ok" if brute == equations else "mismatch"
    payload = {
        "command": "spectrum.classify",
        "spectrum": _spectrum_desc(spectrum),
        "points": entries,
        "summary": {
            **counts,
            "total": len(entries),
            "boundary_safe_exceptions": sum(
                1
                for e in entries
                if e["class"] == "exception" and e["boundary_safe"]
            ),
            "unique_pair_sums": unique_sums,
        },
        "cross_check": cross,
    }
    if cfg.fmt == "json":
        _emit_json(payload, cfg)
    elif cfg.fmt == "csv":
        header = ["D", "class", "subtype", "families", "reps", "boundary_safe"]
        body = [
            [
                e["D"],
                e["class"],
                e["subtype"] or "",
                " ".join(str(t) for t in e["families"]),
                ";".join(",".join(str(v) for v in rep) for rep in e["reps"]),
                e["boundary_safe"],
            ]
            for e in entries
        ]
        _emit_csv(header, body, cfg)
    else:
        lines = [
            f"spectrum: {list(spectrum.lambdas)} ({len(spectrum.elements)} elements)"
        ]
        for e in entries:
            if e["class"] != "exception":
                continue
            reps = " = ".join(
                "+".join(str(v) for v in rep) for rep in e["reps"]
            )
            lines.append(f"exception D={e['D']} [{e['subtype']}]: {reps}")
        lines.append(
            "counts: "
            + ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        )
        if cross is not None:
            lines.append(f"cross-check: {cross}")
        _emit("\n".join(lines), cfg)
    return EXIT_OK if cross in (None, "ok") else EXIT_FAIL


# ---------------------------------------------------------------------------
# certify


def _read_coefficients(path: str, spectrum: sp.SpectrumSet) -> ct.CoefficientVector:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RangeError(f"cannot read coefficient file: {exc}") from None
    reader = csv.reader(io.StringIO(raw))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["n", "re", "im"]:
        raise RangeError("coefficient file must start with the header: n,re,im")
    values: dict[int, complex] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            n = int(row[0])
            z = complex(float(row[1]), float(row[2]))
        except (ValueError, IndexError) as exc:
            raise RangeError(f"bad coefficient row {lineno}: {exc}") from None
        if n in values:
            raise RangeError(f"duplicate frequency {n} in coefficient file")
        values[n] = z
    return ct.CoefficientVector.from_dict(spectrum, values)


def _instance_dict(inst: ct.SystemInstance) -> dict:
    return {
        "point": inst.point,
        "description": inst.description,
        "eps_lo": _finite(inst.eps_lo),
        "eps_hi": _finite(inst.eps_hi),
        "feasible": inst.feasible,
        "margin": _finite(inst.margin),
    }


def _report_dict(report: ct.SystemReport) -> dict:
    return {
        "system": report.system_id,
        "passed": report.passed,
        "tightest_margin": _finite(report.tightest_margin),
        "instances": [_instance_dict(i) for i in report.instances],
    }


def _run_trial(
    params: ct.CertificateParams,
    vec: ct.CoefficientVector,
    index: int,
    label: str,
    cfg: RunConfig,
) -> dict:
    s = ct.compute_S_exact(vec, r_max=cfg.r_max, tol=cfg.tol)
    ub = ct.compute_S_upper_bound(vec, params, r_max=cfg.r_max, tol=cfg.tol)
    grouped_ok = s.value <= ub.value + ub.error_bound + s.error_bound
    verdict = ct.verify_theorem(vec, r_max=cfg.r_max, tol=cfg.tol)
    passed = grouped_ok and (
        verdict.verdict == "holds"
        or (verdict.verdict == "indeterminate" and verdict.equality_case)
    )
    return {
        "index": index,
        "source": label,
        "support": list(vec.support),
        "s_exact": s.value,
        "upper_bound": ub.value,
        "grouped_ok": grouped_ok,
        "verdict": verdict.verdict,
        "margin": verdict.margin,
        "error_budget": verdict.error_budget,
        "equality_case": verdict.equality_case,
        "passed": passed,
    }


def cmd_certify(args: argparse.Namespace) -> int:
    cfg = _config(args, "json")
    spectrum = _spectrum_from_args(args)
    b = args.b
    window = ct.feasible_b_interval()
    b_inside = window.feasible and window.lo < b < window.hi
    payload: dict = {
        "command": "certify",
        "config": {
            "spectrum": _spectrum_desc(spectrum),
            "b": b,
            "trials": args.trials,
            "seed": cfg.seed,
            "r_max": cfg.r_max,
            "tol": cfg.tol,
            "coeff": args.coeff,
        },
        "b_interval": {
            "lo": window.lo,
            "hi": window.hi,
            "lo_exact": str(window.lo_exact),
            "hi_exact": str(window.hi_exact),
            "feasible": window.feasible,
            "b_inside": b_inside,
        },
    }
    if not b_inside:
        payload["verdict"] = "b-interval violation"
        payload["system_reports"] = []
        payload["trials_run"] = []
        _emit_certify(payload, cfg)
        return EXIT_FAIL
    flb = ct.FLowerBounds(spectrum, r_max=cfg.r_max, tol=cfg.tol)
    reports = ct.check_systems(spectrum, b, f_lower=flb, r_max=cfg.r_max, tol=cfg.tol)
    payload["system_reports"] = [_report_dict(r) for r in reports]
    if not all(r.passed for r in reports):
        payload["verdict"] = "system infeasible"
        payload["trials_run"] = []
        _emit_certify(payload, cfg)
        return EXIT_FAIL
    params, _ = ct.derive_params(
        spectrum, b, f_lower=flb, r_max=cfg.r_max, tol=cfg.tol
    )
    payload["eps"] = [[d, e] for d, e in params.eps]

    jobs: list[tuple[int, str, ct.CoefficientVector]] = []
    if args.coeff == "const":
        jobs.append((0, "const", ct.CoefficientVector.constant(spectrum)))
    elif args.coeff is not None:
        jobs.append((0, args.coeff, _read_coefficients(args.coeff, spectrum)))
    else:
        for i in range(args.trials):
            rng = random.Random(f"{cfg.seed}:{i}")
            vec = ct.random_vector(spectrum, rng, adversarial=(i % 3 == 0))
            jobs.append((i, "random", vec))

    def run(job: tuple[int, str, ct.CoefficientVector]) -> dict:
        index, label, vec = job
        return _run_trial(params, vec, index, label, cfg)

    if cfg.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            trials = list(pool.map(run, jobs))
    else:
        trials = [run(job) for job in jobs]
    payload["trials_run"] = trials
    all_pass = all(t["passed"] for t in trials)
    payload["verdict"] = "holds" if all_pass else "fails"
    _emit_certify(payload, cfg)
    return EXIT_OK if all_pass else EXIT_FAIL


def _emit_certify(payload: dict, cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        _emit_json(payload, cfg)
        return
    if cfg.fmt == "csv":
        header = [
            "index",
            "source",
            "support",
            "s_exact",
            "upper_bound",
            "grouped_ok",
            "verdict",
            "margin",
            "error_budget",
            "equality_case",
            "passed",
        ]
        body = [
            [
                t["index"],
                t["source"],
                " ".join(str(n) for n in t["support"]),
                repr(t["s_exact"]),
                repr(t["upper_bound"]),
                t["grouped_ok"],
                t["verdict"],
                repr(t["margin"]),
                repr(t["error_budget"]),
                t["equality_case"],
                t["passed"],
            ]
            for t in payload["trials_run"]
        ]
        _emit_csv(header, body, cfg)
        return
    w = payload["b_interval"]
    lines = [
        f"b = {payload['config']['b']} against window "
        f"[{w['lo']:.4f}, {w['hi']:.4f}] ({w['lo_exact']}, {w['hi_exact']}): "
        + ("inside" if w["b_inside"] else "OUTSIDE")
    ]
    for rep in payload.get("system_reports", []):
        lines.append(
            f"system {rep['system']}: "
            + ("ok" if rep["passed"] else "INFEASIBLE")
            + f" ({len(rep['instances'])} rows)"
        )
    if "eps" in payload:
        eps = ", ".join(f"{d} -> {e:.4f}" for d, e in payload["eps"])
        lines.append(f"eps: {eps or '(none)'}")
    trials = payload.get("trials_run", [])
    if trials:
        ok = sum(1 for t in trials if t["passed"])
        worst = min(trials, key=lambda t: t["margin"] - t["error_budget"])
        lines.append(
            f"trials: {ok}/{len(trials)} pass; tightest margin "
            f"{worst['margin']:.3e} vs budget {worst['error_budget']:.3e}"
            + (" (equality case)" if worst["equality_case"] else "")
        )
    lines.append(f"verdict: {payload['verdict']}")
    _emit("\n".join(lines), cfg)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lacuna-verify",
        description="verification toolkit for the sharp sextic extension inequality",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=_FORMATS, default=None)
    common.add_argument("--output", default=None, help="write the report to this path")
    common.add_argument("--no-cache", action="store_true", help="bypass on-disk caches")
    common.add_argument("--threads", type=int, default=1)

    subs = parser.add_subparsers(dest="command", required=True)

    # common flags attach to leaf parsers only: a parent default on an
    # outer parser would overwrite a value parsed before the subcommand
    p_bessel = subs.add_parser("bessel", help="Bessel function values")
    bessel_subs = p_bessel.add_subparsers(dest="bessel_cmd", required=True)
    p_eval = bessel_subs.add_parser("eval", parents=[common])
    p_eval.add_argument("-n", type=int, required=True, help="order, |n| <= 1200")
    p_eval.add_argument("-x", type=float, required=True, help="argument in [0, 1e4]")
    p_zeros = bessel_subs.add_parser("zeros", parents=[common])
    p_zeros.add_argument("-c", "--count", type=int, required=True)
    p_bessel.set_defaults(func=cmd_bessel)

    p_int = subs.add_parser("integrals", help="sextet integrals and F")
    int_subs = p_int.add_subparsers(dest="integrals_cmd", required=True)
    p_f = int_subs.add_parser("F", parents=[common])
    p_f.add_argument("orders", type=int, nargs=3, metavar="N")
    p_copt = int_subs.add_parser("copt", parents=[common])
    p_tilde = int_subs.add_parser("tilde", parents=[common])
    p_tilde.add_argument("orders", type=int, nargs=3, metavar="N")
    p_tilde.add_argument("--order-cap", type=int, default=ig.ORDER_GUARANTEE_CAP)
    p_direct = int_subs.add_parser("direct", parents=[common])
    p_direct.add_argument("orders", type=int, nargs=6, metavar="N")
    p_sweep = int_subs.add_parser("sweep", parents=[common])
    p_sweep.add_argument("--suite", required=True)
    p_sweep.add_argument("--n-max", type=int, default=40)
    for sub in (p_f, p_copt, p_tilde, p_direct):
        sub.add_argument("--r-max", dest="r_max", type=float, default=ig.DEFAULT_R_MAX)
        sub.add_argument("--tol", type=float, default=ig.DEFAULT_TOL)
    p_sweep.add_argument("--r-max", dest="r_max", type=float, default=40000.0)
    p_sweep.add_argument("--tol", type=float, default=2.0e-6)
    p_int.set_defaults(func=cmd_integrals)

    p_spec = subs.add_parser("spectrum", help="triple-sum classification")
    spec_subs = p_spec.add_subparsers(dest="spectrum_cmd", required=True)
    p_cls = spec_subs.add_parser("classify", parents=[common])
    _add_spectrum_args(p_cls)
    p_cls.add_argument(
        "--cross-check",
        action="store_true",
        help="compare brute force against the equation route",
    )
    p_spec.set_defaults(func=cmd_spectrum)

    p_cert = subs.add_parser("certify", parents=[common], help="run the certificate")
    _add_spectrum_args(p_cert)
    p_cert.add_argument("--b", type=float, default=ct.DEFAULT_B)
    p_cert.add_argument("--trials", type=int, default=100)
    p_cert.add_argument("--seed", type=int, default=0)
    p_cert.add_argument(
        "--coeff",
        default=None,
        help="coefficient CSV (header n,re,im) or the literal 'const'",
    )
    p_cert.add_argument("--r-max", dest="r_max", type=float, default=ig.DEFAULT_R_MAX)
    p_cert.add_argument("--tol", type=float, default=ig.DEFAULT_TOL)
    p_cert.set_defaults(func=cmd_certify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RangeError, SpectrumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LacunaError as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
