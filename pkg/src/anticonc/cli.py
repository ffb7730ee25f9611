"""Command-line front end: reproducible runs, versioned JSON/CSV reports.

Reports are split into a header (version, command, seed, full flag
set, timestamp) and a body; identical (config, seed) produce
byte-identical bodies.  Every numeric in a body carries either an
"exact" rational string or a "stderr" field (0.0 for deterministic
closed-form floats).  Exit codes: 0 success, 1 mathematical failure
(a bound or budget violated), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .covspectrum import (
    CovBundle,
    cov_matrix_ball,
    cov_matrix_mc,
    cov_matrix_product,
    gaussian_beta,
    radial_spectrum,
    theoretical_spectrum,
    verify_eigenstructure,
)
from .estimators import ball_sampler, chf_mc, decay_exponent_fit, product_sampler, sublevel_mc, variance_mc
from .lpball import LpBallSpec, ball_norm_moment, isotropic_scale_sq, marginal_second_moment, norm_power_variance, sample_ball
from .measures import Measure1D, ProductMeasure, parse_measure
from .orthopoly import SingularHankelError, gram_schmidt, variance_exact, variance_lower_bound, variance_lower_bound_sq_exact
from .oscillatory import PanelBudgetError, region_above_threshold, restricted_oscillatory_integral
from .poly import Poly, PolyParseError, coeff_level, max_top_coeff, parse_poly, partial_derivative

SCHEMA = 1

try:
    from importlib.metadata import version as _pkg_version

    VERSION = _pkg_version("artifact")
except Exception:  # not installed; running from a checkout
    VERSION = "0.0.0"


class UsageError(ValueError):
    """Bad flags or unparseable input; maps to exit code 2."""


class MathFailure(RuntimeError):
    """A verified quantity violated its bound; maps to exit code 1."""


@dataclass
class RunConfig:
    """One CLI invocation: subcommand, its flags, and the global knobs."""

    command: str
    options: Dict[str, Any]
    seed: int = 0
    out: Optional[str] = None
    format: str = "json"
    threads: int = 1


@dataclass
class Report:
    body: Dict[str, Any]
    csv_header: List[str] = field(default_factory=list)
    csv_rows: List[List[Any]] = field(default_factory=list)
    console: List[str] = field(default_factory=list)
    exit_code: int = 0


# ---- numeric report entries -------------------------------------------------------


def _num(value, exact=None, stderr: Optional[float] = None) -> Dict[str, Any]:
    out: Dict[str, Any] = {"value": float(value)}
    if exact is not None:
        out["exact"] = str(exact)
    else:
        out["stderr"] = 0.0 if stderr is None else float(stderr)
    return out


def _num_coeff(v) -> Dict[str, Any]:
    """Exact tag for rationals, zero stderr for closed-form floats."""
    return _num(v, exact=v) if isinstance(v, (Fraction, int)) else _num(v)


def _frac_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r} ({exc})")


def _geom_grid(lo: float, hi: float, count: int, what: str) -> List[float]:
    if lo <= 0 or hi <= lo or count < 2:
        raise UsageError(f"{what} grid needs 0 < min < max and count >= 2")
    return [float(t) for t in np.geomspace(lo, hi, count)]


def _interlacing_ok(bundle: CovBundle, d: int, slack: float = 1e-10) -> bool:
    fac = math.factorial(d)
    return all(
        fac * ls >= lc - slack and lc >= ls - slack
        for ls, lc in zip(bundle.eigenvalues, bundle.c_eigenvalues)
    )


def _parse_poly(expr: str, n: int) -> Poly:
    try:
        return parse_poly(expr, n)
    except PolyParseError as exc:
        raise UsageError(f"cannot parse polynomial: {exc}")


def _product(cfg: RunConfig) -> ProductMeasure:
    try:
        mu = parse_measure(cfg.options["measure"])
    except ValueError as exc:
        raise UsageError(str(exc))
    return ProductMeasure(mu, cfg.options["n"])


# ---- subcommands ------------------------------------------------------------------


def _cmd_ortho(cfg: RunConfig) -> Report:
    try:
        mu = parse_measure(cfg.options["measure"])
    except ValueError as exc:
        raise UsageError(str(exc))
    maxdeg = cfg.options["maxdeg"]
    if maxdeg < 0:
        raise UsageError("--maxdeg must be >= 0")
    try:
        system = gram_schmidt(mu, maxdeg)
    except SingularHankelError as exc:
        raise MathFailure(f"moment matrix is singular: {exc}")
    constants = [
        {"degree": d, "c": _num(system.c(d)), "c_sq": _num_coeff(system.c_sq(d))}
        for d in range(maxdeg + 1)
    ]
    body = {
        "measure": str(mu),
        "maxdeg": maxdeg,
        "constants": constants,
        "monic": [[str(c) for c in row] for row in system.monic],
        "orthonormal": system.coeff_table(),
    }
    rows = [
        [d, system.c(d), 0.0, ";".join(str(c) for c in system.monic[d])]
        for d in range(maxdeg + 1)
    ]
    return Report(body, ["degree", "c", "stderr", "monic_coeffs"], rows)


def _spectrum_inputs(cfg: RunConfig):
    n, d = cfg.options["n"], cfg.options["d"]
    if n < 1 or d < 1:
        raise UsageError("--n and --d must be >= 1")
    measure = cfg.options["measure"]
    if measure == "ball2":
        pairs = theoretical_spectrum(n, d)
        exact = lambda: cov_matrix_ball(n, d)
        sampler = ball_sampler(LpBallSpec.iso(n, 2))
    elif measure == "radial:gaussian":
        pairs = radial_spectrum(n, d, [gaussian_beta(n, q) for q in range(d + 1)])
        exact = lambda: cov_matrix_product(ProductMeasure(Measure1D.gaussian(), n), d)
        sampler = product_sampler(ProductMeasure(Measure1D.gaussian(), n))
    elif measure.startswith("product:"):
        try:
            mu = parse_measure(measure[len("product:"):])
        except ValueError as exc:
            raise UsageError(str(exc))
        pairs = None
        exact = lambda: cov_matrix_product(ProductMeasure(mu, n), d)
        sampler = product_sampler(ProductMeasure(mu, n))
    else:
        raise UsageError(f"unknown spectrum measure {measure!r}")
    return n, d, pairs, exact, sampler


def _cmd_spectrum(cfg: RunConfig) -> Report:
    n, d, pairs, exact, sampler = _spectrum_inputs(cfg)
    tol = cfg.options["tol"]
    if cfg.options["mode"] == "exact":
        bundle = exact()
    else:
        rng = np.random.default_rng(cfg.seed)
        bundle = cov_matrix_mc(n, d, sampler, cfg.options["samples"], rng)

    body: Dict[str, Any] = {
        "n": n,
        "d": d,
        "measure": cfg.options["measure"],
        "mode": cfg.options["mode"],
        "empirical": [float(v) for v in bundle.eigenvalues],
        "interlacing_ok": _interlacing_ok(bundle, d),
        "theoretical": None,
        "clusters": None,
        "max_rel_dev": None,
    }
    if pairs is not None:
        body["theoretical"] = [
            {"eigenvalue": _num_coeff(eta), "multiplicity": mult} for eta, mult in pairs
        ]
        if cfg.options["mode"] == "exact":
            try:
                report = verify_eigenstructure(bundle, pairs, tol_rel=tol)
            except ValueError as exc:
                raise MathFailure(str(exc))
            body["clusters"] = report.clusters
            body["max_rel_dev"] = report.max_rel_dev
        else:
            theo = sorted(float(e) for e, m in pairs for _ in range(m))
            devs = [
                abs(e - t) / t for e, t in zip(bundle.eigenvalues, theo) if t
            ]
            body["max_rel_dev"] = max(devs) if devs else 0.0
    se = bundle.mc_stderr
    stderrs = None if se is None else float(np.max(se))
    rows = []
    for i, v in enumerate(body["empirical"]):
        rows.append([i, v, 0.0 if stderrs is None else stderrs, ""])
    return Report(body, ["index", "eigenvalue", "stderr", "exact"], rows)


def _cmd_ball(cfg: RunConfig) -> Report:
    n, p = cfg.options["n"], cfg.options["p"]
    if n < 1:
        raise UsageError("--n must be >= 1")
    try:
        spec = LpBallSpec.iso(n, p) if cfg.options["scale"] == "iso" else LpBallSpec.unit(n, p)
    except ValueError as exc:
        raise UsageError(str(exc))
    op = cfg.options["op"]
    body: Dict[str, Any] = {"n": n, "p": str(p), "scale": cfg.options["scale"], "op": op}
    rows: List[List[Any]] = []

    if op == "moment":
        ks = sorted({1, 2, *( (int(p), 2 * int(p)) if p.denominator == 1 else () )})
        body["norm_moments"] = [
            {"k": k, "moment": _num_coeff(ball_norm_moment(spec, k))} for k in ks
        ]
        body["marginal_second_moment"] = _num_coeff(
            marginal_second_moment(n, p) * spec.scale_sq
        )
        body["isotropic_scale_sq"] = _num_coeff(isotropic_scale_sq(n, p))
        rows = [["k=%d" % k, float(ball_norm_moment(spec, k)), 0.0, ""] for k in ks]
    elif op == "sample":
        N = cfg.options["samples"]
        rng = np.random.default_rng(cfg.seed)
        x = sample_ball(spec, rng, N)
        x1sq = x[:, 0] ** 2
        normp = (np.abs(x) ** float(p)).sum(axis=1)
        exact_x1 = marginal_second_moment(n, p) * spec.scale_sq
        exact_norm = float(spec.scale) ** float(p) * n / (n + float(p))
        body["samples"] = N
        body["marginal_sq_mc"] = _num(x1sq.mean(), stderr=x1sq.std() / math.sqrt(N))
        body["marginal_sq_exact"] = _num_coeff(exact_x1)
        body["norm_p_mc"] = _num(normp.mean(), stderr=normp.std() / math.sqrt(N))
        body["norm_p_exact"] = _num_coeff(
            ball_norm_moment(spec, int(p)) if p.denominator == 1 else exact_norm
        )
        rows = [
            ["marginal_sq", x1sq.mean(), x1sq.std() / math.sqrt(N), x1sq.mean() / float(exact_x1)],
            ["norm_p", normp.mean(), normp.std() / math.sqrt(N), normp.mean() / exact_norm],
        ]
    else:  # var-norm
        N = cfg.options["samples"]
        rng = np.random.default_rng(cfg.seed)
        x = sample_ball(spec, rng, N)
        s = (np.abs(x) ** float(p)).sum(axis=1) / math.sqrt(n)
        m = s.mean()
        c = s - m
        m2 = float((c**2).mean())
        m4 = float((c**4).mean())
        var = m2 * N / (N - 1)
        se = math.sqrt(max(m4 - m2 * m2 * (N - 3) / (N - 1), 0.0) / N)
        body["var_mc"] = _num(var, stderr=se)
        ratio = ""
        if p.denominator == 1 and int(p) % 2 == 0:
            exact = norm_power_variance(n, int(p))
            body["var_exact"] = _num_coeff(exact)
            ratio = var / float(exact)
            if abs(var - float(exact)) > 4 * se:
                raise MathFailure(
                    f"MC variance {var:.6g} deviates from exact {float(exact):.6g} "
                    f"by more than 4 stderr ({se:.2g})"
                )
        rows = [["var_norm", var, se, ratio]]
    return Report(body, ["quantity", "value", "stderr", "bound_ratio"], rows)


ESTIMATOR_COLUMNS = ["t_or_eps", "value", "stderr", "bound_ratio"]


def _cmd_var_mc(cfg: RunConfig) -> Report:
    pm = _product(cfg)
    f = _parse_poly(cfg.options["poly"], cfg.options["n"])
    if f.degree < 1:
        raise UsageError("polynomial must be nonconstant")
    r = variance_mc(f, product_sampler(pm), cfg.options["samples"], cfg.seed)
    system = gram_schmidt(pm.base, f.degree)
    exact = variance_exact(f, pm)
    bound_sq = variance_lower_bound_sq_exact(f, system)
    bound = variance_lower_bound(f, system)
    if exact < bound_sq:
        raise MathFailure(f"exact variance {exact} violates lower bound {bound_sq}")
    ratio = r.value / bound if bound else float("inf")
    body = {
        "poly": cfg.options["poly"],
        "measure": cfg.options["measure"],
        "n": cfg.options["n"],
        "variance_mc": _num(r.value, stderr=r.stderr),
        "variance_exact": _num_coeff(exact),
        "lower_bound": _num_coeff(bound_sq),
        "bound_ratio": _num(ratio, stderr=r.stderr / bound if bound else 0.0),
    }
    return Report(body, ESTIMATOR_COLUMNS, [["", r.value, r.stderr, ratio]])


def _cmd_sublevel(cfg: RunConfig) -> Report:
    pm = _product(cfg)
    f = _parse_poly(cfg.options["poly"], cfg.options["n"])
    if f.degree < 1:
        raise UsageError("polynomial must be nonconstant")
    lo, hi, count = cfg.options["eps_min"], cfg.options["eps_max"], cfg.options["eps_count"]
    grid = _geom_grid(lo, hi, count, "eps")
    d = f.degree
    cd = coeff_level(f, d)
    y = cfg.options["y"]
    rows, entries, errs, vals = [], [], [], []
    for i, eps in enumerate(grid):
        r = sublevel_mc(f, product_sampler(pm), eps, y, cfg.options["samples"], cfg.seed + i)
        ratio = r.value / (d * (eps / cd) ** (1 / d))
        rows.append([eps, r.value, r.stderr, ratio])
        entries.append({"eps": eps, "prob": _num(r.value, stderr=r.stderr), "bound_ratio": _num(ratio, stderr=r.stderr / (d * (eps / cd) ** (1 / d)))})
        vals.append(r.value)
        errs.append(r.stderr)
    body: Dict[str, Any] = {
        "poly": cfg.options["poly"],
        "measure": cfg.options["measure"],
        "n": cfg.options["n"],
        "y": y,
        "rows": entries,
        "slope": None,
    }
    try:
        body["slope"] = _num(decay_exponent_fit(grid, vals, errs))
    except ValueError:
        pass  # too few points above the noise floor; slope omitted
    return Report(body, ESTIMATOR_COLUMNS, rows)


def _cmd_chf(cfg: RunConfig) -> Report:
    pm = _product(cfg)
    f = _parse_poly(cfg.options["poly"], cfg.options["n"])
    if f.degree < 1:
        raise UsageError("polynomial must be nonconstant")
    grid = _geom_grid(cfg.options["t_min"], cfg.options["t_max"], cfg.options["t_count"], "t")
    d = f.degree
    md = abs(float(max_top_coeff(f)))
    reports = chf_mc(f, product_sampler(pm), grid, cfg.options["samples"], cfg.seed)
    rows, entries = [], []
    for t, r in zip(grid, reports):
        weight = (md * t) ** (1 / d) / d
        rows.append([t, r.value, r.stderr, r.value * weight])
        entries.append({"t": t, "chf": _num(r.value, stderr=r.stderr), "bound_ratio": _num(r.value * weight, stderr=r.stderr * weight)})
    body: Dict[str, Any] = {
        "poly": cfg.options["poly"],
        "measure": cfg.options["measure"],
        "n": cfg.options["n"],
        "top_coeff_max": _num_coeff(max_top_coeff(f)),
        "rows": entries,
        "slope": None,
    }
    try:
        body["slope"] = _num(decay_exponent_fit(grid, [r.value for r in reports], [r.stderr for r in reports]))
    except ValueError:
        pass
    return Report(body, ESTIMATOR_COLUMNS, rows)


def _cmd_vdc1d(cfg: RunConfig) -> Report:
    try:
        mu = parse_measure(cfg.options["measure"])
    except ValueError as exc:
        raise UsageError(str(exc))
    f = _parse_poly(cfg.options["poly"], 1)
    d = f.degree
    if d < 1:
        raise UsageError("polynomial must be nonconstant")
    k = cfg.options["k"] if cfg.options["k"] is not None else d
    if not 1 <= k <= d:
        raise UsageError(f"--k must be in 1..deg f = {d}")
    grid = _geom_grid(cfg.options["t_min"], cfg.options["t_max"], cfg.options["t_count"], "t")
    tol = cfg.options["tol"]
    region = region_above_threshold(partial_derivative(f, (k,)), 1)
    rows, entries = [], []
    try:
        for t in grid:
            val = abs(restricted_oscillatory_integral(f, mu, k, t, tol=tol))
            ratio = val * t ** (1 / k) / (d * k)
            rows.append([t, val, tol, ratio])
            entries.append({"t": t, "integral": _num(val, stderr=tol), "bound_ratio": _num(ratio, stderr=tol)})
    except PanelBudgetError as exc:
        raise MathFailure(str(exc))
    body: Dict[str, Any] = {
        "poly": cfg.options["poly"],
        "measure": cfg.options["measure"],
        "k": k,
        # null endpoint = unbounded ray (strict JSON has no Infinity)
        "region": [
            [None if math.isinf(a) else a, None if math.isinf(b) else b]
            for a, b in region.intervals
        ],
        "rows": entries,
        "slope": None,
    }
    try:
        body["slope"] = _num(decay_exponent_fit(grid, [r[1] for r in rows], [tol] * len(rows)))
    except ValueError:
        pass
    return Report(body, ESTIMATOR_COLUMNS, rows)


def _cmd_verify(cfg: RunConfig) -> Report:
    from .verify import run_criteria

    profile = cfg.options["profile"]
    try:
        results = run_criteria(profile, cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    console = [
        f"criterion {r.index:2d} [{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}"
        for r in results
    ]
    failed = [r for r in results if not r.passed]
    console.append(f"{len(results) - len(failed)}/{len(results)} criteria passed ({profile} profile)")
    body = {
        "profile": profile,
        "passed": not failed,
        "results": [
            {"index": r.index, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
    }
    rows = [[r.index, int(r.passed), 0.0, r.name] for r in results]
    return Report(body, ["criterion", "passed", "stderr", "name"], rows,
                  console=console, exit_code=1 if failed else 0)


COMMANDS = {
    "ortho": _cmd_ortho,
    "spectrum": _cmd_spectrum,
    "ball": _cmd_ball,
    "var-mc": _cmd_var_mc,
    "sublevel": _cmd_sublevel,
    "chf": _cmd_chf,
    "vdc1d": _cmd_vdc1d,
    "verify": _cmd_verify,
}


# ---- rendering --------------------------------------------------------------------


def _render_json(cfg: RunConfig, report: Report) -> str:
    doc = {
        "schema": SCHEMA,
        "header": {
            "version": VERSION,
            "command": cfg.command,
            "seed": cfg.seed,
            "threads": cfg.threads,
            "flags": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(cfg.options.items())},
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        },
        "body": report.body,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _render_csv(cfg: RunConfig, report: Report) -> str:
    buf = io.StringIO()
    flags = json.dumps(
        {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(cfg.options.items())},
        sort_keys=True,
    )
    buf.write(f"# schema={SCHEMA}\n")
    buf.write(f"# version={VERSION}\n")
    buf.write(f"# command={cfg.command}\n")
    buf.write(f"# seed={cfg.seed}\n")
    buf.write(f"# threads={cfg.threads}\n")
    buf.write(f"# flags={flags}\n")
    buf.write(f"# timestamp={time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime())}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.csv_header)
    writer.writerows(report.csv_rows)
    return buf.getvalue()


def run(cfg: RunConfig) -> int:
    """Execute one configured run; write the report; return the exit code."""
    if cfg.command not in COMMANDS:
        print(f"unknown command {cfg.command!r}", file=sys.stderr)
        return 2
    try:
        report = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (MathFailure, SingularHankelError, PanelBudgetError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1

    for line in report.console:
        print(line)
    text = _render_json(cfg, report) if cfg.format == "json" else _render_csv(cfg, report)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    elif not report.console:
        sys.stdout.write(text)
    return report.exit_code


# ---- argument parsing -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anticonc",
        description="Anti-concentration toolkit: exact spectra, variance bounds, "
        "Monte Carlo estimators, oscillatory integrals.",
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--out", default=None, help="report file (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("ANTICONC_THREADS", "1")),
        help="recorded in the report header; computations are single-threaded",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ortho", help="orthogonal polynomial table and constants")
    p.add_argument("--measure", required=True)
    p.add_argument("--maxdeg", type=int, default=6)

    p = sub.add_parser("spectrum", help="Cov(X^{tensor d}) spectrum report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--measure", default="ball2", help="ball2, product:<spec>, radial:gaussian")
    p.add_argument("--mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--samples", type=int, default=100_000)

    p = sub.add_parser("ball", help="L_p ball moments, samples, norm variance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_frac_arg, default=Fraction(2))
    p.add_argument("--scale", choices=("unit", "iso"), default="unit")
    p.add_argument("--op", choices=("moment", "sample", "var-norm"), default="moment")
    p.add_argument("--samples", type=int, default=100_000)

    for name, extra in (
        ("var-mc", ()),
        ("sublevel", ("eps", "y")),
        ("chf", ("t",)),
    ):
        p = sub.add_parser(name, help=f"{name} Monte Carlo estimator")
        p.add_argument("--poly", required=True)
        p.add_argument("--measure", required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--samples", type=int, default=100_000)
        if "eps" in extra:
            p.add_argument("--eps-min", type=float, default=1e-4)
            p.add_argument("--eps-max", type=float, default=1e-1)
            p.add_argument("--eps-count", type=int, default=10)
        if "y" in extra:
            p.add_argument("--y", type=float, default=0.0)
        if "t" in extra:
            p.add_argument("--t-min", type=float, default=1.0)
            p.add_argument("--t-max", type=float, default=1e3)
            p.add_argument("--t-count", type=int, default=12)

    p = sub.add_parser("vdc1d", help="restricted 1-D oscillatory integral")
    p.add_argument("--poly", required=True)
    p.add_argument("--measure", default="uniform:iso")
    p.add_argument("--k", type=int, default=None, help="derivative order (default: deg f)")
    p.add_argument("--t-min", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=1e3)
    p.add_argument("--t-count", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("verify", help="run the acceptance criteria suite")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    return parser


GLOBAL_KEYS = {"command", "seed", "out", "format", "threads"}


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    options = {k: v for k, v in vars(ns).items() if k not in GLOBAL_KEYS}
    return RunConfig(
        command=ns.command,
        options=options,
        seed=ns.seed,
        out=ns.out,
        format=ns.format,
        threads=ns.threads,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
