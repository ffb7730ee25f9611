"""End-to-end verification suite for every quantitative claim in scope.

Each criterion is a standalone function returning a one-line detail
string on success and raising CheckFailed (with the offending
quantity) otherwise.  run_criteria executes all ten under a named
profile; verify_all additionally prints one pass/fail line per
criterion, which is the release gate.

Profiles trade Monte Carlo effort for runtime.  Exact-arithmetic
checks (spectra, variance bounds, orthogonal constants) are identical
in both profiles except for the ambient-dimension cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

from .covspectrum import (
    cov_matrix_ball,
    cov_matrix_product,
    gaussian_beta,
    radial_spectrum,
    theoretical_spectrum,
    multilinear_residual,
    verify_eigenstructure,
)
from .estimators import (
    ball_sampler,
    chf_mc,
    decay_exponent_fit,
    product_sampler,
    sublevel_mc,
    variance_mc,
)
from .lpball import LpBallSpec, ball_norm_moment, gamma_ratio_moment, norm_power_variance, sample_ball
from .measures import Measure1D, ProductMeasure, isotropize
from .orthopoly import (
    gram_schmidt,
    legendre_leading_constant_sq,
    logconcave_constant_floor,
    logconcave_product_floor,
    variance_exact,
    variance_lower_bound_sq_exact,
)
from .oscillatory import restricted_oscillatory_integral
from .poly import Poly, coeff_level, coeff_level_sq

# Small-ball normalized ratio P(|f|<=eps) / (d (eps/coeff_d)^{1/d}) and
# 1-D oscillatory ratio |integral| t^{1/k} / (d k): single recorded
# constants, frozen from the seeded reference runs (seed 0: observed
# 0.71 quick / 0.67 full, and 0.32) and asserted with ~2x margin.
SMALLBALL_RATIO_BOUND = 1.5
VDC_RATIO_BOUND = 0.7


class CheckFailed(AssertionError):
    """A criterion's quantitative claim does not hold."""


@dataclass(frozen=True)
class Profile:
    """Effort knobs: dimension cap and per-kind Monte Carlo sizes."""

    name: str
    nmax: int
    moment_samples: int
    variance_samples: int
    sublevel_samples: int
    corpus_samples: int
    chf_samples: int
    random_polys: int
    vdc_polys: int


PROFILES = {
    "quick": Profile("quick", 4, 10**5, 10**5, 10**5, 10**5, 10**5, 250, 8),
    "full": Profile("full", 8, 10**6, 10**6, 10**7, 10**6, 10**6, 1000, 20),
}


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str


def _iso_logconcave_bases():
    return {
        "uniform:iso": isotropize(Measure1D.uniform()),
        "gaussian": Measure1D.gaussian(),
        "laplace:iso": isotropize(Measure1D.laplace()),
        "pexp:1.5:iso": isotropize(Measure1D.p_exponential(Fraction(3, 2))),
        "pexp:3:iso": isotropize(Measure1D.p_exponential(3)),
        "pexp:4:iso": isotropize(Measure1D.p_exponential(4)),
    }


def _require(cond: bool, msg: str):
    if not cond:
        raise CheckFailed(msg)


def _random_poly(rng: np.random.Generator, n: int, dmax: int) -> Poly:
    """Sparse random polynomial with a guaranteed full-degree term."""
    d = int(rng.integers(1, dmax + 1))
    share = np.full(n, 1.0 / n)
    terms = {}
    for _ in range(int(rng.integers(2, 7))):
        deg = int(rng.integers(0, d + 1))
        e = tuple(int(v) for v in rng.multinomial(deg, share))
        num = int(rng.integers(-9, 10))
        terms[e] = Fraction(num if num else 1, int(rng.integers(1, 5)))
    e_top = tuple(int(v) for v in rng.multinomial(d, share))
    terms[e_top] = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5)))
    return Poly(n, terms)


# ---- criteria ---------------------------------------------------------------------


def criterion_1(profile: Profile, seed: int) -> str:
    """Ball spectrum: eigenvalues match exact eta_i with exact multiplicities."""
    worst = 0.0
    spot = dict(theoretical_spectrum(3, 2))
    _require(
        spot == {Fraction(2, 7): 1, Fraction(5, 7): 5},
        f"spot spectrum at n=3, d=2 is {spot}",
    )
    for n in range(2, min(8, profile.nmax) + 1):
        for d in (2, 3, 4):
            bundle = cov_matrix_ball(n, d)
            report = verify_eigenstructure(bundle, theoretical_spectrum(n, d), tol_rel=1e-8)
            worst = max(worst, report.max_rel_dev)
            if d == 2:
                lam1 = float(bundle.c_eigenvalues[0])
                target = 4.0 / (n + 4)
                _require(
                    abs(lam1 - target) <= 1e-8 * target,
                    f"smallest eigenvalue of C at n={n}, d=2 is {lam1}, want {target}",
                )
    return f"n up to {min(8, profile.nmax)}, d in 2..4: max relative deviation {worst:.2e}"


def criterion_2(profile: Profile, seed: int) -> str:
    """Interlacing d! lam_i(S) >= lam_i(C) >= lam_i(S) with 1e-10 slack."""
    slack = 1e-10
    checked = 0
    for n in range(2, min(8, profile.nmax) + 1):
        for d in (2, 3, 4):
            bundle = cov_matrix_ball(n, d)
            fac = math.factorial(d)
            for ls, lc in zip(bundle.eigenvalues, bundle.c_eigenvalues):
                _require(
                    fac * ls >= lc - slack and lc >= ls - slack,
                    f"interlacing fails at n={n}, d={d}: lam(S)={ls}, lam(C)={lc}",
                )
                checked += 1
    return f"{checked} eigenvalue pairs satisfy the sandwich"


def criterion_3(profile: Profile, seed: int) -> str:
    """Eigenvalue floor 1/(d+1)! and multilinear eta_0-eigenvectors."""
    worst_resid = 0.0
    for d in (3, 4):
        floor = Fraction(1, math.factorial(d + 1))
        for n in range(3, min(8, profile.nmax) + 1):
            pairs = theoretical_spectrum(n, d)
            for eta, _ in pairs:
                _require(eta >= floor, f"eta={eta} below 1/{d + 1}! at n={n}, d={d}")
            bundle = cov_matrix_ball(n, d)
            lo = float(bundle.eigenvalues[0])
            _require(
                lo >= float(floor) * (1 - 1e-8),
                f"numerical eigenvalue {lo} below floor {float(floor)} at n={n}, d={d}",
            )
            if n >= d:
                resid = multilinear_residual(bundle, pairs[0][0])
                _require(resid < 1e-9, f"multilinear residual {resid} at n={n}, d={d}")
                worst_resid = max(worst_resid, resid)
    return f"floors hold exactly; worst multilinear residual {worst_resid:.2e}"


def criterion_4(profile: Profile, seed: int) -> str:
    """Orthogonal constants: Legendre closed form and log-concave floor."""
    legendre = gram_schmidt(Measure1D.uniform(), 10)
    for d in range(11):
        closed = legendre_leading_constant_sq(d)
        _require(
            legendre.c_sq(d) == closed,
            f"Legendre c^2 at degree {d}: {legendre.c_sq(d)} != {closed}",
        )
        _require(
            abs(legendre.c(d) - math.sqrt(float(closed))) <= 1e-12,
            f"Legendre c float mismatch at degree {d}",
        )
        _require(closed >= Fraction(1, 4**d), f"Legendre c below 2^-d at degree {d}")
    for name, mu in _iso_logconcave_bases().items():
        system = gram_schmidt(mu, 8)
        for d in range(9):
            floor_sq = logconcave_constant_floor(d) ** 2
            _require(
                system.c_sq(d) >= floor_sq,
                f"{name}: c^2 at degree {d} is {float(system.c_sq(d)):.3e}, "
                f"below the log-concave floor {float(floor_sq):.3e}",
            )
    return "Legendre exact to d=10; six isotropic bases above (1/9) 18^-d to d=8"


def criterion_5(profile: Profile, seed: int) -> str:
    """Exact Var >= bound on a random corpus, plus the 2^-15d content floor."""
    rng = np.random.default_rng(seed)
    bases = list(_iso_logconcave_bases().values())
    systems = [gram_schmidt(mu, 4) for mu in bases]
    nmax = min(6, profile.nmax)
    checked = 0
    for trial in range(profile.random_polys):
        pick = trial % len(bases)
        n = int(rng.integers(1, nmax + 1))
        f = _random_poly(rng, n, 4)
        d = f.degree
        var = variance_exact(f, ProductMeasure(bases[pick], n))
        bound = variance_lower_bound_sq_exact(f, systems[pick])
        _require(var >= bound, f"variance {var} below bound {bound} (trial {trial})")
        floor = coeff_level_sq(f, d) * logconcave_product_floor(d)
        _require(var >= floor, f"variance {var} below content floor {floor} (trial {trial})")
        checked += 1
    return f"{checked} random polynomials, zero violations of either bound"


def criterion_6(profile: Profile, seed: int) -> str:
    """Gamma-ratio norm moments and ball moments agree with MC at 4 sigma."""
    N = profile.moment_samples
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in (1, 2, 4):
        for n in (3, 8):
            if n > profile.nmax:
                continue
            g = rng.gamma(1.0 / p, 1.0, size=(N, n)).sum(axis=1)
            for k in (2, p):
                y = g ** (k / p)
                target = float(gamma_ratio_moment(n, p, k))
                z = abs(y.mean() - target) / (y.std() / math.sqrt(N))
                _require(z <= 4.0, f"E||Z||_{p}^{k} off by {z:.1f} sigma at n={n}")
                worst = max(worst, z)
            unit = LpBallSpec.unit(n, p)
            s = (np.abs(sample_ball(unit, rng, N)) ** p).sum(axis=1)
            target = float(ball_norm_moment(unit, p))
            z = abs(s.mean() - target) / (s.std() / math.sqrt(N))
            _require(z <= 4.0, f"E||X||_{p}^{p} off by {z:.1f} sigma at n={n}")
            iso = LpBallSpec.iso(n, p)
            x1sq = sample_ball(iso, rng, N)[:, 0] ** 2
            z = abs(x1sq.mean() - 1.0) / (x1sq.std() / math.sqrt(N))
            _require(z <= 4.0, f"isotropic E[X_1^2] off by {z:.1f} sigma at n={n}, p={p}")
            worst = max(worst, z)
    return f"all moment checks within 4 sigma (worst {worst:.2f})"


def criterion_7(profile: Profile, seed: int) -> str:
    """Norm-power variance: exact at p=2, MC at p=4, decreasing in n."""
    for n in (4, 8, 16, 32):
        _require(
            norm_power_variance(n, 2) == Fraction(4, n + 4),
            f"norm_power_variance({n}, 2) != 4/(n+4)",
        )
    for p in (2, 4):
        vals = [norm_power_variance(n, p) for n in (4, 8, 16, 32)]
        _require(
            all(a > b for a, b in zip(vals, vals[1:])),
            f"sequence not decreasing at p={p}: {[float(v) for v in vals]}",
        )
    n, p = 8, 4
    f = Poly(n, {tuple(4 if j == i else 0 for j in range(n)): Fraction(1) for i in range(n)})
    r = variance_mc(f, ball_sampler(LpBallSpec.iso(n, p)), profile.variance_samples, seed)
    target = float(norm_power_variance(n, p))
    z = abs(r.value / n - target) / (r.stderr / n)
    _require(z <= 4.0, f"MC variance at p=4, n=8 off by {z:.1f} sigma")
    return f"exact p=2 values, decreasing sequences, MC match at {z:.2f} sigma"


def criterion_8(profile: Profile, seed: int) -> str:
    """Sublevel scaling: 1/d slopes and the recorded small-ball constant."""
    mu = isotropize(Measure1D.uniform())
    one = ProductMeasure(mu, 1)
    epss = list(np.geomspace(1e-4, 1e-1, 10))
    for d in (1, 2, 3):
        f = Poly(1, {(d,): Fraction(1)})
        vals, errs = [], []
        for i, eps in enumerate(epss):
            r = sublevel_mc(f, product_sampler(one), eps, 0.0, profile.sublevel_samples, seed + 31 * d + i)
            vals.append(r.value)
            errs.append(r.stderr)
        slope = decay_exponent_fit(epss, vals, errs)
        _require(abs(slope - 1 / d) <= 0.05, f"slope {slope:.4f} for x^{d}, want {1 / d:.4f}")

    rng = np.random.default_rng(seed)
    worst = 0.0
    corpus = 50
    for trial in range(corpus):
        n = int(rng.integers(1, min(4, profile.nmax) + 1))
        f = _random_poly(rng, n, 4)
        d = f.degree
        cd = coeff_level(f, d)
        pm = ProductMeasure(mu, n)
        for j, eps in enumerate((0.3, 0.1, 0.03, 0.01)):
            r = sublevel_mc(f, product_sampler(pm), eps, 0.0, profile.corpus_samples, seed + 101 * trial + j)
            if r.value * r.samples < 100:
                continue
            ratio = r.value / (d * (eps / cd) ** (1 / d))
            worst = max(worst, ratio)
    _require(
        worst <= SMALLBALL_RATIO_BOUND,
        f"small-ball ratio {worst:.3f} exceeds recorded constant {SMALLBALL_RATIO_BOUND}",
    )
    return f"slopes 1/d within 0.05; corpus ratio {worst:.2f} <= {SMALLBALL_RATIO_BOUND}"


def criterion_9(profile: Profile, seed: int) -> str:
    """Fourier decay: closed-form slopes, dimension-free sup, vdc constant."""
    # closed-form sinc envelope: max per log-window kills the zeros
    ts = np.geomspace(10.0, 1e4, 400)
    vals = np.abs(np.sinc(math.sqrt(3.0) * ts / math.pi))
    env_t, env_v = [], []
    for block in np.array_split(np.arange(len(ts)), 25):
        k = block[np.argmax(vals[block])]
        env_t.append(ts[k])
        env_v.append(vals[k])
    slope = decay_exponent_fit(env_t, env_v)
    _require(abs(slope + 1.0) <= 0.1, f"sinc envelope slope {slope:.3f}, want -1")
    ts2 = np.geomspace(10.0, 1e4, 25)
    slope2 = decay_exponent_fit(ts2, (1.0 + 4.0 * ts2**2) ** -0.25)
    _require(abs(slope2 + 0.5) <= 0.1, f"gaussian-square slope {slope2:.3f}, want -1/2")

    # dimension-free normalized sup must not degrade from n=2 to n=8
    mu = isotropize(Measure1D.uniform())
    tgrid = list(np.geomspace(0.5, 50.0, 12))
    sups = {}
    for n in (2, min(8, profile.nmax)):
        f = Poly(n, {tuple(2 if j == i else 0 for j in range(n)): Fraction(1) for i in range(n)})
        reports = chf_mc(f, product_sampler(ProductMeasure(mu, n)), tgrid, profile.chf_samples, seed + n)
        weighted = [(r.value * math.sqrt(t) / 2, r.stderr * math.sqrt(t) / 2) for t, r in zip(tgrid, reports)]
        k = max(range(len(weighted)), key=lambda i: weighted[i][0])
        sups[n] = weighted[k]
    (lo_v, lo_e), (hi_v, hi_e) = sups[2], sups[min(8, profile.nmax)]
    _require(
        hi_v <= 2 * lo_v + 4 * (hi_e + 2 * lo_e),
        f"normalized sup grew from {lo_v:.4f} (n=2) to {hi_v:.4f}",
    )

    # 1-D restricted oscillatory family against the recorded constant
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(profile.vdc_polys):
        deg = int(rng.integers(2, 6))
        coeffs = {}
        for m in range(deg):
            num = int(rng.integers(-2, 3))
            if num:
                coeffs[(m,)] = Fraction(num, int(rng.integers(1, 3)))
        coeffs[(deg,)] = Fraction(int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        f = Poly(1, coeffs)
        k = int(rng.integers(1, deg + 1))
        for t in (1.0, 10.0, 100.0, 1000.0):
            val = abs(restricted_oscillatory_integral(f, mu, k, t))
            worst = max(worst, val * t ** (1 / k) / (deg * k))
    _require(
        worst <= VDC_RATIO_BOUND,
        f"oscillatory ratio {worst:.3f} exceeds recorded constant {VDC_RATIO_BOUND}",
    )
    return f"slopes ok; sup {hi_v:.3f} <= 2x {lo_v:.3f}; vdc ratio {worst:.2f} <= {VDC_RATIO_BOUND}"


def criterion_10(profile: Profile, seed: int) -> str:
    """Radial gaussian spectrum is identically 1 and matches the product run."""
    for n in (4, 6, 8):
        if n > max(4, profile.nmax):
            continue
        beta = [gaussian_beta(n, q) for q in range(3)]
        pairs = radial_spectrum(n, 2, beta)
        _require(pairs[1][0] == 1, f"eta_1 for the gaussian at n={n} is {pairs[1][0]}")
        _require(all(eta == 1 for eta, _ in pairs), f"gaussian d=2 spectrum not flat at n={n}")
        bundle = cov_matrix_product(ProductMeasure(Measure1D.gaussian(), n), 2)
        verify_eigenstructure(bundle, pairs, tol_rel=1e-8)
    return "gaussian eta_1 = 1 exactly; product-measure eigenvalues match to 1e-8"


CRITERIA: List[Callable[[Profile, int], str]] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
]

NAMES = [
    "ball tensor spectrum",
    "spectrum interlacing",
    "eigenvalue floor",
    "orthogonal constants",
    "variance lower bound",
    "lp moments and sampling",
    "norm-power variance",
    "sublevel scaling",
    "fourier decay",
    "radial generalization",
]


def run_criteria(profile_name: str, seed: int = 0) -> List[CriterionResult]:
    """Run all criteria; mathematical failures become failed results."""
    if profile_name not in PROFILES:
        raise ValueError(f"unknown profile {profile_name!r}; choose from {sorted(PROFILES)}")
    profile = PROFILES[profile_name]
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        try:
            detail = fn(profile, seed + i)
            results.append(CriterionResult(i, NAMES[i - 1], True, detail))
        except (CheckFailed, ValueError, ArithmeticError, RuntimeError) as exc:
            results.append(CriterionResult(i, NAMES[i - 1], False, str(exc)))
    return results


def verify_all(profile_name: str, seed: int = 0, emit: Optional[Callable[[str], None]] = None) -> List[CriterionResult]:
    """Run the suite and print one pass/fail line per criterion."""
    emit = emit or print
    results = run_criteria(profile_name, seed)
    for r in results:
        emit(f"criterion {r.index:2d} [{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    failed = sum(1 for r in results if not r.passed)
    emit(f"{len(results) - failed}/{len(results)} criteria passed ({profile_name} profile)")
    return results
