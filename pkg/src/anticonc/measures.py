"""One-dimensional reference measures and their tensor products.

Four kinds, all with every moment finite and an infinitely-supported
density, so moment Hankel matrices are positive definite:

- ``uniform``: Uniform on [a, b]
- ``gaussian``: Normal(mean, variance)
- ``pexp``: density proportional to exp(-|x|^p), p >= 1
- ``laplace``: density exp(-|x|/b) / (2b)

Isotropization (center, rescale to unit variance) is stored as a flag
on top of exact base parameters rather than as scaled parameters: the
scale factors are square roots (sqrt(3), 1/sqrt(2), ...), but the
isotropized even moments have closed rational forms independent of
the base scale (uniform: 3^(k/2)/(k+1), Gaussian: (k-1)!!, Laplace:
k!/2^(k/2)), which keeps downstream variance bounds exact.

For the p-exponential family the moments are Gamma-function ratios
and generally irrational; ``moment`` returns floats there, and
``moment_rational`` returns a 50-digit rational approximation for the
exact-arithmetic orthogonalization path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

import numpy as np

from .poly import Coeff, Exponent

KINDS = ("uniform", "gaussian", "pexp", "laplace")

_MP_DPS = 50  # decimal digits for rationalized irrational moments


@dataclass(frozen=True)
class Measure1D:
    """A base kind with exact rational parameters plus an isotropize flag."""

    kind: str
    params: Tuple[Fraction, ...]
    iso: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")

    # ---- constructors -------------------------------------------------

    @staticmethod
    def uniform(a=-1, b=1) -> "Measure1D":
        a, b = Fraction(a), Fraction(b)
        if not a < b:
            raise ValueError(f"need a < b, got [{a}, {b}]")
        return Measure1D("uniform", (a, b))

    @staticmethod
    def gaussian(mean=0, variance=1) -> "Measure1D":
        variance = Fraction(variance)
        if variance <= 0:
            raise ValueError("variance must be positive")
        return Measure1D("gaussian", (Fraction(mean), variance))

    @staticmethod
    def p_exponential(p) -> "Measure1D":
        p = Fraction(p)
        if p < 1:
            raise ValueError("p must be >= 1")
        return Measure1D("pexp", (p,))

    @staticmethod
    def laplace(scale=1) -> "Measure1D":
        scale = Fraction(scale)
        if scale <= 0:
            raise ValueError("scale must be positive")
        return Measure1D("laplace", (scale,))

    # ---- description ----------------------------------------------------

    @property
    def symmetric(self) -> bool:
        """Whether the measure is symmetric about 0."""
        if self.iso:
            return True
        if self.kind == "uniform":
            a, b = self.params
            return a == -b
        if self.kind == "gaussian":
            return self.params[0] == 0
        return True

    def mean(self) -> Coeff:
        if self.iso:
            return Fraction(0)
        if self.kind == "uniform":
            a, b = self.params
            return (a + b) / 2
        if self.kind == "gaussian":
            return self.params[0]
        return Fraction(0)

    def variance(self) -> Coeff:
        """Exact for uniform/gaussian/laplace; float for pexp."""
        if self.iso:
            return Fraction(1)
        if self.kind == "uniform":
            a, b = self.params
            return (b - a) ** 2 / 12
        if self.kind == "gaussian":
            return self.params[1]
        if self.kind == "laplace":
            return 2 * self.params[0] ** 2
        p = self.params[0]
        return float(_pexp_raw_moment_mp(p, 2))

    def __str__(self) -> str:
        base = {
            "uniform": lambda: f"uniform[{self.params[0]},{self.params[1]}]",
            "gaussian": lambda: f"gaussian({self.params[0]},{self.params[1]})",
            "pexp": lambda: f"pexp(p={self.params[0]})",
            "laplace": lambda: f"laplace(scale={self.params[0]})",
        }[self.kind]()
        return base + (" iso" if self.iso else "")


def isotropize(mu: Measure1D) -> Measure1D:
    """Affine image with mean 0, variance 1."""
    var = mu.variance()
    if var == 0:
        raise ValueError("cannot isotropize a zero-variance measure")
    if mu.iso:
        return mu
    if mu.kind == "gaussian" and mu.params == (Fraction(0), Fraction(1)):
        return mu  # already isotropic
    return Measure1D(mu.kind, mu.params, iso=True)


# ---- moments ---------------------------------------------------------------


def _pexp_raw_moment_mp(p: Fraction, k: int):
    """E|X|^k-type raw moment Gamma((k+1)/p) / Gamma(1/p) via mpmath."""
    import mpmath

    with mpmath.workdps(_MP_DPS):
        return mpmath.gamma(Fraction(k + 1) / p) / mpmath.gamma(Fraction(1) / p)


def _mp_to_fraction(x) -> Fraction:
    import mpmath

    with mpmath.workdps(_MP_DPS):
        return Fraction(mpmath.nstr(x, _MP_DPS - 5, strip_zeros=False))


def _double_factorial_odd(k: int) -> int:
    """(k-1)!! for even k: 1*3*5*...*(k-1)."""
    out = 1
    for j in range(1, k, 2):
        out *= j
    return out


def moment(mu: Measure1D, k: int) -> Coeff:
    """E[X^k]; exact Fraction where a rational closed form exists, else float.

    Closed forms: uniform (b^{k+1}-a^{k+1})/((k+1)(b-a)); Gaussian
    double factorial (plus binomial shift for nonzero mean); Laplace
    k! b^k for even k; p-exponential Gamma((k+1)/p)/Gamma(1/p) for
    even k (rational only when p | k, e.g. p=2).
    """
    if k < 0:
        raise ValueError("moment order must be >= 0")
    if k == 0:
        return Fraction(1)

    if mu.iso:
        if k % 2 == 1:
            return Fraction(0)
        if mu.kind == "uniform":
            # central moments h^k/(k+1) with sigma^2 = h^2/3: scale cancels
            return Fraction(3) ** (k // 2) / (k + 1)
        if mu.kind == "gaussian":
            return Fraction(_double_factorial_odd(k))
        if mu.kind == "laplace":
            # k! b^k with b = 1/sqrt(2): k!/2^(k/2)
            return Fraction(math.factorial(k), 2 ** (k // 2))
        p = mu.params[0]
        m2 = _pexp_raw_moment_mp(p, 2)
        mk = _pexp_raw_moment_mp(p, k)
        return float(mk / m2 ** (k // 2))

    if mu.kind == "uniform":
        a, b = mu.params
        return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))
    if mu.kind == "gaussian":
        mean, var = mu.params
        if mean == 0:
            return Fraction(0) if k % 2 else _double_factorial_odd(k) * var ** (k // 2)
        total = Fraction(0)
        for j in range(0, k + 1, 2):
            total += (
                math.comb(k, j)
                * _double_factorial_odd(j)
                * var ** (j // 2)
                * mean ** (k - j)
            )
        return total
    if mu.kind == "laplace":
        if k % 2 == 1:
            return Fraction(0)
        return math.factorial(k) * mu.params[0] ** k
    # pexp
    if k % 2 == 1:
        return Fraction(0)
    p = mu.params[0]
    if k % p == 0:
        # Gamma((k+1)/p)/Gamma(1/p) with integer argument gap: rational
        return _gamma_ratio_exact(Fraction(k + 1, 1) / p, Fraction(1, 1) / p)
    return float(_pexp_raw_moment_mp(p, k))


def _gamma_ratio_exact(a: Fraction, b: Fraction) -> Fraction:
    """Gamma(a)/Gamma(b) when a - b is a non-negative integer."""
    gap = a - b
    if gap.denominator != 1 or gap < 0:
        raise ValueError("exact Gamma ratio needs a - b a non-negative integer")
    out = Fraction(1)
    for j in range(int(gap)):
        out *= b + j
    return out


def moment_rational(mu: Measure1D, k: int) -> Fraction:
    """E[X^k] as an exact Fraction, rationalizing irrational values at 50 digits.

    Feeds the exact-arithmetic Gram-Schmidt path; for measures whose
    moments are already rational this is just ``moment``.
    """
    m = moment(mu, k)
    if isinstance(m, Fraction):
        return m
    # pexp with irrational moments: recompute at high precision
    import mpmath

    p = mu.params[0]
    with mpmath.workdps(_MP_DPS):
        mk = _pexp_raw_moment_mp(p, k)
        if mu.iso:
            m2 = _pexp_raw_moment_mp(p, 2)
            mk = mk / m2 ** (k // 2)
        return _mp_to_fraction(mk)


# ---- density, support, sampling --------------------------------------------


def _sigma_shift(mu: Measure1D) -> Tuple[float, float]:
    """(mean, sigma) of the base kind, as floats, for the iso transform."""
    base = Measure1D(mu.kind, mu.params, iso=False)
    return float(base.mean()), math.sqrt(float(base.variance()))


def density(mu: Measure1D, x) -> np.ndarray:
    """Density at x (vectorized); isotropized kinds via the affine image."""
    x = np.asarray(x, dtype=float)
    if mu.iso:
        mean, sigma = _sigma_shift(mu)
        base = Measure1D(mu.kind, mu.params, iso=False)
        return sigma * density(base, sigma * x + mean)
    if mu.kind == "uniform":
        a, b = (float(v) for v in mu.params)
        return np.where((x >= a) & (x <= b), 1.0 / (b - a), 0.0)
    if mu.kind == "gaussian":
        mean, var = (float(v) for v in mu.params)
        return np.exp(-((x - mean) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var)
    if mu.kind == "laplace":
        b = float(mu.params[0])
        return np.exp(-np.abs(x) / b) / (2 * b)
    p = float(mu.params[0])
    z = 2 * math.gamma(1 + 1 / p)
    return np.exp(-np.abs(x) ** p) / z


def support(mu: Measure1D) -> Tuple[float, float]:
    if mu.kind == "uniform":
        if mu.iso:
            return (-math.sqrt(3.0), math.sqrt(3.0))
        return (float(mu.params[0]), float(mu.params[1]))
    return (-math.inf, math.inf)


def effective_window(mu: Measure1D, tail: float = 1e-12) -> Tuple[float, float]:
    """Window losing less than ``tail`` mass per side (exact support for uniform).

    All unbounded kinds are symmetric about their center, so a
    half-width found by doubling + bisection on the upper tail covers
    both sides.
    """
    if mu.kind == "uniform":
        return support(mu)
    if mu.iso:
        mean, sigma = _sigma_shift(mu)
        base = Measure1D(mu.kind, mu.params, iso=False)
        lo, hi = effective_window(base, tail)
        return ((lo - mean) / sigma, (hi - mean) / sigma)
    center = float(mu.mean())

    def upper(w: float) -> float:
        return _upper_tail(mu, center + w)

    w = 1.0
    while upper(w) > tail / 2 and w < 1e9:
        w *= 2
    lo, hi = w / 2, w
    for _ in range(200):
        mid = (lo + hi) / 2
        if upper(mid) > tail / 2:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9 * max(hi, 1.0):
            break
    return (center - hi, center + hi)


def _upper_tail(mu: Measure1D, w: float) -> float:
    """P(X > w) for the base (non-iso) measure."""
    if mu.kind == "gaussian":
        mean, var = (float(v) for v in mu.params)
        return 0.5 * math.erfc((w - mean) / math.sqrt(2 * var))
    if mu.kind == "laplace":
        b = float(mu.params[0])
        return 0.5 * math.exp(-abs(w) / b) if w >= 0 else 1 - 0.5 * math.exp(-abs(w) / b)
    if mu.kind == "pexp":
        import mpmath

        p = float(mu.params[0])
        if w <= 0:
            return 1.0
        # upper incomplete Gamma(1/p, w^p) / (2 Gamma(1/p))
        g = mpmath.gammainc(1.0 / p, w**p)
        return float(g / (2 * mpmath.gamma(1.0 / p)))
    raise ValueError(mu.kind)


def sample(mu: Measure1D, rng: np.random.Generator, size=None) -> np.ndarray:
    """I.i.d. draws; p-exponential via sign * Gamma(1/p, 1)^(1/p)."""
    if mu.kind == "uniform":
        a, b = (float(v) for v in mu.params)
        x = rng.uniform(a, b, size=size)
    elif mu.kind == "gaussian":
        mean, var = (float(v) for v in mu.params)
        x = mean + math.sqrt(var) * rng.standard_normal(size=size)
    elif mu.kind == "laplace":
        x = rng.laplace(0.0, float(mu.params[0]), size=size)
    else:
        p = float(mu.params[0])
        g = rng.gamma(1.0 / p, 1.0, size=size)
        signs = rng.integers(0, 2, size=size) * 2 - 1
        x = signs * g ** (1.0 / p)
    if mu.iso:
        mean, sigma = _sigma_shift(mu)
        x = (x - mean) / sigma
    return x


# ---- product measures -------------------------------------------------------


@dataclass(frozen=True)
class ProductMeasure:
    """n-fold tensor power of a base measure."""

    base: Measure1D
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")


def product_moment(pm: ProductMeasure, I: Exponent) -> Coeff:
    """E[x^I] under the product measure: product of 1-D moments."""
    if len(I) != pm.n:
        raise ValueError(f"multi-index length {len(I)} != n {pm.n}")
    out: Coeff = Fraction(1)
    for k in I:
        if k:
            out = out * moment(pm.base, k)
            if out == 0:
                return Fraction(0)
    return out


def sample_product(pm: ProductMeasure, rng: np.random.Generator, size: int) -> np.ndarray:
    """(size, n) array of i.i.d. coordinates."""
    return sample(pm.base, rng, size=(size, pm.n))


# ---- CLI measure spec strings ------------------------------------------------


def parse_measure(spec: str) -> Measure1D:
    """Parse "uniform", "gaussian", "pexp:<p>", "laplace", with optional ":iso".

    Bases: uniform = Uniform(-1,1), gaussian = Normal(0,1),
    laplace = Laplace(scale 1).
    """
    parts = spec.strip().lower().split(":")
    iso = False
    if parts and parts[-1] == "iso":
        iso = True
        parts = parts[:-1]
    if not parts or not parts[0]:
        raise ValueError(f"empty measure spec {spec!r}")
    kind, args = parts[0], parts[1:]
    if kind == "uniform" and not args:
        mu = Measure1D.uniform(-1, 1)
    elif kind == "gaussian" and not args:
        mu = Measure1D.gaussian(0, 1)
    elif kind == "laplace" and not args:
        mu = Measure1D.laplace(1)
    elif kind == "pexp" and len(args) == 1:
        mu = Measure1D.p_exponential(Fraction(args[0]))
    else:
        raise ValueError(f"bad measure spec {spec!r}")
    return isotropize(mu) if iso else mu
