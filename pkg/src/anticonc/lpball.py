"""Geometry and probability of L_p balls.

Conventions: the unit ball is {x : sum |x_i|^p <= 1}; the isotropic
ball rescales it by z_{p,n} so that E[X_1^2] = 1 under the uniform
measure.  Sampling follows the representation X = U^{1/n} Z / |Z|_p
with Z i.i.d. p-exponential and U uniform on [0,1].

Norm moments reduce to Gamma-function ratios; these are kept exact
(Fraction) whenever k/p is an integer, which covers every even moment
of the Euclidean ball (z_{2,n}^2 = n+2) and, less obviously, the
isotropic L_1 ball (z_{1,n}^2 = (n+1)(n+2)/2).  Monomial moments in
closed form exist only for p = 2 (sphere and ball); other p are
Monte Carlo territory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .measures import _double_factorial_odd, _gamma_ratio_exact
from .poly import Coeff

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class LpBallSpec:
    """An L_p ball in R^n, either unit or isotropically rescaled."""

    n: int
    p: Fraction
    isotropic: bool = False

    @classmethod
    def unit(cls, n: int, p: Number) -> "LpBallSpec":
        return cls(n, _check_p(p), False)

    @classmethod
    def iso(cls, n: int, p: Number) -> "LpBallSpec":
        return cls(n, _check_p(p), True)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.p < 1:
            raise ValueError("norm exponent must be >= 1")

    @property
    def scale_sq(self) -> Coeff:
        """Squared rescaling factor; exact Fraction when available."""
        if not self.isotropic:
            return Fraction(1)
        return isotropic_scale_sq(self.n, self.p)

    @property
    def scale(self) -> float:
        return math.sqrt(float(self.scale_sq))

    def __str__(self) -> str:
        kind = "iso" if self.isotropic else "unit"
        return f"{kind} L{self.p}-ball in R^{self.n}"


def _check_p(p: Number) -> Fraction:
    q = Fraction(p)
    if q < 1:
        raise ValueError("norm exponent must be >= 1")
    return q


def gamma_ratio_moment(n: int, p: Number, k: int) -> Coeff:
    """E[|Z|_p^k] = Gamma((n+k)/p) / Gamma(n/p) for i.i.d. p-exponential Z.

    Exact Fraction when k/p is an integer (any sign), float via lgamma
    otherwise.  Finiteness requires k > -n.
    """
    pq = _check_p(p)
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if k <= -n:
        raise ValueError(f"moment order {k} not integrable in dimension {n}")
    steps = Fraction(k) / pq
    if steps.denominator == 1:
        if steps >= 0:
            return _gamma_ratio_exact(Fraction(n + k) / pq, Fraction(n) / pq)
        return 1 / _gamma_ratio_exact(Fraction(n) / pq, Fraction(n + k) / pq)
    pf = float(pq)
    return math.exp(math.lgamma((n + k) / pf) - math.lgamma(n / pf))


def marginal_second_moment(n: int, p: Number) -> Coeff:
    """E[X_1^2] for X uniform on the unit L_p ball.

    Radial-plus-cone factorization gives
    (n/(n+2)) * Gamma(3/p) Gamma(n/p) / (Gamma(1/p) Gamma((n+2)/p)).
    """
    num = gamma_ratio_moment(1, p, 2)  # Gamma(3/p)/Gamma(1/p)
    den = gamma_ratio_moment(n, p, 2)  # Gamma((n+2)/p)/Gamma(n/p)
    if isinstance(num, Fraction) and isinstance(den, Fraction):
        return Fraction(n, n + 2) * num / den
    return n / (n + 2) * float(num) / float(den)


def isotropic_scale_sq(n: int, p: Number) -> Coeff:
    """z_{p,n}^2 = 1 / E[X_1^2 under the unit ball]; n+2 at p = 2."""
    m = marginal_second_moment(n, p)
    return 1 / m if isinstance(m, Fraction) else 1.0 / m


def isotropic_scale(n: int, p: Number) -> float:
    """z_{p,n}, the radius making the L_p ball isotropic."""
    return math.sqrt(float(isotropic_scale_sq(n, p)))


def sample_ball(
    spec: LpBallSpec, rng: np.random.Generator, size: Optional[int] = None
) -> np.ndarray:
    """Uniform draws from the ball: shape (n,) or (size, n).

    Z_i = sign * G^{1/p} with G ~ Gamma(1/p, 1) has density prop. to
    e^{-|z|^p}; X = scale * U^{1/n} Z / |Z|_p is uniform on the ball.
    """
    m = 1 if size is None else int(size)
    pf = float(spec.p)
    raw = rng.gamma(1.0 / pf, 1.0, size=(m, spec.n))
    signs = rng.integers(0, 2, size=(m, spec.n)) * 2 - 1
    z = signs * raw ** (1.0 / pf)
    norm = raw.sum(axis=1) ** (1.0 / pf)
    u = rng.random(m) ** (1.0 / spec.n)
    x = spec.scale * (u / norm)[:, None] * z
    return x[0] if size is None else x


def ball_norm_moment(spec: LpBallSpec, k: int) -> Coeff:
    """E[|X|_p^k] = scale^k * n/(n+k); |X|_p/scale is U^{1/n} in law."""
    n = spec.n
    if k <= -n:
        raise ValueError(f"moment order {k} not integrable in dimension {n}")
    base = Fraction(n, n + k)
    s2 = spec.scale_sq
    if k % 2 == 0:
        return base * s2 ** (k // 2) if isinstance(s2, Fraction) else base * float(s2) ** (k // 2)
    if s2 == 1:
        return base
    return float(base) * float(s2) ** (k / 2)


def sphere_monomial_moment(n: int, a: Sequence[int]) -> Fraction:
    """E[x^a] over the uniform probability measure on the Euclidean sphere.

    Zero when any exponent is odd; otherwise
    prod_i (a_i - 1)!! / prod_{j=0}^{|a|/2-1} (n + 2j), exact.
    """
    a = tuple(a)
    if len(a) != n:
        raise ValueError(f"multi-index length {len(a)} != dimension {n}")
    if any(e < 0 for e in a):
        raise ValueError("exponents must be non-negative")
    if any(e % 2 for e in a):
        return Fraction(0)
    half = sum(a) // 2
    num = 1
    for e in a:
        num *= _double_factorial_odd(e)
    den = 1
    for j in range(half):
        den *= n + 2 * j
    return Fraction(num, den)


def ball_monomial_moment(n: int, a: Sequence[int], scale_sq: Number = 1) -> Coeff:
    """E[x^a] for X uniform on the ball of squared radius scale_sq.

    Radial factor n/(n+|a|) times the sphere moment; taking the squared
    scale keeps the result an exact Fraction for the isotropic ball
    (scale_sq = n+2) even though the radius itself is irrational.
    """
    a = tuple(a)
    sphere = sphere_monomial_moment(n, a)
    if sphere == 0:
        return Fraction(0)
    total = sum(a)
    radial = Fraction(n, n + total)
    if isinstance(scale_sq, (int, Fraction)):
        return radial * sphere * Fraction(scale_sq) ** (total // 2)
    return float(radial * sphere) * float(scale_sq) ** (total // 2)


def norm_power_variance(n: int, p: int) -> Coeff:
    """Var(n^{-1/2} |X|_p^p) for X uniform on the isotropic L_p ball.

    Closed form z_{p,n}^{2p} p^2 / ((n+2p)(n+p)^2); equals 4/(n+4) at
    p = 2 and decays like Theta(1/n) for every fixed even p.
    """
    if p < 2 or p != int(p) or int(p) % 2:
        raise ValueError("norm exponent must be an even natural number")
    p = int(p)
    s2 = isotropic_scale_sq(n, p)
    den = (n + 2 * p) * (n + p) ** 2
    if isinstance(s2, Fraction):
        return s2**p * Fraction(p * p, den)
    return float(s2) ** p * p * p / den
