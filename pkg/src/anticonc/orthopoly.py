"""Orthonormal polynomial systems for a 1-D measure and variance bounds.

Gram-Schmidt on {1, x, x^2, ...} in L2(mu) is computed as a
square-root-free LDL^T factorization of the moment Hankel matrix
H[i][j] = m_{i+j} in exact rational arithmetic:

    H = L D L^T,  L unit lower triangular, D positive diagonal.

Row d of L^{-1} holds the coefficients of the monic orthogonal
polynomial q_d, and D_d = <q_d, q_d> is the squared residual norm, so
the leading constant c_{mu,d} = sqrt(D_d) exactly satisfies both of
its characterizations (residual norm of x^d minus its projection, and
reciprocal of the leading coefficient of the orthonormal p_d).  No
square root ever enters the elimination, so the whole pipeline stays
in Q; measures with irrational moments are handled by rationalizing
the moments at 50 digits first (see measures.moment_rational), which
keeps orthonormality residuals around 1e-45, far below the 1e-10
tolerance the float path is held to.

A positive pivot failing signals a numerically singular Hankel matrix
(near-finite support); the error reports a float condition estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .measures import Measure1D, ProductMeasure, moment_rational
from .poly import Coeff, Poly


@dataclass(frozen=True)
class OrthoSystem:
    """Triangular coefficient table of p_0..p_D plus the constants c_{mu,d}.

    ``monic[d]`` holds exact coefficients of the monic orthogonal q_d
    (ascending powers, length d+1, leading coefficient 1); ``norm2[d]``
    is the exact squared norm <q_d, q_d> = c_{mu,d}^2.  The orthonormal
    p_d = q_d / sqrt(norm2[d]) is available in float via ``coeff_table``.
    """

    measure: Measure1D
    maxdeg: int
    monic: List[List[Fraction]]
    norm2: List[Fraction]

    def c(self, d: int) -> float:
        """Leading constant c_{mu,d} = <p_d, x^d> = residual norm."""
        return math.sqrt(self.c_sq(d))

    def c_sq(self, d: int) -> Fraction:
        """Exact c_{mu,d}^2."""
        if not 0 <= d <= self.maxdeg:
            raise ValueError(f"degree {d} outside table (maxdeg {self.maxdeg})")
        return self.norm2[d]

    def constants(self) -> List[float]:
        return [self.c(d) for d in range(self.maxdeg + 1)]

    def coeff_table(self) -> List[List[float]]:
        """Float coefficients of the orthonormal p_d, ascending powers."""
        out = []
        for d in range(self.maxdeg + 1):
            s = math.sqrt(self.norm2[d])
            out.append([float(a) / s for a in self.monic[d]])
        return out

    def orthonormal_poly(self, d: int) -> Poly:
        """p_d as a float-coefficient 1-variable polynomial."""
        row = self.coeff_table()[d]
        return Poly(1, {(k,): a for k, a in enumerate(row) if a != 0.0})

    def monic_poly(self, d: int) -> Poly:
        """q_d as an exact 1-variable polynomial."""
        return Poly(1, {(k,): a for k, a in enumerate(self.monic[d]) if a != 0})

    def inner_monomial(self, d: int, k: int) -> float:
        """<p_d, x^k> in L2(mu), via the rationalized moment table."""
        mom = [moment_rational(self.measure, j) for j in range(d + k + 1)]
        s = sum(a * mom[j + k] for j, a in enumerate(self.monic[d]))
        return float(s) / math.sqrt(self.norm2[d])


class SingularHankelError(ValueError):
    """Moment Hankel matrix is not numerically positive definite."""

    def __init__(self, degree: int, cond_estimate: float):
        super().__init__(
            f"Hankel pivot at degree {degree} is not positive "
            f"(condition estimate {cond_estimate:.3e}); measure too close to finite support"
        )
        self.degree = degree
        self.cond_estimate = cond_estimate


def gram_schmidt(mu: Measure1D, maxdeg: int) -> OrthoSystem:
    """Orthonormal system p_0..p_maxdeg for mu, exact through LDL^T."""
    if maxdeg < 0:
        raise ValueError("maxdeg must be >= 0")
    size = maxdeg + 1
    m = [moment_rational(mu, k) for k in range(2 * maxdeg + 1)]
    H = [[m[i + j] for j in range(size)] for i in range(size)]

    L = [[Fraction(0)] * size for _ in range(size)]
    D: List[Fraction] = [Fraction(0)] * size
    for i in range(size):
        for j in range(i):
            s = H[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            L[i][j] = s / D[j]
        L[i][i] = Fraction(1)
        piv = H[i][i] - sum(L[i][k] ** 2 * D[k] for k in range(i))
        if piv <= 0:
            raise SingularHankelError(i, _cond_estimate(H))
        D[i] = piv

    # rows of L^{-1} are the monic orthogonal polynomials
    Linv = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        Linv[i][i] = Fraction(1)
        for j in range(i - 1, -1, -1):
            Linv[i][j] = -sum(L[k][j] * Linv[i][k] for k in range(j + 1, i + 1))
    monic = [Linv[d][: d + 1] for d in range(size)]
    return OrthoSystem(mu, maxdeg, monic, D)


def _cond_estimate(H: List[List[Fraction]]) -> float:
    import numpy as np

    A = np.array([[float(v) for v in row] for row in H])
    try:
        return float(np.linalg.cond(A))
    except np.linalg.LinAlgError:
        return math.inf


def gram_schmidt_iterative(mu: Measure1D, maxdeg: int) -> OrthoSystem:
    """Textbook projection Gram-Schmidt in exact arithmetic (test oracle).

    q_d = x^d - sum_{e<d} (<x^d, q_e>/<q_e,q_e>) q_e, evaluated through
    the same rationalized moment table as :func:`gram_schmidt`; the two
    must agree exactly.
    """
    m = [moment_rational(mu, k) for k in range(2 * maxdeg + 1)]

    def inner(a: List[Fraction], b: List[Fraction]) -> Fraction:
        return sum(
            ai * bj * m[i + j] for i, ai in enumerate(a) for j, bj in enumerate(b)
        )

    monic: List[List[Fraction]] = []
    norm2: List[Fraction] = []
    for d in range(maxdeg + 1):
        q = [Fraction(0)] * d + [Fraction(1)]
        for e in range(d):
            coef = inner(q, monic[e]) / norm2[e]
            q = [qi - coef * (monic[e][i] if i < len(monic[e]) else 0) for i, qi in enumerate(q)]
        monic.append(q)
        norm2.append(inner(q, q))
    return OrthoSystem(mu, maxdeg, monic, norm2)


# ---- closed-form constants ---------------------------------------------------


def legendre_leading_constant_sq(d: int) -> Fraction:
    """Exact square of the Uniform(-1,1) leading constant.

    c_d = (1/sqrt(2d+1)) * 2^d (d!)^2 / (2d)!, so
    c_d^2 = 4^d (d!)^4 / ((2d+1) ((2d)!)^2).
    """
    if d < 0:
        raise ValueError("degree must be >= 0")
    return Fraction(4**d * math.factorial(d) ** 4, (2 * d + 1) * math.factorial(2 * d) ** 2)


def legendre_leading_constant(d: int) -> float:
    return math.sqrt(legendre_leading_constant_sq(d))


def logconcave_constant_floor(d: int) -> Fraction:
    """Universal floor (1/9) 18^{-d} on c_{mu,d} for isotropic log-concave mu."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    return Fraction(1, 9 * 18**d)


def logconcave_product_floor(d: int) -> Fraction:
    """Product-measure variance constant 2^{-15d} for isotropic log-concave bases."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    return Fraction(1, 2 ** (15 * d))


# ---- variances ----------------------------------------------------------------


def variance_exact(f: Poly, pm: ProductMeasure) -> Coeff:
    """Var(f(X)) under the product measure, in exact rational arithmetic.

    Uses the same rationalized moment table as :func:`gram_schmidt`, so
    comparisons against :func:`variance_lower_bound_sq_exact` are exact
    (both sides live over one positive-definite moment sequence).
    """
    if f.nvars != pm.n:
        raise ValueError(f"polynomial has {f.nvars} variables, measure has {pm.n}")
    terms = list(f.terms.items())
    # per-coordinate moment cache keyed by order
    maxord = 2 * max((sum(e) for e, _ in terms), default=0)
    mom = [moment_rational(pm.base, k) for k in range(maxord + 1)]

    def pmom(e) -> Coeff:
        out: Coeff = Fraction(1)
        for k in e:
            if k:
                out = out * mom[k]
                if out == 0:
                    return out
        return out

    mean: Coeff = Fraction(0)
    second: Coeff = Fraction(0)
    for i, (e1, c1) in enumerate(terms):
        mean = mean + c1 * pmom(e1)
        for j, (e2, c2) in enumerate(terms):
            if j < i:
                continue
            v = c1 * c2 * pmom(tuple(a + b for a, b in zip(e1, e2)))
            second = second + (v if j == i else 2 * v)
    return second - mean * mean


def variance_lower_bound_sq_exact(f: Poly, sys: OrthoSystem) -> Coeff:
    """Exact value of sum_{|I|=d} alpha_I^2 prod_i c_{mu,I_i}^2, d = deg f."""
    if f.is_zero():
        return Fraction(0)
    d = f.degree
    if d > sys.maxdeg:
        raise ValueError(f"OrthoSystem maxdeg {sys.maxdeg} < deg f = {d}")
    total: Coeff = Fraction(0)
    for e, a in f.terms.items():
        if sum(e) != d:
            continue
        w: Coeff = a * a
        for k in e:
            if k:
                w = w * sys.c_sq(k)
        total = total + w
    return total


def variance_lower_bound(f: Poly, sys: OrthoSystem) -> float:
    """The product-measure variance lower bound (float view of the exact value)."""
    return float(variance_lower_bound_sq_exact(f, sys))
