"""Certified sublevel regions of 1-D polynomials and oscillatory integrals.

region_above_threshold computes {x : |g(x)| >= theta} exactly: the
boundary points are roots of g -+ theta, isolated by Sturm sequences
in rational arithmetic and refined by rational bisection, so no sign
boundary can leak into the quadrature region.  The region is a union
of closed intervals (rays included); measure-zero touching points are
dropped.

restricted_oscillatory_integral evaluates the integral of
density * e^{i t f} over that region for the k-th derivative
threshold |f^(k)| >= 1, by Gauss-Legendre panels short enough that
the phase advances at most ~pi per panel, then doubles the panel
count and compares as an a-posteriori error check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .measures import Measure1D, density, effective_window
from .poly import Poly, partial_derivative

REFINE_WIDTH = Fraction(1, 10**13)
PANEL_NODES = 12
MAX_PANELS = 1_000_000
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(PANEL_NODES)


# ---- dense rational 1-D polynomials ---------------------------------------------


def dense_coeffs(f: Poly) -> List[Fraction]:
    """Ascending exact coefficients of a 1-variable polynomial."""
    if f.nvars != 1:
        raise ValueError(f"need a 1-variable polynomial, got {f.nvars} variables")
    if f.is_zero():
        return []
    out = [Fraction(0)] * (f.degree + 1)
    for (k,), c in f.terms.items():
        out[k] = Fraction(c)
    return out


def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(p):
        out = out * x + c
    return out


def _deriv(p: Sequence[Fraction]) -> List[Fraction]:
    return [k * c for k, c in enumerate(p)][1:]


def _rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    a = _trim(list(a))
    while len(a) >= len(b):
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        _trim(a)
    return a


def _gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_rem(a, b))
    return a


def _squarefree(p: Sequence[Fraction]) -> List[Fraction]:
    g = _gcd(p, _deriv(p))
    if len(g) <= 1:
        return _trim(list(p))
    q, r = _divmod_exact(list(p), g)
    assert not r, "gcd must divide"
    return q


def _divmod_exact(a: List[Fraction], b: Sequence[Fraction]):
    a = _trim(list(a))
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
        _trim(a)
    return _trim(q), a


def _sturm_chain(p: List[Fraction]) -> List[List[Fraction]]:
    chain = [list(p), _deriv(p)]
    while len(chain[-1]) > 1:
        r = [-c for c in _rem(chain[-2], chain[-1])]
        if not r:
            break
        chain.append(r)
    return [c for c in chain if c]


def _variations(chain: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _cauchy_bound(p: Sequence[Fraction]) -> Fraction:
    lead = abs(p[-1])
    return 1 + max((abs(c) for c in p[:-1]), default=Fraction(0)) / lead


def isolate_real_roots(p: List[Fraction]) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint rational intervals (a, b], one simple root of p in each.

    Works on the squarefree part, so multiple roots are located once.
    """
    p = _squarefree(p)
    if len(p) <= 1:
        return []
    chain = _sturm_chain(p)
    bound = _cauchy_bound(p)
    total = _variations(chain, -bound) - _variations(chain, bound)
    out: List[Tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound, total)]
    while stack:
        a, b, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        left = _variations(chain, a) - _variations(chain, mid)
        stack.append((a, mid, left))
        stack.append((mid, b, count - left))
    return sorted(out)


def refine_root(
    p: List[Fraction], bracket: Tuple[Fraction, Fraction], width: Fraction = REFINE_WIDTH
) -> Tuple[Fraction, Fraction]:
    """Shrink an isolating (a, b] bracket below `width` by Sturm bisection."""
    chain = _sturm_chain(_squarefree(p))
    a, b = bracket
    while b - a > width:
        mid = (a + b) / 2
        if _variations(chain, a) - _variations(chain, mid) == 1:
            b = mid
        else:
            a = mid
    return a, b


# ---- interval unions -------------------------------------------------------------


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted disjoint closed intervals; math.inf endpoints mark rays."""

    intervals: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        last = -math.inf
        for a, b in self.intervals:
            if not (a <= b):
                raise ValueError(f"empty interval [{a}, {b}]")
            if a < last:
                raise ValueError("intervals overlap or are unsorted")
            last = b

    @property
    def count(self) -> int:
        return len(self.intervals)

    def clip(self, lo: float, hi: float) -> "IntervalUnion":
        clipped = []
        for a, b in self.intervals:
            a2, b2 = max(a, lo), min(b, hi)
            if a2 < b2:
                clipped.append((a2, b2))
        return IntervalUnion(tuple(clipped))

    def total_length(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def __contains__(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.intervals)


def region_above_threshold(g: Poly, theta) -> IntervalUnion:
    """Exact {x : |g(x)| >= theta} as closed intervals with certified endpoints.

    Boundary points are roots of g - theta and g + theta; the line is
    split at them and each open gap is classified by an exact rational
    sign test at an interior point.  Gaps where the condition holds
    are merged through shared endpoints; isolated touching points
    (condition true only at the root itself) have measure zero and are
    dropped.
    """
    theta = Fraction(theta)
    if theta <= 0:
        raise ValueError("theta must be positive")
    p = dense_coeffs(g)
    if not p:
        raise ValueError("polynomial must be nonzero")
    if len(p) == 1:
        full = abs(p[0]) >= theta
        return IntervalUnion(((-math.inf, math.inf),) if full else ())

    brackets = []
    for shifted in (_shift(p, -theta), _shift(p, theta)):
        sf = _squarefree(shifted)
        for br in isolate_real_roots(shifted):
            brackets.append((refine_root(sf, br), shifted))
    brackets.sort(key=lambda item: item[0])
    _ensure_disjoint(brackets)

    # exact test points: outside both extremes and between consecutive roots
    bound = max(_cauchy_bound(_shift(p, -theta)), _cauchy_bound(_shift(p, theta))) + 1
    cuts = [br for br, _ in brackets]
    probes: List[Fraction] = [-bound]
    for (la, lb), (ra, rb) in zip(cuts, cuts[1:]):
        probes.append((lb + ra) / 2)
    probes.append(bound)
    hold = [abs(_eval(p, x)) >= theta for x in probes]

    intervals: List[Tuple[float, float]] = []
    k = len(cuts)
    i = 0
    while i <= k:
        if not hold[i]:
            i += 1
            continue
        j = i
        while j < k and hold[j + 1]:
            j += 1
        left = -math.inf if i == 0 else _midpoint(cuts[i - 1])
        right = math.inf if j == k else _midpoint(cuts[j])
        intervals.append((left, right))
        i = j + 1
    return IntervalUnion(tuple(intervals))


def _shift(p: Sequence[Fraction], delta: Fraction) -> List[Fraction]:
    out = list(p)
    if out:
        out[0] += delta
    else:
        out = [delta]
    return _trim(out)


def _midpoint(bracket: Tuple[Fraction, Fraction]) -> float:
    return float((bracket[0] + bracket[1]) / 2)


def _ensure_disjoint(brackets, max_rounds: int = 200):
    # strict lb < ra lets every gap probe sit strictly between two roots,
    # so an exact |g| >= theta test there classifies the whole open gap
    for _ in range(max_rounds):
        ok = True
        for idx in range(len(brackets) - 1):
            (la, lb), lp = brackets[idx]
            (ra, rb), rp = brackets[idx + 1]
            if lb < ra:
                continue
            if lb > ra and lp is rp:
                raise AssertionError("Sturm isolation produced overlapping brackets")
            brackets[idx] = (refine_root(lp, (la, lb), (lb - la) / 4), lp)
            brackets[idx + 1] = (refine_root(rp, (ra, rb), (rb - ra) / 4), rp)
            ok = False
        if ok:
            return
        brackets.sort(key=lambda item: item[0])
    raise RuntimeError("could not separate near-coincident region endpoints")


# ---- oscillatory quadrature -------------------------------------------------------


class PanelBudgetError(RuntimeError):
    """Requested accuracy needs more quadrature panels than allowed."""

    def __init__(self, needed: int, achieved_error: float):
        super().__init__(
            f"oscillatory quadrature needs about {needed} panels "
            f"(cap {MAX_PANELS}); achieved error estimate {achieved_error:.2e}"
        )
        self.needed = needed
        self.achieved_error = achieved_error


def _quad_panels(fvals_fn, a: float, b: float, panels: int) -> complex:
    edges = np.linspace(a, b, panels + 1)
    mids = (edges[:-1] + edges[1:]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    xs = (mids[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    vals = fvals_fn(xs).reshape(panels, PANEL_NODES)
    return complex((vals * _GL_WEIGHTS[None, :]).sum(axis=1) @ half)


def restricted_oscillatory_integral(
    f: Poly,
    mu: Measure1D,
    k: int,
    t: float,
    tol: float = 1e-8,
) -> complex:
    """Integral of e^{i t f} dmu over {x : |f^(k)(x)| >= 1}.

    The measure must be one of the (log-concave) 1-D families from
    this package; the region is certified in exact arithmetic, and the
    quadrature doubles its panel count until two successive values
    agree to `tol` (absolute).
    """
    if f.nvars != 1:
        raise ValueError("need a 1-variable polynomial")
    d = f.degree
    if not 1 <= k <= d:
        raise ValueError(f"derivative order must satisfy 1 <= k <= deg f = {d}")
    g = partial_derivative(f, (k,))
    region = region_above_threshold(g, 1)
    lo, hi = effective_window(mu)
    clipped = region.clip(float(lo), float(hi))
    if clipped.count == 0:
        return 0j

    coeffs = [float(c) for c in dense_coeffs(f)]
    fprime = [float(c) for c in dense_coeffs(partial_derivative(f, (1,)))]

    def integrand(xs: np.ndarray) -> np.ndarray:
        fx = np.polynomial.polynomial.polyval(xs, coeffs) if coeffs else np.zeros_like(xs)
        return density(mu, xs) * np.exp(1j * t * fx)

    total = 0j
    for a, b in clipped.intervals:
        # phase-based initial resolution: |t| * max|f'| * panel <= pi
        grid = np.linspace(a, b, 257)
        fp = np.abs(np.polynomial.polynomial.polyval(grid, fprime)) if fprime else np.zeros(1)
        rate = abs(t) * float(fp.max()) * 1.5
        panels = max(8, int(rate * (b - a) / math.pi) + 1)
        if panels > MAX_PANELS:
            raise PanelBudgetError(panels, math.inf)
        coarse = _quad_panels(integrand, a, b, panels)
        err = math.inf
        while True:
            if 2 * panels > MAX_PANELS:
                raise PanelBudgetError(2 * panels, err)
            fine = _quad_panels(integrand, a, b, 2 * panels)
            err = abs(fine - coarse)
            if err < tol / clipped.count:
                break
            panels *= 2
            coarse = fine
        total += fine
    return total
