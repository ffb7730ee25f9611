"""Monte Carlo estimators with partitioned, reproducible RNG streams.

Sampling is split into fixed-size chunks of 2^18 draws; chunk i uses
the i-th child of SeedSequence(seed), so a report depends only on
(seed, samples) and reproduces bit-identically, in or out of order.

Estimators return an EstimateReport carrying the point value, a
standard error (4th-central-moment formula for variances, binomial
for frequencies, complex-mean geometry for characteristic moduli),
and the provenance needed to reproduce the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .lpball import LpBallSpec, sample_ball
from .measures import ProductMeasure, sample_product
from .poly import Poly, evaluate_batch

CHUNK = 1 << 18

Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class EstimateReport:
    """A reproducible point estimate: value, stderr, and provenance."""

    value: float
    stderr: float
    samples: int
    seed: int
    method: str = "mc"

    def interval(self, sigmas: float = 4.0):
        return (self.value - sigmas * self.stderr, self.value + sigmas * self.stderr)


def product_sampler(pm: ProductMeasure) -> Sampler:
    """Sampler closure for an i.i.d. product measure."""
    return lambda rng, size: sample_product(pm, rng, size)


def ball_sampler(spec: LpBallSpec) -> Sampler:
    """Sampler closure for the uniform measure on an L_p ball."""
    return lambda rng, size: sample_ball(spec, rng, size)


def _chunked(nsamples: int, seed: int):
    if nsamples < 1:
        raise ValueError("need at least one sample")
    nchunks = (nsamples + CHUNK - 1) // CHUNK
    children = np.random.SeedSequence(seed).spawn(nchunks)
    done = 0
    for child in children:
        size = min(CHUNK, nsamples - done)
        done += size
        yield np.random.default_rng(child), size


def variance_mc(f: Poly, sampler: Sampler, nsamples: int, seed: int) -> EstimateReport:
    """Unbiased sample variance of f(X) with a 4th-moment standard error.

    stderr^2 = (m4 - m2^2 (N-3)/(N-1)) / N with central moments m2, m4.
    """
    s1 = s2 = s3 = s4 = 0.0
    for rng, size in _chunked(nsamples, seed):
        y = evaluate_batch(f, sampler(rng, size))
        s1 += y.sum()
        s2 += (y**2).sum()
        s3 += (y**3).sum()
        s4 += (y**4).sum()
    n = nsamples
    mean = s1 / n
    m2 = s2 / n - mean**2
    m4 = s4 / n - 4 * mean * s3 / n + 6 * mean**2 * s2 / n - 3 * mean**4
    var = m2 * n / (n - 1) if n > 1 else 0.0
    se_sq = (m4 - m2 * m2 * (n - 3) / (n - 1)) / n if n > 1 else float("inf")
    return EstimateReport(var, math.sqrt(max(se_sq, 0.0)), n, seed)


def sublevel_mc(
    f: Poly, sampler: Sampler, eps: float, y: float, nsamples: int, seed: int
) -> EstimateReport:
    """Empirical P(|f(X) - y| <= eps) with binomial standard error."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    hits = 0
    for rng, size in _chunked(nsamples, seed):
        vals = evaluate_batch(f, sampler(rng, size))
        hits += int(np.count_nonzero(np.abs(vals - y) <= eps))
    p = hits / nsamples
    se = math.sqrt(p * (1.0 - p) / nsamples)
    return EstimateReport(p, se, nsamples, seed)


def chf_mc(
    f: Poly, sampler: Sampler, ts: Sequence[float], nsamples: int, seed: int
) -> List[EstimateReport]:
    """|E e^{i t f(X)}| for each t, with stderr sqrt((1 - |J|^2)/N).

    Var(Re) + Var(Im) of the unit-modulus summands is exactly
    1 - |mean|^2, which bounds the error of the modulus.
    """
    ts = [float(t) for t in ts]
    acc = np.zeros(len(ts), dtype=complex)
    for rng, size in _chunked(nsamples, seed):
        y = evaluate_batch(f, sampler(rng, size))
        for i, t in enumerate(ts):
            if t == 0.0:
                acc[i] += size
            else:
                acc[i] += np.exp(1j * t * y).sum()
    out = []
    for i, t in enumerate(ts):
        j = abs(acc[i]) / nsamples
        se = 0.0 if t == 0.0 else math.sqrt(max(1.0 - j * j, 0.0) / nsamples)
        out.append(EstimateReport(float(j), se, nsamples, seed))
    return out


def decay_exponent_fit(
    ts: Sequence[float],
    values: Sequence[float],
    stderrs: Optional[Sequence[float]] = None,
    noise_factor: float = 10.0,
) -> float:
    """Least-squares slope of log|J| against log t.

    Points at or below the Monte Carlo noise floor (noise_factor times
    the stderr) are discarded; at least 5 clean points must remain.
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = (ts > 0) & (values > 0)
    if stderrs is not None:
        keep &= values > noise_factor * np.asarray(stderrs, dtype=float)
    if int(keep.sum()) < 5:
        raise ValueError(
            f"only {int(keep.sum())} points above the noise floor; need at least 5"
        )
    slope, _ = np.polyfit(np.log(ts[keep]), np.log(values[keep]), 1)
    return float(slope)
