"""Tests for L_p ball moments, rescaling, and uniform sampling."""

import math
from fractions import Fraction

import numpy as np
import pytest

from anticonc.lpball import (
    LpBallSpec,
    ball_monomial_moment,
    ball_norm_moment,
    gamma_ratio_moment,
    isotropic_scale,
    isotropic_scale_sq,
    marginal_second_moment,
    norm_power_variance,
    sample_ball,
    sphere_monomial_moment,
)


def test_gamma_ratio_moment_examples():
    assert gamma_ratio_moment(4, 2, 2) == Fraction(2)
    assert gamma_ratio_moment(2, 1, 1) == Fraction(2)
    assert gamma_ratio_moment(7, 3, 0) == 1
    # even orders at p=2 stay exact in both directions
    assert gamma_ratio_moment(9, 2, -2) == Fraction(2, 7)
    assert gamma_ratio_moment(3, 2, 4) == Fraction(15, 4)


def test_gamma_ratio_moment_against_gamma_oracle():
    from scipy.special import gammaln

    for n, p, k in [(5, 1.5, 3), (8, 4, 2), (3, 2, 1), (10, 2.5, -2)]:
        got = float(gamma_ratio_moment(n, p, k))
        ref = math.exp(gammaln((n + k) / p) - gammaln(n / p))
        assert math.isclose(got, ref, rel_tol=1e-12)


def test_gamma_ratio_moment_integrability_guard():
    with pytest.raises(ValueError):
        gamma_ratio_moment(3, 2, -3)
    with pytest.raises(ValueError):
        gamma_ratio_moment(3, 0.5, 2)


def test_negative_moment_two_sided_bound():
    """E[|Z|_p^{-k}] sits within [1/20, 25] times p^{k/p} n^{-k/p} when n > k^2."""
    for p in (1, 2, 3):
        for k in (2, 3):
            for n in (k * k + 1, 2 * k * k, 50):
                val = float(gamma_ratio_moment(n, p, -k))
                pivot = p ** (k / p) * n ** (-k / p)
                assert pivot / 20 <= val <= 25 * pivot, (p, k, n)


def test_isotropic_scale_euclidean():
    assert isotropic_scale_sq(3, 2) == 5
    assert math.isclose(isotropic_scale(3, 2), math.sqrt(5), rel_tol=1e-15)
    assert math.isclose(isotropic_scale(10, 2), math.sqrt(12), rel_tol=1e-15)


def test_isotropic_scale_l1_exact():
    """z_{1,n}^2 = (n+1)(n+2)/2 comes out exact via integer Gamma steps."""
    for n in (1, 3, 8):
        assert isotropic_scale_sq(n, 1) == Fraction((n + 1) * (n + 2), 2)


def test_isotropic_scale_growth():
    """z_{p,n} grows like n^{1/p} (ratio stays within fixed bounds)."""
    for p in (1, 2, 4):
        ratios = [isotropic_scale(n, p) / n ** (1 / p) for n in (4, 16, 64, 256)]
        assert all(0.5 < r < 4 for r in ratios)


def test_marginal_second_moment_mc():
    """MC E[X_1^2] on the iso ball hits 1 within 4 standard errors (p=4)."""
    rng = np.random.default_rng(20240818)
    spec = LpBallSpec.iso(5, 4)
    x = sample_ball(spec, rng, 300_000)
    y = x[:, 0] ** 2
    se = y.std(ddof=1) / math.sqrt(len(y))
    assert abs(y.mean() - 1.0) < 4 * se
    assert math.isclose(float(marginal_second_moment(5, 2)), 1 / 7, rel_tol=1e-15)


def test_sample_ball_support_and_shape():
    rng = np.random.default_rng(3)
    spec = LpBallSpec.unit(4, 1)
    x = sample_ball(spec, rng, 5000)
    assert x.shape == (5000, 4)
    assert np.all(np.abs(x).sum(axis=1) <= 1 + 1e-12)
    single = sample_ball(spec, rng)
    assert single.shape == (4,)
    # same seed, same draws
    a = sample_ball(spec, np.random.default_rng(99), 10)
    b = sample_ball(spec, np.random.default_rng(99), 10)
    assert np.array_equal(a, b)


def test_sample_ball_norm_moments():
    """Empirical E[|X|_p^k] matches scale^k n/(n+k) within 4 standard errors."""
    rng = np.random.default_rng(20240819)
    for p in (1, 2, 4):
        for n in (3, 8):
            for spec in (LpBallSpec.unit(n, p), LpBallSpec.iso(n, p)):
                x = sample_ball(spec, rng, 200_000)
                norms = (np.abs(x) ** p).sum(axis=1) ** (1 / p)
                for k in (1, 2, p, 2 * p):
                    y = norms ** float(k)
                    se = y.std(ddof=1) / math.sqrt(len(y))
                    ref = float(ball_norm_moment(spec, int(k)))
                    assert abs(y.mean() - ref) < 4 * se, (p, n, k, spec.isotropic)


def test_ball_norm_moment_exact_values():
    assert ball_norm_moment(LpBallSpec.unit(3, 1), 1) == Fraction(3, 4)
    # isotropy makes E[|X|_2^2] = n on the nose
    for n in (2, 5, 9):
        assert ball_norm_moment(LpBallSpec.iso(n, 2), 2) == n
    with pytest.raises(ValueError):
        ball_norm_moment(LpBallSpec.unit(2, 2), -2)


def test_sphere_monomial_moment_values():
    assert sphere_monomial_moment(3, (2, 0, 0)) == Fraction(1, 3)
    assert sphere_monomial_moment(3, (2, 2, 0)) == Fraction(1, 15)
    assert sphere_monomial_moment(3, (4, 0, 0)) == Fraction(1, 5)
    assert sphere_monomial_moment(5, (1, 2, 0, 0, 0)) == 0
    with pytest.raises(ValueError):
        sphere_monomial_moment(3, (2, 0))
    with pytest.raises(ValueError):
        sphere_monomial_moment(2, (-2, 2))


def test_sphere_moment_sums_to_one():
    """Sum of E[x_i^2] over coordinates is 1 on the sphere."""
    for n in (2, 5, 11):
        total = sum(
            sphere_monomial_moment(n, tuple(2 if j == i else 0 for j in range(n)))
            for i in range(n)
        )
        assert total == 1


def test_sphere_monomial_moment_gaussian_oracle():
    """Normalized Gaussians are uniform on the sphere; MC within 4 sigma."""
    rng = np.random.default_rng(20240820)
    g = rng.standard_normal((300_000, 3))
    u = g / np.linalg.norm(g, axis=1, keepdims=True)
    for a in [(2, 2, 0), (4, 0, 0), (2, 2, 2)]:
        y = (u ** np.array(a)).prod(axis=1)
        se = y.std(ddof=1) / math.sqrt(len(y))
        assert abs(y.mean() - float(sphere_monomial_moment(3, a))) < 4 * se


def test_ball_monomial_moment_values():
    assert ball_monomial_moment(3, (2, 0, 0)) == Fraction(1, 5)
    assert ball_monomial_moment(3, (2, 0, 0), scale_sq=5) == 1
    assert ball_monomial_moment(4, (2, 0, 0, 0), scale_sq=6) == 1
    assert ball_monomial_moment(3, (1, 2, 0)) == 0
    # float squared scale degrades gracefully to float
    v = ball_monomial_moment(3, (2, 0, 0), scale_sq=5.0)
    assert isinstance(v, float) and math.isclose(v, 1.0, rel_tol=1e-15)


def test_ball_monomial_moment_mc_oracle():
    rng = np.random.default_rng(20240821)
    x = sample_ball(LpBallSpec.unit(3, 2), rng, 300_000)
    y = x[:, 0] ** 2 * x[:, 1] ** 2
    se = y.std(ddof=1) / math.sqrt(len(y))
    ref = float(ball_monomial_moment(3, (2, 2, 0)))
    assert math.isclose(ref, 1 / 35, rel_tol=1e-15)
    assert abs(y.mean() - ref) < 4 * se


def test_norm_power_variance_values():
    assert norm_power_variance(3, 2) == Fraction(4, 7)
    assert norm_power_variance(96, 2) == Fraction(1, 25)
    for n in (2, 5, 8):
        assert norm_power_variance(n, 2) == Fraction(4, n + 4)
    with pytest.raises(ValueError):
        norm_power_variance(5, 3)
    with pytest.raises(ValueError):
        norm_power_variance(5, 2.5)


def test_norm_power_variance_decreasing_to_zero():
    for p in (2, 4):
        vals = [float(norm_power_variance(n, p)) for n in (2, 4, 8, 16, 32, 64, 128)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        # Theta(1/n): doubling n about halves the tail values
        assert 1.5 < vals[-2] / vals[-1] < 2.5
        assert vals[-1] < vals[0] / 5


def test_norm_power_variance_mc_oracle():
    """MC variance of n^{-1/2}|X|_4^4 agrees with the closed form (4 sigma)."""
    rng = np.random.default_rng(20240822)
    n, p = 8, 4
    x = sample_ball(LpBallSpec.iso(n, p), rng, 300_000)
    y = (np.abs(x) ** p).sum(axis=1) / math.sqrt(n)
    c = y - y.mean()
    var = (c**2).mean()
    # stderr of the sample variance from the fourth central moment
    se = math.sqrt(((c**4).mean() - var**2) / len(y))
    assert abs(var - float(norm_power_variance(n, p))) < 4 * se


def test_product_second_moment_stays_bounded_iso():
    """E[(x1...xd)^2] on iso balls does not decay with n (d = 2, 3)."""
    rng = np.random.default_rng(20240823)
    floors = {2: 0.5, 3: 0.25}
    for p in (1, 4):
        for d, floor in floors.items():
            for n in (8, 16, 32):
                x = sample_ball(LpBallSpec.iso(n, p), rng, 150_000)
                y = x[:, :d].prod(axis=1) ** 2
                se = y.std(ddof=1) / math.sqrt(len(y))
                assert y.mean() - 4 * se > floor, (p, d, n)


def test_product_second_moment_unit_ball_scaling():
    """Unit-ball E[(x1 x2)^2] scaled by n^{2d/p} stays bounded below."""
    rng = np.random.default_rng(20240824)
    p, d = 1, 2
    for n in (8, 16, 32):
        x = sample_ball(LpBallSpec.unit(n, p), rng, 150_000)
        y = x[:, :d].prod(axis=1) ** 2
        se = y.std(ddof=1) / math.sqrt(len(y))
        assert (y.mean() - 4 * se) * n ** (2 * d / p) > 1.0, n


def test_spec_validation():
    with pytest.raises(ValueError):
        LpBallSpec.unit(0, 2)
    with pytest.raises(ValueError):
        LpBallSpec.iso(3, 0.9)
    spec = LpBallSpec.iso(3, 2)
    assert spec.scale_sq == 5
    assert "iso" in str(spec) and "R^3" in str(spec)
    assert LpBallSpec.unit(3, 2).scale == 1.0
