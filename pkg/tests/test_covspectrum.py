"""Tests for tensor-power covariance matrices and their exact spectra."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from anticonc.covspectrum import (
    ball_beta,
    cov_matrix_ball,
    cov_matrix_mc,
    cov_matrix_product,
    gaussian_beta,
    harmonic_decompose,
    harmonic_dimension,
    multilinear_residual,
    radial_spectrum,
    sym_basis,
    sym_eigen,
    theoretical_spectrum,
    verify_eigenstructure,
)
from anticonc.lpball import LpBallSpec, sample_ball
from anticonc.measures import Measure1D, ProductMeasure, isotropize
from anticonc.orthopoly import variance_exact
from anticonc.poly import Poly, bombieri_inner, laplacian, norm_sq_poly, parse_poly

BALL_CASES = [(n, d) for n in range(2, 9) for d in (2, 3, 4)]


def test_sym_basis_examples():
    assert sym_basis(2, 2).indices == ((2, 0), (1, 1), (0, 2))
    assert sym_basis(3, 2).size == 6
    assert sym_basis(1, 5).indices == ((5,),)
    b = sym_basis(3, 4)
    assert b.size == math.comb(6, 4)
    assert b.position((2, 1, 1)) == b.indices.index((2, 1, 1))
    with pytest.raises(ValueError):
        sym_basis(0, 2)


def test_sym_eigen_trivial_cases():
    w, v = sym_eigen(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1, 2, 3])
    assert np.allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])
    w, _ = sym_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [-1, 1])
    with pytest.raises(ValueError):
        sym_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_sym_eigen_against_lapack_oracle():
    rng = np.random.default_rng(20240825)
    for m in (5, 20, 50):
        a = rng.standard_normal((m, m))
        s = (a + a.T) / 2
        w, v = sym_eigen(s)
        ref = np.linalg.eigvalsh(s)
        assert np.allclose(w, ref, atol=1e-10 * max(1, np.abs(ref).max()))
        assert np.abs(v.T @ v - np.eye(m)).max() < 1e-10
        assert np.abs(s @ v - v * w).max() < 1e-9 * np.linalg.norm(s)
    # block-diagonal input exercises the component split
    blocks = [rng.standard_normal((k, k)) for k in (3, 4, 5)]
    s = np.zeros((12, 12))
    pos = 0
    for b in blocks:
        k = b.shape[0]
        s[pos : pos + k, pos : pos + k] = (b + b.T) / 2
        pos += k
    w, _ = sym_eigen(s)
    assert np.allclose(w, np.linalg.eigvalsh(s), atol=1e-10)


def test_cov_matrix_ball_entries():
    bun = cov_matrix_ball(3, 2)
    i = bun.basis.position((2, 0, 0))
    j = bun.basis.position((0, 2, 0))
    assert bun.C[i][i] == Fraction(8, 7)
    assert bun.C[i][j] == Fraction(-2, 7)
    assert bun.Ctilde[i][i] == Fraction(4, 7)
    one = cov_matrix_ball(3, 1)
    assert [[one.C[a][b] for b in range(3)] for a in range(3)] == [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
    ]


def test_cov_matrix_product_entries():
    gauss = Measure1D.gaussian()
    bun = cov_matrix_product(ProductMeasure(gauss, 2), 1)
    assert bun.C == [[1, 0], [0, 1]]
    single = cov_matrix_product(ProductMeasure(gauss, 1), 2)
    assert single.C == [[2]]
    mu = isotropize(Measure1D.uniform())
    b2 = cov_matrix_product(ProductMeasure(mu, 2), 2)
    k = b2.basis.position((1, 1))
    f = parse_poly("x1*x2", 2)
    assert b2.C[k][k] == variance_exact(f, ProductMeasure(mu, 2)) == 1


def test_theoretical_spectrum_spot_values():
    pairs = theoretical_spectrum(3, 2)
    assert (Fraction(5, 7), 5) in pairs and (Fraction(2, 7), 1) in pairs
    assert theoretical_spectrum(5, 3)[0][0] == Fraction(49, 99)
    # eta_0 -> 1 for d >= 3 as n grows
    assert abs(float(theoretical_spectrum(10**6, 3)[0][0]) - 1) < 1e-4
    for n, d in BALL_CASES:
        pairs = theoretical_spectrum(n, d)
        assert sum(m for _, m in pairs) == math.comb(n + d - 1, d)


def test_ball_spectrum_matches_theory():
    """Empirical eigenvalues hit the closed form with exact multiplicities."""
    for n, d in BALL_CASES:
        bun = cov_matrix_ball(n, d)
        rep = verify_eigenstructure(bun, theoretical_spectrum(n, d), tol_rel=1e-8)
        assert rep.max_rel_dev < 1e-8
        assert rep.clusters == [m for _, m in sorted(theoretical_spectrum(n, d))]


def test_interlacing():
    """d! lambda_i(Ctilde) >= lambda_i(C) >= lambda_i(Ctilde), all cases."""
    for n, d in BALL_CASES:
        bun = cov_matrix_ball(n, d)
        fd = math.factorial(d)
        for lc, lt in zip(bun.c_eigenvalues, bun.eigenvalues):
            assert fd * lt >= lc - 1e-10
            assert lc >= lt - 1e-10


def test_pathological_direction_d2():
    """Smallest eigenvalue of C at d=2 is 4/(n+4); the rest stay >= 5/7."""
    for n in range(3, 9):
        bun = cov_matrix_ball(n, 2)
        lam = bun.c_eigenvalues
        assert abs(lam[0] - 4 / (n + 4)) < 1e-10
        assert lam[1] >= 5 / 7 - 1e-10


def test_eigenvalue_floor_and_multilinear():
    """For d in {3,4}: all eta >= 1/(d+1)!; multilinear monomials are exact
    eta_0-eigenvectors of C when n >= d."""
    for d in (3, 4):
        floor = Fraction(1, math.factorial(d + 1))
        for n in range(3, 9):
            for eta, _ in theoretical_spectrum(n, d):
                assert eta >= floor
            bun = cov_matrix_ball(n, d)
            assert all(lam >= float(floor) - 1e-10 for lam in bun.eigenvalues)
            if n >= d:
                eta0 = theoretical_spectrum(n, d)[0][0]
                assert multilinear_residual(bun, eta0) < 1e-9


def test_eta_magnitude_scaling():
    """eta_i / n^i stays within [1/(d+1)!, 1] for i < d/2 (exact arithmetic)."""
    for d in (2, 3, 4):
        lo = Fraction(1, math.factorial(d + 1))
        for n in (4, 8, 16, 32, 64):
            pairs = theoretical_spectrum(n, d)
            for i, (eta, _) in enumerate(pairs):
                if 2 * i < d:
                    scaled = eta / Fraction(n) ** i
                    assert lo <= scaled <= 1, (n, d, i, scaled)


def test_multilinear_requires_wide_basis():
    bun = cov_matrix_ball(2, 3)
    with pytest.raises(ValueError):
        multilinear_residual(bun, Fraction(1))


def test_harmonic_decompose_examples():
    f = parse_poly("x1*x2", 3)
    parts = harmonic_decompose(f)
    assert parts[0] == f and parts[1].is_zero()

    r2 = norm_sq_poly(3)
    parts = harmonic_decompose(r2)
    assert parts[0].is_zero() and parts[1] == Poly.const(3, 1)

    parts = harmonic_decompose(parse_poly("x1^2", 3))
    assert parts[1] == Poly.const(3, Fraction(1, 3))
    assert parts[0] == parse_poly("x1^2", 3) - r2 / 3
    assert laplacian(parts[0]).is_zero()


def test_harmonic_decompose_random_roundtrip():
    """Reconstruction is exact, parts are harmonic and Bombieri-orthogonal."""
    rng = random.Random(20240826)
    for _ in range(20):
        n = rng.randint(2, 4)
        d = rng.randint(2, 5)
        terms = {}
        for _ in range(6):
            e = [0] * n
            for _ in range(d):
                e[rng.randrange(n)] += 1
            terms[tuple(e)] = Fraction(rng.randint(-20, 20))
        f = Poly(n, {e: c for e, c in terms.items() if c})
        if f.is_zero():
            continue
        parts = harmonic_decompose(f)
        r2 = norm_sq_poly(n)
        rebuilt = Poly.zero(n)
        for i, h in enumerate(parts):
            assert laplacian(h).is_zero()
            rebuilt = rebuilt + r2**i * h
        assert rebuilt == f
        pieces = [r2**i * h for i, h in enumerate(parts) if not h.is_zero()]
        for a in range(len(pieces)):
            for b in range(a + 1, len(pieces)):
                assert bombieri_inner(pieces[a], pieces[b]) == 0


def test_harmonic_decompose_rejects_bad_input():
    with pytest.raises(ValueError):
        harmonic_decompose(parse_poly("x1^2 + x1", 2))
    with pytest.raises(ValueError):
        harmonic_decompose(Poly.zero(2))


def test_harmonic_dimension_values():
    assert harmonic_dimension(3, 0) == 1
    assert harmonic_dimension(3, 1) == 3
    assert harmonic_dimension(3, 2) == 5
    assert harmonic_dimension(4, 3) == 16
    assert harmonic_dimension(3, -1) == 0


def test_radial_spectrum_ball_identity():
    """Ball beta values reproduce the closed-form spectrum exactly."""
    for n, d in [(3, 2), (4, 3), (3, 4), (6, 4), (8, 2)]:
        beta = [ball_beta(n, q) for q in range(d + 1)]
        assert radial_spectrum(n, d, beta) == theoretical_spectrum(n, d)


def test_radial_spectrum_gaussian():
    """Gaussian beta: eta_1 = 1 at d=2 (all levels degenerate to 1)."""
    for n in (4, 6, 8):
        pairs = radial_spectrum(n, 2, [gaussian_beta(n, q) for q in range(3)])
        assert pairs[1][0] == 1
        assert pairs[0][0] == 1
    with pytest.raises(ValueError):
        radial_spectrum(4, 2, [Fraction(1), Fraction(4)])
    with pytest.raises(ValueError):
        radial_spectrum(4, 2, [Fraction(2), Fraction(4), Fraction(24)])


def test_radial_spectrum_gaussian_matches_product_bundle():
    """Radial prediction equals the product-measure spectrum (d = 2, 3)."""
    for n, d in [(4, 2), (6, 2), (3, 3), (4, 3)]:
        beta = [gaussian_beta(n, q) for q in range(d + 1)]
        pairs = radial_spectrum(n, d, beta)
        bun = cov_matrix_product(ProductMeasure(Measure1D.gaussian(), n), d)
        rep = verify_eigenstructure(bun, pairs, tol_rel=1e-8)
        assert rep.max_rel_dev < 1e-8


def test_verify_eigenstructure_rejects_wrong_theory():
    bun = cov_matrix_ball(3, 2)
    bad = [(Fraction(1, 2), 5), (Fraction(2, 7), 1)]
    with pytest.raises(ValueError):
        verify_eigenstructure(bun, bad)
    with pytest.raises(ValueError):
        verify_eigenstructure(bun, [(Fraction(5, 7), 6)])


def test_cov_matrix_mc_agrees_with_exact():
    """MC covariance of the isotropic ball lands near the rational matrix."""
    rng = np.random.default_rng(20240827)
    spec = LpBallSpec.iso(3, 2)
    bun_mc = cov_matrix_mc(3, 2, lambda r, m: sample_ball(spec, r, m), 160_000, rng)
    bun = cov_matrix_ball(3, 2)
    assert bun_mc.mc_stderr is not None
    diff = max(
        abs(float(bun_mc.C[i][j]) - float(bun.C[i][j]))
        for i in range(bun.basis.size)
        for j in range(bun.basis.size)
    )
    assert diff < 8 * bun_mc.mc_stderr
    # spectra agree loosely at MC resolution
    assert np.abs(bun_mc.eigenvalues - bun.eigenvalues).max() < 0.1


def test_cov_matrix_mc_deterministic():
    spec = LpBallSpec.unit(2, 1)
    run = lambda: cov_matrix_mc(
        2, 2, lambda r, m: sample_ball(spec, r, m), 4000, np.random.default_rng(5)
    )
    a, b = run(), run()
    assert a.C == b.C and a.mc_stderr == b.mc_stderr


def test_size_guards():
    with pytest.raises(ValueError):
        cov_matrix_ball(40, 4)
    with pytest.raises(ValueError):
        cov_matrix_ball(3, 0)
