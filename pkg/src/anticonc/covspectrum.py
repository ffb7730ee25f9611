"""Covariance of symmetric tensor powers and its exact spectrum.

For X in R^n and degree d, the matrix C indexed by multi-indices
|I| = |J| = d holds Cov(x^I, x^J); Ctilde rescales rows by 1/I!, and
S = D^{1/2} C D^{1/2} (D_{I,I} = 1/I!) is the symmetric matrix with
the same spectrum as Ctilde.  For the isotropic Euclidean ball the
spectrum of Ctilde is known in closed form: the subspaces
|x|^{2i} H_{d-2i} of the harmonic decomposition are eigenspaces with
exact rational eigenvalues eta_i and multiplicities dim H_{d-2i}.

Everything stays rational through matrix assembly; floats appear only
at the eigensolver boundary (a cyclic Jacobi iteration, run per
connected component of the sparsity pattern -- for symmetric measures
the pattern splits by coordinatewise exponent parity, which keeps the
blocks tiny even when the full matrix is 300+ dimensional).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .lpball import ball_monomial_moment
from .measures import ProductMeasure, product_moment
from .poly import Coeff, Poly, laplacian, multi_factorial, norm_sq_poly

MAX_BASIS = 10**6
MAX_MATRIX = 2000


@dataclass(frozen=True)
class SymBasis:
    """All exponent multi-indices of total degree d in n variables."""

    n: int
    d: int
    indices: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.indices)

    def position(self, index: Tuple[int, ...]) -> int:
        return self._lookup[index]

    @functools.cached_property
    def _lookup(self):
        return {I: k for k, I in enumerate(self.indices)}


def sym_basis(n: int, d: int) -> SymBasis:
    """Graded-lex (descending) enumeration of {|I| = d} in n variables."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    total = math.comb(n + d - 1, d)
    if total > MAX_BASIS:
        raise ValueError(f"basis size {total} exceeds limit {MAX_BASIS}")
    out: List[Tuple[int, ...]] = []

    def rec(prefix: Tuple[int, ...], remaining: int, slots: int):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, n)
    return SymBasis(n, d, tuple(out))


@dataclass
class CovBundle:
    """Cov(x^I, x^J) with its Bombieri-rescaled forms and both spectra.

    C and Ctilde hold exact entries (Fractions when the measure's
    moments are rational); S, eigenvalues, eigenvectors are float.
    ``eigenvalues`` is the spectrum of S (= spectrum of Ctilde);
    ``c_eigenvalues`` is the spectrum of C itself, from a second
    Jacobi pass on the unscaled matrix.
    """

    basis: SymBasis
    C: List[List[Coeff]]
    Ctilde: List[List[Coeff]]
    S: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    c_eigenvalues: np.ndarray
    c_eigenvectors: np.ndarray
    mc_stderr: Optional[float] = None


def _bundle_from_C(basis: SymBasis, C: List[List[Coeff]], mc_stderr=None) -> CovBundle:
    facts = [multi_factorial(I) for I in basis.indices]
    Ctilde = [[C[i][j] / facts[i] for j in range(basis.size)] for i in range(basis.size)]
    w = np.array([1.0 / math.sqrt(f) for f in facts])
    Cf = np.array([[float(v) for v in row] for row in C])
    S = Cf * np.outer(w, w)
    S = (S + S.T) / 2  # exact-symmetric input; kills float asymmetry from the outer product
    evals, evecs = sym_eigen(S)
    c_evals, c_evecs = sym_eigen(Cf)
    return CovBundle(basis, C, Ctilde, S, evals, evecs, c_evals, c_evecs, mc_stderr)


def cov_matrix_ball(n: int, d: int) -> CovBundle:
    """Exact covariance bundle for X uniform on the isotropic Euclidean ball."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    basis = sym_basis(n, d)
    if basis.size > MAX_MATRIX:
        raise ValueError(f"matrix size {basis.size} exceeds limit {MAX_MATRIX}")
    scale_sq = n + 2
    mean = [ball_monomial_moment(n, I, scale_sq) for I in basis.indices]
    C = []
    for i, I in enumerate(basis.indices):
        row = []
        for j, J in enumerate(basis.indices):
            if j < i:
                row.append(C[j][i])
                continue
            m2 = ball_monomial_moment(n, tuple(a + b for a, b in zip(I, J)), scale_sq)
            row.append(m2 - mean[i] * mean[j])
        C.append(row)
    return _bundle_from_C(basis, C)


def cov_matrix_product(pm: ProductMeasure, d: int) -> CovBundle:
    """Covariance bundle for X with i.i.d. coordinates; exact when moments are."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    basis = sym_basis(pm.n, d)
    if basis.size > MAX_MATRIX:
        raise ValueError(f"matrix size {basis.size} exceeds limit {MAX_MATRIX}")
    mean = [product_moment(pm, I) for I in basis.indices]
    C = []
    for i, I in enumerate(basis.indices):
        row = []
        for j, J in enumerate(basis.indices):
            if j < i:
                row.append(C[j][i])
                continue
            m2 = product_moment(pm, tuple(a + b for a, b in zip(I, J)))
            row.append(m2 - mean[i] * mean[j])
        C.append(row)
    return _bundle_from_C(basis, C)


def cov_matrix_mc(
    n: int,
    d: int,
    sampler: Callable[[np.random.Generator, int], np.ndarray],
    nsamples: int,
    rng: np.random.Generator,
    blocks: int = 8,
) -> CovBundle:
    """Empirical covariance bundle from Monte Carlo draws of X.

    The stochastic counterpart of the exact constructors, for measures
    with no closed-form moments (general L_p balls).  mc_stderr is the
    largest per-entry standard error, estimated from block means.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    basis = sym_basis(n, d)
    if basis.size > MAX_MATRIX:
        raise ValueError(f"matrix size {basis.size} exceeds limit {MAX_MATRIX}")
    per = max(1, nsamples // blocks)
    ests = []
    for _ in range(blocks):
        x = sampler(rng, per)
        mon = _monomial_values(x, basis)
        mu = mon.mean(axis=0)
        ests.append(mon.T @ mon / per - np.outer(mu, mu))
    stack = np.stack(ests)
    Cf = stack.mean(axis=0)
    se = stack.std(axis=0, ddof=1) / math.sqrt(blocks)
    C = [[Cf[i, j] for j in range(basis.size)] for i in range(basis.size)]
    return _bundle_from_C(basis, C, mc_stderr=float(se.max()))


def _monomial_values(x: np.ndarray, basis: SymBasis) -> np.ndarray:
    # pows[i][k] = x_i^k, built once up to the degree actually used
    pows = []
    for i in range(basis.n):
        top = max(I[i] for I in basis.indices)
        col = [np.ones(len(x))]
        for _ in range(top):
            col.append(col[-1] * x[:, i])
        pows.append(col)
    cols = []
    for I in basis.indices:
        v = np.ones(len(x))
        for i, e in enumerate(I):
            if e:
                v = v * pows[i][e]
        cols.append(v)
    return np.column_stack(cols)


# ---- eigensolver ---------------------------------------------------------------


def sym_eigen(S: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of symmetric S.

    Cyclic Jacobi rotations, run independently on each connected
    component of the sparsity pattern, to off-diagonal Frobenius norm
    below 1e-12 |S|_F.  Self-checks orthonormality (1e-10) and the
    per-pair residual |S v - lambda v| < 1e-9 |S|_F before returning.
    """
    S = np.asarray(S, dtype=float)
    m = S.shape[0]
    if S.ndim != 2 or S.shape[1] != m:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.abs(S).max()) if m else 1.0)
    if m and float(np.abs(S - S.T).max()) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")

    evals = np.empty(m)
    V = np.zeros((m, m))
    for comp in _components(S):
        sub = S[np.ix_(comp, comp)]
        w, U = _jacobi(sub)
        evals[comp] = w
        V[np.ix_(comp, comp)] = U

    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    V = V[:, order]

    fro = float(np.linalg.norm(S)) if m else 0.0
    if m:
        gram_err = float(np.abs(V.T @ V - np.eye(m)).max())
        if gram_err > 1e-10:
            raise RuntimeError(f"eigenvector orthonormality residual {gram_err:.2e}")
        resid = float(np.abs(S @ V - V * evals).max())
        if resid > 1e-9 * max(fro, 1e-300):
            raise RuntimeError(f"eigenpair residual {resid:.2e} exceeds 1e-9 |S|")
    return evals, V


def _components(S: np.ndarray) -> List[List[int]]:
    m = S.shape[0]
    seen = [False] * m
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.nonzero(S[i])[0]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        comps.append(sorted(comp))
    return comps


def _jacobi(A: np.ndarray, max_sweeps: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    A = A.copy()
    m = A.shape[0]
    V = np.eye(m)
    if m == 1:
        return A[0, :1].copy(), V
    fro = np.linalg.norm(A)
    if fro == 0.0:
        return np.zeros(m), V
    target = 1e-12 * fro
    skip = target / (m * m)
    for _ in range(max_sweeps):
        # direct off-diagonal norm: the fro^2 - diag^2 shortcut cancels
        # catastrophically once the off-diagonal mass is near zero
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= target:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau)) if tau else 1.0
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.diag(A).copy(), V


# ---- closed-form spectrum ------------------------------------------------------


def harmonic_dimension(n: int, m: int) -> int:
    """dim H_m(R^n), zero when the binomial tops go negative."""
    if m < 0:
        return 0
    top1 = math.comb(n + m - 1, n - 1) if n + m - 1 >= n - 1 else 0
    top2 = math.comb(n + m - 3, n - 1) if n + m - 3 >= n - 1 else 0
    return top1 - top2


def theoretical_spectrum(n: int, d: int) -> List[Tuple[Fraction, int]]:
    """Exact (eta_i, multiplicity) for Ctilde of the isotropic ball, i = 0..floor(d/2).

    eta_i = R^{2d} (n/(n+2d)) / (2^i i! prod_{j=0}^{d-i-1} (n+2j)) for
    i < d/2, with the separate closed form at i = d/2 for even d;
    multiplicity of eta_i is dim H_{d-2i}.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    R2 = Fraction(n + 2)
    out = []
    for i in range(d // 2 + 1):
        if 2 * i < d:
            den = Fraction(2**i * math.factorial(i))
            for j in range(d - i):
                den *= n + 2 * j
            eta = R2**d * Fraction(n, n + 2 * d) / den
        else:
            # i = d/2, even d
            half = d // 2
            den = Fraction(2**half * math.factorial(half)) * (n + 2 * d) * (n + d)
            for j in range(half):
                den *= n + d - 2 * j
            eta = R2**d * Fraction(d * d) / den
        out.append((eta, harmonic_dimension(n, d - 2 * i)))
    total = math.comb(n + d - 1, d)
    assert sum(mult for _, mult in out) == total
    return out


def gaussian_beta(n: int, q: int) -> Fraction:
    """beta_{gamma,q} = 2^q Gamma(n/2+q)/Gamma(n/2) = prod_{j<q} (n+2j)."""
    out = Fraction(1)
    for j in range(q):
        out *= n + 2 * j
    return out


def ball_beta(n: int, q: int) -> Fraction:
    """beta_q of the isotropic ball: (n/(n+2q)) (n+2)^q; reproduces eta_i."""
    return Fraction(n, n + 2 * q) * Fraction(n + 2) ** q


def _laplacian_power_constant(n: int, d: int, i: int) -> int:
    """b_i with Delta^i (|x|^{2i} h) = b_i h for h in H_{d-2i}."""
    out = 2**i * math.factorial(i)
    for j in range(1, i + 1):
        out *= n + 2 * d - 2 * i - 2 * j
    return out


def radial_spectrum(n: int, d: int, beta: Sequence[Coeff]) -> List[Tuple[Coeff, int]]:
    """(eta_{mu,i}, multiplicity) for a radial measure given beta_{mu,q}, q <= d.

    eta_{mu,i} = beta_{mu,d} / (2^i i! prod_{j=0}^{d-i-1} (n+2j)) for
    i < d/2; for even d, eta_{mu,d/2} = (beta_{mu,d} - beta_{mu,d/2}^2) / b_{d/2}.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if len(beta) < d + 1:
        raise ValueError(f"need beta_0..beta_{d}, got {len(beta)} values")
    if beta[0] != 1:
        raise ValueError("beta_0 must equal 1 (probability normalization)")
    out = []
    for i in range(d // 2 + 1):
        if 2 * i < d:
            den = 2**i * math.factorial(i)
            for j in range(d - i):
                den *= n + 2 * j
            eta = beta[d] / den
        else:
            half = d // 2
            eta = (beta[d] - beta[half] ** 2) / _laplacian_power_constant(n, d, half)
        out.append((eta, harmonic_dimension(n, d - 2 * i)))
    return out


# ---- harmonic decomposition ----------------------------------------------------


def harmonic_decompose(f: Poly) -> List[Poly]:
    """Split homogeneous f of degree d as sum_i |x|^{2i} h_i with h_i harmonic.

    Top-down: h_i = Delta^i(remainder) / b_i for i = floor(d/2)..1,
    subtracting |x|^{2i} h_i as it goes; exact for exact coefficients.
    """
    if f.is_zero():
        raise ValueError("zero polynomial has no homogeneous degree")
    d = f.degree
    if any(sum(e) != d for e in f.terms):
        raise ValueError("polynomial is not homogeneous")
    n = f.nvars
    r2 = norm_sq_poly(n)
    parts: List[Poly] = [Poly.zero(n)] * (d // 2 + 1)
    rest = f
    for i in range(d // 2, 0, -1):
        g = rest
        for _ in range(i):
            g = laplacian(g)
        h = g / _laplacian_power_constant(n, d, i)
        parts[i] = h
        rest = rest - r2**i * h
    parts[0] = rest
    return parts


# ---- verification --------------------------------------------------------------


@dataclass
class SpectrumReport:
    """Comparison of an empirical spectrum against the closed form."""

    theoretical: List[Tuple[Fraction, int]]
    empirical: np.ndarray
    clusters: List[int]
    max_rel_dev: float
    tol: float


def verify_eigenstructure(
    bundle: CovBundle, pairs: List[Tuple[Fraction, int]], tol_rel: float = 1e-8
) -> SpectrumReport:
    """Cluster bundle.eigenvalues against (eta, mult) pairs; raise on mismatch.

    Tolerance is tol_rel times the largest eta.  Also verifies, in
    exact arithmetic, that |x|^{2i} h is a Ctilde-eigenvector with
    eigenvalue eta_i for a harmonic h of each admissible degree.
    """
    theo = sorted(pairs)
    emp = bundle.eigenvalues
    if sum(m for _, m in theo) != len(emp):
        raise ValueError("multiplicities do not sum to the matrix size")
    tol = tol_rel * float(max(e for e, _ in theo))
    clusters = []
    pos = 0
    max_dev = 0.0
    for eta, mult in theo:
        chunk = emp[pos : pos + mult]
        pos += mult
        dev = float(np.abs(chunk - float(eta)).max())
        if dev > tol:
            raise ValueError(
                f"cluster at eta={eta} deviates by {dev:.3e} (tolerance {tol:.3e})"
            )
        max_dev = max(max_dev, dev / float(eta) if eta else dev)
        clusters.append(mult)

    _check_eigenspaces(bundle, pairs)
    return SpectrumReport(list(pairs), emp, clusters, max_dev, tol)


def _check_eigenspaces(bundle: CovBundle, pairs: List[Tuple[Fraction, int]]):
    """Exact check: Ctilde (|x|^{2i} h) = eta_i (|x|^{2i} h)."""
    basis = bundle.basis
    n, d = basis.n, basis.d
    r2 = norm_sq_poly(n)
    for i, (eta, _) in enumerate(pairs):
        m = d - 2 * i
        h = harmonic_decompose(Poly.variable(0, n) ** m)[0] if m else Poly.const(n, 1)
        p = r2**i * h
        vec = [p.terms.get(I, Fraction(0)) for I in basis.indices]
        resid = Fraction(0)
        for r in range(basis.size):
            lhs = sum(bundle.Ctilde[r][c] * vec[c] for c in range(basis.size) if vec[c])
            diff = lhs - eta * vec[r]
            resid = max(resid, abs(diff))
        if float(resid) > 1e-9:
            raise ValueError(f"eigenspace residual {float(resid):.3e} at level i={i}")


def multilinear_residual(bundle: CovBundle, eta0: Coeff) -> float:
    """Largest |C e_I - eta0 e_I| entry over multilinear basis monomials.

    For n >= d the multilinear monomials are exact eta_0-eigenvectors
    of C (their columns have a single diagonal entry), so this is an
    exact-arithmetic residual, returned as float.
    """
    basis = bundle.basis
    worst = Fraction(0)
    found = False
    for j, I in enumerate(basis.indices):
        if any(e > 1 for e in I):
            continue
        found = True
        for r in range(basis.size):
            want = eta0 if r == j else 0
            diff = bundle.C[r][j] - want
            worst = max(worst, abs(diff))
    if not found:
        raise ValueError("no multilinear monomial exists (need n >= d)")
    return float(worst)
