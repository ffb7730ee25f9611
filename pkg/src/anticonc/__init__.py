"""Anti-concentration toolkit.

Computes, exactly where closed forms exist and by Monte Carlo or
quadrature otherwise: orthogonal-polynomial variance lower bounds for
product measures, the spectrum of Cov(X^(tensor d)) for the isotropic
Euclidean ball and radial measures, Lp-ball moment and sampling
machinery, sublevel-set probabilities, and Fourier-decay checks.
"""

from .poly import (
    Poly,
    PolyParseError,
    bombieri_inner,
    coeff_level,
    coeff_level_sq,
    evaluate,
    evaluate_batch,
    format_poly,
    laplacian,
    max_top_coeff,
    multiply,
    parse_poly,
    partial_derivative,
)

__all__ = [
    "Poly",
    "PolyParseError",
    "bombieri_inner",
    "coeff_level",
    "coeff_level_sq",
    "evaluate",
    "evaluate_batch",
    "format_poly",
    "laplacian",
    "max_top_coeff",
    "multiply",
    "parse_poly",
    "partial_derivative",
]

__version__ = "0.1.0"
