"""Sparse multivariate polynomial algebra over exact rationals.

A polynomial in n variables is a map from exponent tuples (length n,
non-negative entries) to nonzero coefficients.  Coefficients are
``fractions.Fraction`` in exact work; floats are accepted, and since
Python's numeric tower promotes Fraction-with-float arithmetic to
float, mixed expressions degrade rational -> float and never the
reverse.  The zero polynomial is the empty map and reports degree
-inf, so top-degree queries fail loudly after cancellation instead of
treating 0 as a constant.

Term order everywhere is graded lexicographic, descending: higher
total degree first, ties broken by the lexicographically larger
exponent tuple.  This fixes text serialization and the basis order
used for the covariance-spectrum code.

The text grammar (see :func:`parse_poly`):

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := primary ('^' posint)*
    primary:= number | var | '(' expr ')'
    var    := 'x' posint          (1-based: x1 .. xn)
    number := integer | decimal | rational 'p/q'

Whitespace is insignificant.  Canonical output is graded-lex
descending with explicit '*' and exact rational coefficients, so
parse(format(f)) == f holds for rational f and format is a fixed
point of format . parse on its own image.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Coeff = Union[Fraction, float]

NEG_INF = float("-inf")


def grlex_key(e: Exponent) -> Tuple[int, Exponent]:
    """Sort key for graded-lex order (ascending; reverse for canonical)."""
    return (sum(e), e)


def multi_factorial(e: Exponent) -> int:
    """I! = I_1! * ... * I_n!"""
    out = 1
    for k in e:
        out *= math.factorial(k)
    return out


class Poly:
    """Immutable-by-convention sparse polynomial.

    ``terms`` maps exponent tuples to nonzero coefficients.  Do not
    mutate ``terms`` after construction; all operations return new
    instances.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponent, Coeff] | None = None):
        if nvars < 0:
            raise ValueError(f"nvars must be >= 0, got {nvars}")
        clean: Dict[Exponent, Coeff] = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            if c != 0:
                clean[tuple(e)] = c
        self.nvars = nvars
        self.terms = clean

    # ---- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars, {})

    @staticmethod
    def const(nvars: int, c: Coeff) -> "Poly":
        return Poly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(i: int, nvars: int) -> "Poly":
        """The monomial x_{i+1} (0-based index i)."""
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for nvars={nvars}")
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    @staticmethod
    def monomial(e: Exponent, c: Coeff = Fraction(1)) -> "Poly":
        return Poly(len(e), {tuple(e): c})

    # ---- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Union[int, float]:
        """Total degree; -inf for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def sorted_terms(self) -> List[Tuple[Exponent, Coeff]]:
        """Terms in canonical (graded-lex descending) order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coefficient(self, e: Exponent) -> Coeff:
        return self.terms.get(tuple(e), Fraction(0))

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    # ---- arithmetic ---------------------------------------------------

    def _check_dim(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"dimension mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: Union["Poly", Coeff, int]) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, _as_coeff(other))
        self._check_dim(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Union["Poly", Coeff, int]) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, _as_coeff(other))
        return self + (-other)

    def __rsub__(self, other: Union[Coeff, int]) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Union["Poly", Coeff, int]) -> "Poly":
        if not isinstance(other, Poly):
            c = _as_coeff(other)
            return Poly(self.nvars, {e: a * c for e, a in self.terms.items()})
        self._check_dim(other)
        terms: Dict[Exponent, Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(self.nvars, terms)

    def __rmul__(self, other: Union[Coeff, int]) -> "Poly":
        return self * other

    def __truediv__(self, c: Union[Coeff, int]) -> "Poly":
        c = _as_coeff(c)
        if c == 0:
            raise ZeroDivisionError("division of polynomial by zero scalar")
        return self * (Fraction(1, 1) / c if isinstance(c, Fraction) else 1.0 / c)

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"polynomial power must be a non-negative int, got {k!r}")
        out = Poly.const(self.nvars, Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {dict(self.sorted_terms())!r})"

    # ---- evaluation ---------------------------------------------------

    def __call__(self, x: Sequence) -> Coeff:
        return evaluate(self, x)


def _as_coeff(c) -> Coeff:
    if isinstance(c, (Fraction, float)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


# ---- spec operations ---------------------------------------------------


def evaluate(f: Poly, x: Sequence) -> Coeff:
    """Sum of alpha_I * prod x_i^{I_i}; exact when f and x are rational."""
    if len(x) != f.nvars:
        raise ValueError(f"point has length {len(x)}, expected {f.nvars}")
    total: Coeff = Fraction(0)
    for e, c in f.terms.items():
        v = c
        for xi, k in zip(x, e):
            if k:
                v = v * xi**k
        total = total + v
    return total


def evaluate_batch(f: Poly, X) -> "object":
    """Vectorized float evaluation on an (N, nvars) numpy array."""
    import numpy as np

    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != f.nvars:
        raise ValueError(f"expected array of shape (N, {f.nvars}), got {X.shape}")
    out = np.zeros(X.shape[0])
    # cache powers per variable to avoid repeated pow calls
    pows: Dict[Tuple[int, int], object] = {}

    def power(i: int, k: int):
        key = (i, k)
        if key not in pows:
            pows[key] = X[:, i] ** k
        return pows[key]

    for e, c in f.terms.items():
        term = np.full(X.shape[0], float(c))
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out += term
    return out


def coeff_level_sq(f: Poly, d: int) -> Coeff:
    """Sum of alpha_I^2 over |I| = d, exact for rational coefficients."""
    if d < 0:
        raise ValueError(f"level must be >= 0, got {d}")
    total: Coeff = Fraction(0)
    for e, c in f.terms.items():
        if sum(e) == d:
            total = total + c * c
    return total


def coeff_level(f: Poly, d: int) -> float:
    """d-level content: sqrt(sum of squared degree-d coefficients)."""
    return math.sqrt(coeff_level_sq(f, d))


def max_top_coeff(f: Poly) -> Coeff:
    """max |alpha_I| over |I| = deg f.  Errors on the zero polynomial."""
    if f.is_zero():
        raise ValueError("max_top_coeff undefined for the zero polynomial")
    d = f.degree
    return max(abs(c) for e, c in f.terms.items() if sum(e) == d)


def partial_derivative(f: Poly, I: Exponent) -> Poly:
    """d^I f with the usual falling-factorial coefficients."""
    if len(I) != f.nvars:
        raise ValueError(f"multi-index length {len(I)} != nvars {f.nvars}")
    terms: Dict[Exponent, Coeff] = {}
    for e, c in f.terms.items():
        if any(k < i for k, i in zip(e, I)):
            continue
        fall = 1
        for k, i in zip(e, I):
            for j in range(i):
                fall *= k - j
        new_e = tuple(k - i for k, i in zip(e, I))
        terms[new_e] = terms.get(new_e, 0) + c * fall
    return Poly(f.nvars, terms)


def laplacian(f: Poly) -> Poly:
    """Sum of second partials d^2 f / dx_i^2."""
    out = Poly.zero(f.nvars)
    for i in range(f.nvars):
        e = [0] * f.nvars
        e[i] = 2
        out = out + partial_derivative(f, tuple(e))
    return out


def multiply(f: Poly, g: Poly) -> Poly:
    """Coefficient convolution over multi-indices (same as f * g)."""
    return f * g


def bombieri_inner(f: Poly, g: Poly) -> Coeff:
    """Bombieri inner product sum_I I! a_I b_I of equal-degree homogeneous f, g."""
    f._check_dim(g)
    if not (f.is_homogeneous() and g.is_homogeneous()):
        raise ValueError("Bombieri inner product requires homogeneous inputs")
    if not f.is_zero() and not g.is_zero() and f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    total: Coeff = Fraction(0)
    small, large = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    for e, a in small.terms.items():
        b = large.terms.get(e)
        if b is not None:
            total = total + multi_factorial(e) * a * b
    return total


def apply_diff(f: Poly, g: Poly) -> Poly:
    """D_f(g) = f(d/dx) applied to g, i.e. sum_I a_I d^I g.

    For homogeneous f, g of equal degree this returns the constant
    polynomial with value bombieri_inner(f, g).
    """
    f._check_dim(g)
    out = Poly.zero(f.nvars)
    for e, a in f.terms.items():
        out = out + a * partial_derivative(g, e)
    return out


def permute_vars(f: Poly, perm: Sequence[int]) -> Poly:
    """Relabel variables: new variable j carries old exponent of perm[j]."""
    if sorted(perm) != list(range(f.nvars)):
        raise ValueError("perm must be a permutation of range(nvars)")
    return Poly(f.nvars, {tuple(e[p] for p in perm): c for e, c in f.terms.items()})


def norm_sq_poly(nvars: int) -> Poly:
    """The polynomial ||x||^2 = x1^2 + ... + xn^2."""
    terms: Dict[Exponent, Coeff] = {}
    for i in range(nvars):
        e = [0] * nvars
        e[i] = 2
        terms[tuple(e)] = Fraction(1)
    return Poly(nvars, terms)


# ---- text format --------------------------------------------------------


class PolyParseError(ValueError):
    """Syntax or range error in polynomial text, with 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+\.\d*|\.\d+|\d+)"
    r"|(?P<var>x[1-9]\d*)"
    r"|(?P<op>[-+*^()/])"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens: List[Tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Tuple[str, str, int]], n: int):
        self.tokens = tokens
        self.i = 0
        self.n = n

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise PolyParseError(f"expected {op!r}, found {text or 'end of input'!r}", pos)
        self.advance()

    def parse(self) -> Poly:
        poly = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected trailing token {text!r}", pos)
        return poly

    def expr(self) -> Poly:
        sign = 1
        kind, text, _ = self.peek()
        if kind == "op" and text in "+-":
            self.advance()
            sign = -1 if text == "-" else 1
        acc = self.term() * sign
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                t = self.term()
                acc = acc + t if text == "+" else acc - t
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text == "*":
                self.advance()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Poly:
        base = self.primary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text == "^":
                self.advance()
                base = base ** self.posint()
            else:
                return base

    def posint(self) -> int:
        kind, text, pos = self.peek()
        if kind != "num" or "." in text or int(text) < 1:
            raise PolyParseError(f"expected positive integer exponent, found {text or 'end of input'!r}", pos)
        self.advance()
        return int(text)

    def primary(self) -> Poly:
        kind, text, pos = self.advance()
        if kind == "num":
            value = Fraction(text)  # exact, including decimal literals
            nk, ntext, _ = self.peek()
            if nk == "op" and ntext == "/":
                if "." in text:
                    raise PolyParseError("rational literal requires integer numerator", pos)
                self.advance()
                dk, dtext, dpos = self.peek()
                if dk != "num" or "." in dtext:
                    raise PolyParseError(f"expected integer denominator, found {dtext or 'end of input'!r}", dpos)
                self.advance()
                if int(dtext) == 0:
                    raise PolyParseError("zero denominator", dpos)
                value = Fraction(int(text), int(dtext))
            return Poly.const(self.n, value)
        if kind == "var":
            idx = int(text[1:])
            if idx > self.n:
                raise PolyParseError(f"variable {text} out of range for n={self.n}", pos)
            return Poly.variable(idx - 1, self.n)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise PolyParseError(f"unexpected token {text or 'end of input'!r}", pos)


def parse_poly(text: str, n: int) -> Poly:
    """Parse polynomial text in n variables (x1 .. xn, 1-based)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not text or not text.strip():
        raise PolyParseError("empty input", 0)
    return _Parser(_tokenize(text), n).parse()


def _format_coeff(c: Coeff) -> str:
    # floats are serialized through their exact binary value so that
    # parse(format(f)) round-trips without precision loss
    return str(c if isinstance(c, Fraction) else Fraction(c))


def _format_monomial(e: Exponent) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k > 1:
            parts.append(f"x{i + 1}^{k}")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    """Canonical text: graded-lex descending, explicit '*', rational coefficients."""
    if f.is_zero():
        return "0"
    chunks: List[str] = []
    for e, c in f.sorted_terms():
        neg = c < 0
        mag = _format_coeff(-c if neg else c)
        mono = _format_monomial(e)
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"{'-' if neg else '+'} {body}")
    return " ".join(chunks)
