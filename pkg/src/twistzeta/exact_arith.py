"""Exact polynomial, truncated power series and rational function arithmetic over Q.

Everything here is built on :class:`fractions.Fraction`; no floating point
is ever introduced.  All value types are frozen and safe to share.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import PreconditionError, ReconstructionError

Rational = Fraction
Number = Union[int, Fraction]


@functools.total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial.

    Compares below every integer but deliberately supports no arithmetic.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "-inf"


MINUS_INFINITY = _MinusInfinity()


def _as_fractions(values: Iterable[Number]) -> tuple:
    return tuple(Fraction(v) for v in values)


def format_rational(x: Number) -> str:
    """Canonical ``num/den`` string used in every serialized artifact."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: Union[str, int]) -> Fraction:
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"cannot parse {text!r} as an exact rational")


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial; ``coefficients[i]`` multiplies ``t**i``."""

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = list(_as_fractions(self.coefficients))
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> "Polynomial":
        return cls((0,) * degree + (c,))

    @property
    def degree(self):
        if not self.coefficients:
            return MINUS_INFINITY
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return Fraction(0)

    @property
    def leading(self) -> Fraction:
        if self.is_zero():
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _to_poly(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-_to_poly(other))

    def __rsub__(self, other):
        return _to_poly(other) - self

    def __mul__(self, other):
        other = _to_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PreconditionError("negative polynomial power")
        result = Polynomial((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = _to_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        dq = len(other.coefficients) - 1
        lead = other.leading
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            quot[i - dq] = c
            if c:
                for j, b in enumerate(other.coefficients):
                    rem[i - dq + j] -= c * b
        return Polynomial(tuple(quot)), Polynomial(tuple(rem[:dq]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def scale(self, c: Number) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(tuple(c * a for a in self.coefficients))

    def monic(self) -> "Polynomial":
        return self.scale(1 / self.leading)

    def reverse(self) -> "Polynomial":
        """``t**deg * p(1/t)``; zero roots of ``p`` become lowered degree."""
        return Polynomial(tuple(reversed(self.coefficients)))

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i))

    def __repr__(self):
        if self.is_zero():
            return "Polynomial(0)"
        terms = []
        for i, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return "Polynomial(" + " + ".join(terms) + ")"


def _to_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial((x,))


def _primitive_int(p: Polynomial) -> list:
    """Integer coefficient list of p with denominators cleared and content removed."""
    lcm = 1
    for c in p.coefficients:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coefficients]
    content = math.gcd(*ints)
    return [x // content for x in ints]


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor (primitive pseudo-remainder sequence over Z)."""
    if p.is_zero() and q.is_zero():
        raise PreconditionError("gcd of two zero polynomials is undefined")
    if p.is_zero() or q.is_zero():
        return (q if p.is_zero() else p).monic()
    a, b = _primitive_int(p), _primitive_int(q)
    if len(a) < len(b):
        a, b = b, a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        lead = b[-1]
        while len(r) >= len(b):
            c = r[-1]
            shift = len(r) - len(b)
            r = [x * lead for x in r]
            for j, y in enumerate(b):
                r[shift + j] -= c * y
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        if r:
            content = math.gcd(*r)
            r = [x // content for x in r]
        a, b = b, r
    return Polynomial(tuple(a)).monic()


# --------------------------------------------------------------------------
# Truncated power series
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series known through ``t**order``."""

    coefficients: tuple
    order: int

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _as_fractions(self.coefficients))
        if self.order < 0 or len(self.coefficients) != self.order + 1:
            raise PreconditionError(
                f"series of order {self.order} needs {self.order + 1} coefficients, "
                f"got {len(self.coefficients)}"
            )

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[Number]) -> "TruncatedSeries":
        return cls(tuple(coeffs), len(coeffs) - 1)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((0,) * (order + 1), order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((1,) + (0,) * order, order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coefficients[n]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise PreconditionError("cannot extend a truncated series")
        return TruncatedSeries(self.coefficients[: order + 1], order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries(
            tuple(self[i] + other[i] for i in range(n + 1)), n
        )

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coefficients), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other)
            return TruncatedSeries(tuple(c * a for a in self.coefficients), self.order)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self[i]
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other[j]
        return TruncatedSeries(tuple(out), n)

    __rmul__ = __mul__

    def to_polynomial(self) -> Polynomial:
        return Polynomial(self.coefficients)


def series_exp(g: TruncatedSeries) -> TruncatedSeries:
    """exp(G) through the order of G, via n*e_n = sum_k k*g_k*e_{n-k}."""
    if g[0] != 0:
        raise PreconditionError("series_exp needs a zero constant term")
    e = [Fraction(1)]
    weighted = [k * g[k] for k in range(g.order + 1)]
    for n in range(1, g.order + 1):
        acc = sum((weighted[k] * e[n - k] for k in range(1, n + 1) if weighted[k]), Fraction(0))
        e.append(acc / n)
    return TruncatedSeries(tuple(e), g.order)


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """Inverse of :func:`series_exp` for series with constant term 1."""
    if s[0] != 1:
        raise PreconditionError("series_log needs constant term exactly 1")
    weighted = [Fraction(0)]  # k * l_k
    for n in range(1, s.order + 1):
        acc = n * s[n]
        for k in range(1, n):
            if weighted[k]:
                acc -= weighted[k] * s[n - k]
        weighted.append(acc)
    return TruncatedSeries(
        tuple([Fraction(0)] + [weighted[k] / k for k in range(1, s.order + 1)]),
        s.order,
    )


def series_derivative(g: TruncatedSeries) -> TruncatedSeries:
    if g.order < 1:
        raise PreconditionError("cannot differentiate a series known only to order 0")
    return TruncatedSeries(tuple(k * g[k] for k in range(1, g.order + 1)), g.order - 1)


def log_series_from_traces(traces: Sequence[Number], order: int) -> TruncatedSeries:
    """sum_{n=1..order} traces[n-1] * t^n / n."""
    if order > len(traces):
        raise PreconditionError(f"need {order} traces, have {len(traces)}")
    return TruncatedSeries(
        (0,) + tuple(Fraction(traces[n - 1]) / n for n in range(1, order + 1)), order
    )


# --------------------------------------------------------------------------
# Rational functions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """``numerator/denominator`` in lowest terms with ``denominator(0) == 1``."""

    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        if self.denominator.coeff(0) != 1:
            raise PreconditionError("denominator must have constant term 1")
        if not self.numerator.is_zero():
            if poly_gcd(self.numerator, self.denominator).degree != 0:
                raise PreconditionError("numerator and denominator are not coprime")
        elif self.denominator != Polynomial((1,)):
            raise PreconditionError("zero rational function must be 0/1")

    @classmethod
    def normalized(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        """Cancel common factors and scale so the denominator has constant term 1."""
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls(Polynomial(), Polynomial((1,)))
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        c0 = den.coeff(0)
        if c0 == 0:
            raise PreconditionError("rational function has a pole at t = 0")
        return cls(num.scale(1 / c0), den.scale(1 / c0))

    @classmethod
    def from_factors(cls, numerators: Iterable[Polynomial], denominators: Iterable[Polynomial]):
        num = Polynomial((1,))
        for p in numerators:
            num = num * p
        den = Polynomial((1,))
        for p in denominators:
            den = den * p
        return cls.normalized(num, den)

    def expand(self, order: int) -> TruncatedSeries:
        """Taylor coefficients through ``t**order`` (power-series division)."""
        den = self.denominator
        out = []
        for n in range(order + 1):
            acc = self.numerator.coeff(n)
            for k in range(1, min(n, len(den.coefficients) - 1) + 1):
                acc -= den.coefficients[k] * out[n - k]
            out.append(acc)
        return TruncatedSeries(tuple(out), order)

    def __repr__(self):
        return f"RationalFunction({self.numerator!r} / {self.denominator!r})"


def _remove_content(row: list, rhs: int) -> tuple:
    g = math.gcd(rhs, *row)
    if g > 1:
        return [x // g for x in row], rhs // g
    return row, rhs


def reconstruct_rational(
    a: Sequence[Number], max_num_deg: int, max_den_deg: int
) -> RationalFunction:
    """Recover the rational function with bounded degrees whose expansion is ``a``.

    Solves the Toeplitz system for a denominator with constant term 1
    (equations for indices ``m+1 .. m+n``), takes the numerator as the product
    truncated at degree ``m`` and checks every supplied coefficient.
    """
    a = _as_fractions(a)
    m, n = max_num_deg, max_den_deg
    if m < 0 or n < 0:
        raise PreconditionError("degree bounds must be nonnegative")
    if len(a) < m + n + 1:
        raise PreconditionError(
            f"need at least {m + n + 1} coefficients, got {len(a)}"
        )

    def coef(i):
        return a[i] if i >= 0 else Fraction(0)

    # The equations sum_{j=1..n} q_j a_{k-j} = -a_k are homogeneous in a, so
    # clear denominators and eliminate over Z (content removed each step).
    # Rows are reduced in index order so an inconsistent system reports the
    # first index that cannot be matched.
    scale = math.lcm(*(x.denominator for x in a))
    ia = [int(x * scale) for x in a]

    def icoef(i):
        return ia[i] if i >= 0 else 0

    pivots: dict = {}  # pivot column -> (integer row, rhs); zero in other pivot columns
    for k in range(m + 1, m + n + 1):
        row = [icoef(k - j) for j in range(1, n + 1)]
        rhs = -ia[k]
        for col, (prow, prhs) in pivots.items():
            f = row[col]
            if f:
                p = prow[col]
                row = [p * x - f * y for x, y in zip(row, prow)]
                rhs = p * rhs - f * prhs
                row, rhs = _remove_content(row, rhs)
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is None:
            if rhs != 0:
                raise ReconstructionError(
                    f"no rational function with degrees <= ({m}, {n})", k
                )
            continue
        for col, (prow, prhs) in list(pivots.items()):
            f = prow[lead]
            if f:
                p = row[lead]
                pivots[col] = _remove_content(
                    [p * x - f * y for x, y in zip(prow, row)], p * prhs - f * rhs
                )
        pivots[lead] = (row, rhs)

    q = [Fraction(0)] * n
    for col, (row, rhs) in pivots.items():
        q[col] = Fraction(rhs, row[col])  # free variables stay 0
    den = Polynomial((Fraction(1),) + tuple(q))
    num = Polynomial(
        tuple(
            sum((den.coeff(j) * coef(i - j) for j in range(min(i, n) + 1)), Fraction(0))
            for i in range(m + 1)
        )
    )
    result = RationalFunction.normalized(num, den)
    expansion = result.expand(len(a) - 1)
    for i, c in enumerate(a):
        if expansion[i] != c:
            raise ReconstructionError(
                f"no rational function with degrees <= ({m}, {n})", i
            )
    return result
