"""Certified enclosures of extreme root moduli via Graeffe root squaring.

Each squaring step maps the roots of p to their squares.  After m steps the
largest root modulus R of the squared polynomial is bracketed by
coefficient bounds (a Fujiwara-type upper bound and an elementary-symmetric
lower bound) whose ratio stays below 2*deg, so the enclosure for the
original radius R**(2**-m) shrinks geometrically.  Coefficients are carried
as outward-rounded intervals, so every returned bracket is rigorous.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv, libmp

from .errors import NoRootsError, ZeroRootError
from .exact_arith import Polynomial, poly_gcd

MAX_SQUARINGS = 64
_PRECISIONS = (128, 512, 2048)


@dataclass(frozen=True)
class ModulusInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo < 0 or self.lo > self.hi:
            raise ValueError(f"bad modulus interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x) -> "ModulusInterval":
        return cls(Fraction(x), Fraction(x))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_real(self, x: float) -> bool:
        return float(self.lo) <= x <= float(self.hi)

    def overlaps(self, other: "ModulusInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __mul__(self, c) -> "ModulusInterval":
        c = Fraction(c)
        if c < 0:
            raise ValueError("moduli scale by nonnegative factors only")
        return ModulusInterval(self.lo * c, self.hi * c)

    __rmul__ = __mul__

    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def interval_max(intervals) -> ModulusInterval:
    """Enclosure of the maximum of the enclosed quantities."""
    intervals = list(intervals)
    if not intervals:
        return ModulusInterval.exact(0)
    return ModulusInterval(max(i.lo for i in intervals), max(i.hi for i in intervals))


def _mpf_to_fraction(x) -> Fraction:
    # x is a degenerate interval endpoint; its raw mpf tuple is exact
    num, den = libmp.to_rational(x._mpi_[0])
    return Fraction(int(num), int(den))


def _round_outward(lo: Fraction, hi: Fraction, tol: Fraction) -> tuple:
    """Snap to a dyadic grid finer than tol/4, keeping the bracket valid."""
    bits = max(0, math.ceil(math.log2(4 / tol))) if tol < 4 else 0
    if lo > 0:
        # never collapse a positive lower bound to zero
        bits = max(bits, math.ceil(math.log2(2 / lo)))
    scale = 1 << bits
    lo_r = Fraction(math.floor(lo * scale), scale)
    hi_r = Fraction(-math.floor(-hi * scale), scale)
    return max(lo_r, Fraction(0)), hi_r


def _strip_zero_roots(p: Polynomial) -> Polynomial:
    coeffs = p.coefficients
    i = 0
    while coeffs[i] == 0:
        i += 1
    return Polynomial(coeffs[i:])


@functools.lru_cache(maxsize=4096)
def squarefree_part(p: Polynomial) -> Polynomial:
    """Same roots, each simple."""
    if p.degree < 2:
        return p
    return p // poly_gcd(p, p.derivative())


def _graeffe_step(a: list) -> list:
    d = len(a) - 1
    out = []
    for k in range(d + 1):
        s = a[k] ** 2
        if k % 2:
            s = -s
        acc = iv.mpf(0)
        for j in range(max(0, 2 * k - d), k):
            term = a[j] * a[2 * k - j]
            acc = acc - term if j % 2 else acc + term
        out.append(s + 2 * acc)
    return out


def _log2_estimate(x) -> float:
    """Cheap float log2 of a positive mpf; only used to rank candidates."""
    _, man, exp, bc = x._mpi_[0]
    top = man >> max(0, bc - 53)
    return math.log2(top) + exp + max(0, bc - 53)


def _bracket(a: list, m: int) -> tuple:
    """(lower, upper) mpf bounds for the max root modulus of the original polynomial."""
    d = len(a) - 1
    lead = a[d]
    up_pick = low_pick = None
    up_best = low_best = -math.inf
    for k in range(1, d + 1):
        c = abs(a[d - k] / lead)
        if k == d:
            c = c / 2
        if c.b > 0:
            est = _log2_estimate(c.b) / k
            if est > up_best:
                up_best, up_pick = est, (k, c.b)
        c = abs(a[d - k] / lead)
        if c.a > 0:
            est = (_log2_estimate(c.a) - math.log2(math.comb(d, k))) / k
            if est > low_best:
                low_best, low_pick = est, (k, c.a)
    # the choice of k only affects tightness; the bound itself is evaluated rigorously
    shrink = iv.mpf(2) ** m
    k, c = up_pick
    upper = iv.exp((iv.log(iv.mpf(2)) + iv.log(iv.mpf(c)) / k) / shrink).b
    if low_pick is None:
        return iv.mpf(0).a, upper
    k, c = low_pick
    low = (iv.log(iv.mpf(c)) - iv.log(iv.mpf(math.comb(d, k)))) / k
    return iv.exp(low / shrink).a, upper


class _Trajectory:
    """Running intersection of Graeffe brackets for one polynomial at one
    precision, extended lazily so repeated refinement never redoes work."""

    def __init__(self, p: Polynomial, prec: int):
        self.prec = prec
        with _precision(prec):
            self.coeffs = [iv.mpf(c.numerator) / iv.mpf(c.denominator) for c in p.coefficients]
        self.brackets = []  # brackets[m] = intersection over steps 0..m

    def _extend(self):
        m = len(self.brackets)
        with _precision(self.prec):
            if m:
                self.coeffs = _graeffe_step(self.coeffs)
            lower, upper = _bracket(self.coeffs, m)
        lo, hi = _mpf_to_fraction(lower), _mpf_to_fraction(upper)
        if self.brackets:
            # every step gives a valid bracket, so keep the intersection
            lo, hi = max(lo, self.brackets[-1][0]), min(hi, self.brackets[-1][1])
        self.brackets.append((lo, hi))

    def enclosure(self, target: Fraction) -> tuple:
        for m in range(MAX_SQUARINGS + 1):
            if m == len(self.brackets):
                self._extend()
            lo, hi = self.brackets[m]
            if hi - lo <= target:
                break
        return lo, hi


class _precision:
    def __init__(self, prec: int):
        self.prec = prec

    def __enter__(self):
        self.saved = iv.prec
        iv.prec = self.prec

    def __exit__(self, *exc):
        iv.prec = self.saved


@functools.lru_cache(maxsize=1024)
def _trajectory(p: Polynomial, prec: int) -> _Trajectory:
    return _Trajectory(p, prec)


@functools.lru_cache(maxsize=4096)
def max_root_modulus(p: Polynomial, tol) -> ModulusInterval:
    """Certified bracket of max |root| with width <= tol.

    If the squaring cap is reached first, the returned bracket is still
    valid but wider than tol; callers check ``width``.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if p.is_zero() or p.degree < 1:
        raise NoRootsError("polynomial has no roots")
    p = squarefree_part(_strip_zero_roots(p))
    if p.degree == 0:
        return ModulusInterval.exact(0)
    if p.degree == 1:
        return ModulusInterval.exact(abs(p.coeff(0) / p.coeff(1)))
    best = None
    for prec in _PRECISIONS:
        lo, hi = _trajectory(p, prec).enclosure(tol / 2)
        if best is None or hi - lo < best[1] - best[0]:
            best = (lo, hi)
        if hi - lo <= tol / 2:
            break
    lo, hi = _round_outward(best[0], best[1], tol)
    return ModulusInterval(lo, hi)


def min_root_modulus(p: Polynomial, tol) -> ModulusInterval:
    """Certified bracket of min |root|, from the reversed polynomial."""
    tol = Fraction(tol)
    if p.is_zero() or p.degree < 1:
        raise NoRootsError("polynomial has no roots")
    if p.coeff(0) == 0:
        raise ZeroRootError("polynomial vanishes at 0")
    rev = p.reverse()
    if p.degree == 1:
        return ModulusInterval.exact(abs(p.coeff(0) / p.coeff(1)))
    coarse = max_root_modulus(rev, Fraction(1, 4))
    # d(1/x) = dx/x^2: tighten so the reciprocal bracket meets tol
    inner_tol = tol * coarse.lo**2 / 4 if coarse.lo > 0 else tol
    inner_tol = min(inner_tol, tol)
    r = max_root_modulus(rev, inner_tol)
    lo, hi = _round_outward(1 / r.hi, 1 / r.lo, tol)
    return ModulusInterval(lo, hi)
