"""Nonnegativity of log-zeta series and what it forces on the exponential.

The n-th derivative of exp(G) at 0 is P_n(G'(0), ..., G^(n)(0)) for a
polynomial P_n with positive integer coefficients (the complete Bell
polynomial), and P_n = x_n + (terms free of x_n).  So a nonnegative G is
coefficientwise dominated by exp(G), and the two share a radius of
convergence.  The checks below test those facts on finite data.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import PreconditionError
from .exact_arith import TruncatedSeries, series_exp

MAX_BELL_INDEX = 12


@dataclass(frozen=True)
class BellPolynomial:
    """Sparse polynomial in x_1..x_n: exponent tuple -> positive coefficient."""

    n: int
    terms: dict = field(hash=False)

    def __post_init__(self):
        problems = self.invariant_violations()
        if problems:
            raise ValueError(f"P_{self.n}: " + "; ".join(problems))

    def invariant_violations(self) -> list:
        out = []
        top = tuple(1 if i == self.n - 1 else 0 for i in range(self.n))
        for exps, c in self.terms.items():
            if len(exps) != self.n:
                out.append(f"multi-index {exps} has wrong length")
            if not (isinstance(c, int) and c > 0):
                out.append(f"coefficient {c} of {exps} is not a positive integer")
            if exps != top and exps[self.n - 1] != 0:
                out.append(f"monomial {exps} involves x_{self.n}")
        if self.terms.get(top) != 1:
            out.append(f"x_{self.n} does not appear with coefficient 1")
        return out

    def evaluate(self, values: Sequence) -> Fraction:
        if len(values) != self.n:
            raise PreconditionError(f"P_{self.n} takes {self.n} arguments")
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = Fraction(c)
            for v, e in zip(values, exps):
                if e:
                    term *= Fraction(v) ** e
            total += term
        return total

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        def mono(exps):
            parts = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e]
            return "*".join(parts)

        ordered = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return " + ".join(
            (f"{c}*" if c != 1 else "") + mono(exps) for exps, c in ordered
        )


def _next_bell(p: dict, k: int) -> dict:
    """P_{k+1} = sum_i x_{i+1} dP_k/dx_i + x_1 P_k, with indices grown to k+1."""
    out = defaultdict(int)
    for exps, c in p.items():
        exps = exps + (0,)
        for i in range(k):
            e = exps[i]
            if e:
                new = list(exps)
                new[i] -= 1
                new[i + 1] += 1
                out[tuple(new)] += c * e
        new = list(exps)
        new[0] += 1
        out[tuple(new)] += c
    return dict(out)


def bell_polynomials(n: int) -> list:
    """[P_1, ..., P_n] by the chain-rule recursion."""
    if not 1 <= n <= MAX_BELL_INDEX:
        raise PreconditionError(f"n must be in 1..{MAX_BELL_INDEX}, got {n}")
    terms = {(1,): 1}
    out = [BellPolynomial(1, terms)]
    for k in range(1, n):
        terms = _next_bell(terms, k)
        out.append(BellPolynomial(k + 1, terms))
    return out


# --- independent oracle: enumerate set partitions ------------------------------


def set_partitions(n: int) -> Iterator[list]:
    """All set partitions of {0..n-1}, as lists of blocks."""
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


def partition_polynomial(n: int) -> dict:
    """Sum over set partitions of prod x_{|block|}; equals P_n term by term."""
    out = defaultdict(int)
    for part in set_partitions(n):
        exps = [0] * n
        for block in part:
            exps[len(block) - 1] += 1
        out[tuple(exps)] += 1
    return dict(out)


# --- checks on series ----------------------------------------------------------


def _require_no_constant(g: TruncatedSeries):
    if g[0] != 0:
        raise PreconditionError(f"series must have zero constant term, got {g[0]}")


def nonneg_check(g: TruncatedSeries) -> Optional[int]:
    """None if every coefficient is >= 0, else the least negative index."""
    _require_no_constant(g)
    for n, c in enumerate(g.coefficients):
        if c < 0:
            return n
    return None


def derivative_domination_check(g: TruncatedSeries) -> Optional[int]:
    """None if n! [t^n] exp(G) >= n! [t^n] G for all n, else the first failing n.

    Only meaningful for nonnegative G, where a failure would be a bug.
    """
    _require_no_constant(g)
    bad = nonneg_check(g)
    if bad is not None:
        raise PreconditionError(f"series has a negative coefficient at index {bad}")
    e = series_exp(g)
    for n in range(1, g.order + 1):
        # the common n! factor does not change the comparison
        if e[n] < g[n]:
            return n
    return None


def radius_estimate(s: TruncatedSeries, window: int) -> float:
    """Estimate of the radius of convergence from the tail of s.

    Let m1 be the largest |a_n| over the last ``window`` indices (attained at
    n1) and m0 the same over the window before it (at n0).  The growth rate is
    (m1/m0)^(1/(n1-n0)), the geometric mean of the per-index ratios between the
    two peaks; the estimate is its reciprocal.  This cancels the polynomial
    factors that bias a plain root test.  If the earlier window is all zero the
    root test |a_n1|^(1/n1) is used instead.  Returns math.inf when the last
    window is all zero.
    """
    if window < 4:
        raise PreconditionError("window must be at least 4")
    if s.order < 2 * window:
        raise PreconditionError(f"need order >= {2 * window}, got {s.order}")
    coeffs = [abs(c) for c in s.coefficients]
    n_top = s.order

    def peak(lo: int, hi: int) -> tuple:
        idx = max(range(lo, hi + 1), key=lambda i: (coeffs[i], i))
        return idx, coeffs[idx]

    n1, m1 = peak(n_top - window + 1, n_top)
    if m1 == 0:
        return math.inf
    n0, m0 = peak(n_top - 2 * window + 1, n_top - window)
    if m0 == 0 or n0 == n1:
        log_growth = _log(m1) / n1
    else:
        log_growth = (_log(m1) - _log(m0)) / (n1 - n0)
    return math.exp(-log_growth)


def _log(x: Fraction) -> float:
    # exact rationals can overflow float; take logs of numerator and denominator
    return math.log(x.numerator) - math.log(x.denominator)


__all__ = [
    "MAX_BELL_INDEX",
    "BellPolynomial",
    "bell_polynomials",
    "set_partitions",
    "partition_polynomial",
    "nonneg_check",
    "derivative_domination_check",
    "radius_estimate",
]
