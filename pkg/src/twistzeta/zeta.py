"""The twisted zeta function, computed three ways.

1. exp of the generating series of alternating traces of (F o f)^n;
2. exact rational reconstruction of that series;
3. the alternating product of det(1 - t (F o f)^*) over cohomological degrees.

Routes 2 and 3 must agree exactly for every well-formed graded action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import matrices as mx
from .errors import PreconditionError
from .exact_arith import (
    Polynomial,
    RationalFunction,
    TruncatedSeries,
    log_series_from_traces,
    poly_gcd,
    reconstruct_rational,
    series_exp,
)
from .models import (
    AbelianProductModel,
    GradedAction,
    TorusModel,
    abelian_fixed_count,
    abelian_graded_action,
    single_twist_trace,
    torus_fixed_count_formula,
    torus_graded_action,
    trace_sequence,
)


@dataclass(frozen=True)
class ZetaResult:
    traces: tuple
    series: TruncatedSeries
    reconstructed: RationalFunction
    product_form: RationalFunction
    agreement: bool
    cancelled: Polynomial  # common factor removed from the raw product, 1 if none

    @property
    def log_series(self) -> TruncatedSeries:
        return log_series_from_traces(self.traces, self.series.order)


def zeta_series(traces: Sequence, n_terms: int) -> TruncatedSeries:
    return series_exp(log_series_from_traces(traces, n_terms))


def parity_factors(a: GradedAction) -> tuple:
    """(odd-degree factors, even-degree factors) det(1 - t (F o f)^*) per piece."""
    odd, even = [], []
    for piece in a.pieces:
        factor = mx.reversed_charpoly(piece.combined())
        (odd if piece.degree % 2 else even).append(factor)
    return odd, even


def _product(polys) -> Polynomial:
    out = Polynomial((1,))
    for p in polys:
        out = out * p
    return out


def product_formula(a: GradedAction) -> RationalFunction:
    odd, even = parity_factors(a)
    return RationalFunction.normalized(_product(odd), _product(even))


def default_terms(a: GradedAction) -> int:
    even, odd = a.parity_dims()
    return 2 * (even + odd) + 4


def zeta(a: GradedAction, n_terms: Optional[int] = None) -> ZetaResult:
    even, odd = a.parity_dims()
    if n_terms is None:
        n_terms = default_terms(a)
    if n_terms < even + odd + 1:
        raise PreconditionError(
            f"need at least {even + odd + 1} terms for degree bounds ({odd}, {even})"
        )
    traces = trace_sequence(a, n_terms)
    series = zeta_series(traces, n_terms)
    reconstructed = reconstruct_rational(series.coefficients, odd, even)
    odd_f, even_f = parity_factors(a)
    raw_num, raw_den = _product(odd_f), _product(even_f)
    product_form = RationalFunction.normalized(raw_num, raw_den)
    cancelled = poly_gcd(raw_num, raw_den)
    return ZetaResult(
        traces=tuple(traces),
        series=series,
        reconstructed=reconstructed,
        product_form=product_form,
        agreement=reconstructed == product_form,
        cancelled=cancelled,
    )


Model = Union[TorusModel, AbelianProductModel]


def n0_estimate(model: Model, max_m: int) -> Optional[int]:
    """Least twist m whose alternating trace is a nonnegative integer equal to Fix(f o F^m).

    Returns None when no m <= max_m qualifies.
    """
    if max_m < 1:
        raise PreconditionError("max_m must be >= 1")
    if isinstance(model, TorusModel):
        action = torus_graded_action(model)
        fixed = lambda m: torus_fixed_count_formula(model, m)  # noqa: E731
    elif isinstance(model, AbelianProductModel):
        action = abelian_graded_action(model)
        fixed = lambda m: abelian_fixed_count(model, m)  # noqa: E731
    else:
        raise TypeError(f"no fixed-point oracle for {type(model).__name__}")
    for m in range(1, max_m + 1):
        tr = single_twist_trace(action, m)
        if tr.denominator == 1 and tr >= 0 and tr == Fraction(fixed(m)):
            return m
    return None
