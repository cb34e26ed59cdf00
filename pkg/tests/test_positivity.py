import math
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import nonneg_rationals, zero_constant_series
from twistzeta.errors import PreconditionError
from twistzeta.exact_arith import Polynomial, RationalFunction, TruncatedSeries, series_exp
from twistzeta.models import (
    AbelianProductModel,
    TorusModel,
    abelian_graded_action,
    torus_graded_action,
)
from twistzeta.positivity import (
    BellPolynomial,
    bell_polynomials,
    derivative_domination_check,
    nonneg_check,
    partition_polynomial,
    radius_estimate,
    set_partitions,
)
from twistzeta.zeta import zeta

F = Fraction
T = TruncatedSeries.from_coefficients


def test_nonneg_check_examples():
    curve = zeta(abelian_graded_action(AbelianProductModel(5, -3, 1, ((1,),))), 10)
    assert nonneg_check(curve.log_series) is None
    torus = zeta(torus_graded_action(TorusModel(2, ((2, 3), (1, 2)))))
    assert nonneg_check(torus.log_series) == 1
    assert torus.log_series[1] == -3
    assert nonneg_check(TruncatedSeries.zero(4)) is None
    with pytest.raises(PreconditionError):
        nonneg_check(T([1, 0, 0]))


def test_bell_examples():
    p1, p2, p3 = bell_polynomials(3)
    assert p1.terms == {(1,): 1}
    assert p2.terms == {(0, 1): 1, (2, 0): 1}
    assert p3.terms == {(0, 0, 1): 1, (1, 1, 0): 3, (3, 0, 0): 1}
    assert [p.evaluate([1] * p.n) for p in bell_polynomials(5)] == [1, 2, 5, 15, 52]
    for bad in (0, 13):
        with pytest.raises(PreconditionError):
            bell_polynomials(bad)


def test_bell_structure_up_to_ten():
    for p in bell_polynomials(10):
        assert p.invariant_violations() == []
        top = tuple(int(i == p.n - 1) for i in range(p.n))
        assert p.terms[top] == 1
        for exps, c in p.terms.items():
            assert isinstance(c, int) and c > 0
            assert exps == top or exps[-1] == 0


def test_bell_invariants_are_enforced():
    with pytest.raises(ValueError):
        BellPolynomial(2, {(2, 0): 1})  # no x_2 term
    with pytest.raises(ValueError):
        BellPolynomial(2, {(0, 1): 1, (1, 1): 2})  # x_2 inside another monomial


def test_set_partition_oracle():
    assert [sum(1 for _ in set_partitions(n)) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]
    for p in bell_polynomials(8):
        assert partition_polynomial(p.n) == p.terms


def test_bell_evaluation_length_checked():
    with pytest.raises(PreconditionError):
        bell_polynomials(2)[1].evaluate([1])


@settings(max_examples=100)
@given(zero_constant_series(coeffs=nonneg_rationals, max_order=8))
def test_bell_polynomials_give_derivatives_of_exp(g):
    e = series_exp(g)
    derivs = [factorial(k) * g[k] for k in range(1, g.order + 1)]
    for p in bell_polynomials(g.order):
        assert p.evaluate(derivs[: p.n]) == factorial(p.n) * e[p.n]


def test_domination_examples():
    harmonic = T([0] + [F(1, n) for n in range(1, 9)])
    assert derivative_domination_check(harmonic) is None
    assert derivative_domination_check(T([0, 1, 0, 0, 0])) is None
    with pytest.raises(PreconditionError):
        derivative_domination_check(T([0, 1, -1]))
    with pytest.raises(PreconditionError):
        derivative_domination_check(T([2, 1, 1]))


@settings(max_examples=500)
@given(zero_constant_series(coeffs=nonneg_rationals, max_order=10))
def test_domination_on_nonnegative_series(g):
    assert nonneg_check(g) is None
    assert derivative_domination_check(g) is None


def test_radius_examples():
    geo = RationalFunction(Polynomial((1,)), Polynomial((1, -4))).expand(32)
    assert radius_estimate(geo, 8) == pytest.approx(0.25, rel=0.05)
    g = T([0] + [F(2) ** n / n for n in range(1, 33)])
    r_g, r_e = radius_estimate(g, 8), radius_estimate(series_exp(g), 8)
    assert r_g == pytest.approx(0.5, rel=0.05) and r_e == pytest.approx(0.5, rel=0.05)
    assert r_g == pytest.approx(r_e, rel=0.05)
    assert radius_estimate(T([1, 2, 3] + [0] * 30), 8) == math.inf
    with pytest.raises(PreconditionError):
        radius_estimate(geo, 3)
    with pytest.raises(PreconditionError):
        radius_estimate(geo, 20)


@st.composite
def log_sums(draw):
    """G = sum_i c_i (b_i t)^n / n, so exp(G) = prod (1 - b_i t)^(-c_i)."""
    k = draw(st.integers(min_value=1, max_value=3))
    terms = draw(
        st.lists(
            st.tuples(
                st.sampled_from([F(1, 4), F(1, 2), F(1), F(3, 2), F(2)]),
                st.integers(min_value=1, max_value=5),
            ),
            min_size=k,
            max_size=k,
        )
    )
    order = 64
    coeffs = [F(0)] + [sum(c * F(b) ** n / n for c, b in terms) for n in range(1, order + 1)]
    return T(coeffs), max(b for _, b in terms)


@settings(max_examples=50)
@given(log_sums())
def test_exp_preserves_radius_estimate(data):
    g, b_max = data
    r_g = radius_estimate(g, 16)
    r_e = radius_estimate(series_exp(g), 16)
    assert r_g == pytest.approx(r_e, rel=0.10)
    assert r_g == pytest.approx(1 / b_max, rel=0.10)
