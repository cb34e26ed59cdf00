import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import int_matrices, weil_pairs
from twistzeta import matrices as mx
from twistzeta.errors import (
    InsufficientExtensionError,
    PreconditionError,
    UnsupportedRankError,
)
from twistzeta.finite_field import prime_power
from twistzeta.models import (
    AbelianProductModel,
    GradedAction,
    GradedPiece,
    TorusModel,
    abelian_graded_action,
    constant_map_action,
    elliptic_point_count_bruteforce,
    exterior_power,
    frob_trace_from_curve,
    lefschetz_determinant_identity,
    required_extension,
    smith_invariants_2x2,
    torus_fixed_count_bruteforce,
    torus_fixed_count_formula,
    torus_graded_action,
    trace_sequence,
)

FIB = ((2, 3), (1, 2))
E3_MATRIX = ((2, 3, 0), (1, 2, 0), (0, 0, 1))


def eigenvalues(m):
    return sorted(np.linalg.eigvals(np.array(m, dtype=float)), key=lambda z: (z.real, z.imag))


# --- torus ---------------------------------------------------------------------


def test_identity_torus_pieces():
    a = torus_graded_action(TorusModel(2, ((1, 0), (0, 1))))
    assert not a.proper and a.dim == 2
    assert [(p.degree, p.weight) for p in a.pieces] == [(2, 0), (3, 2), (4, 4)]
    assert all(p.f_action == mx.identity(p.dim) for p in a.pieces)
    frob_eigs = sorted(x for p in a.pieces for x in np.linalg.eigvals(np.array(p.frob_action, dtype=float)).real)
    assert frob_eigs == [1, 2, 2, 4]


def test_fibonacci_torus_pieces():
    a = torus_graded_action(TorusModel(2, FIB))
    h2, h3, h4 = a.pieces
    assert h3.frob_action == ((2, 0), (0, 2))
    assert np.allclose(eigenvalues(h3.f_action), [2 - math.sqrt(3), 2 + math.sqrt(3)])
    # det M = 1: identity on the outer degrees
    assert h2.f_action == ((1,),) and h4.f_action == ((1,),)
    assert a.notes == ()


def test_torus_outer_degrees_follow_the_degree_of_f():
    swap = torus_graded_action(TorusModel(3, ((0, 1), (1, 0))))
    assert swap.pieces[0].f_action == ((-1,),) and swap.pieces[2].f_action == ((1,),)
    assert swap.pieces[1].f_action == ((0, -1), (-1, 0))
    assert swap.notes
    doubling = torus_graded_action(TorusModel(2, ((2, 0), (0, 2))))
    assert doubling.pieces[2].f_action == ((4,),)


def test_torus_validation():
    with pytest.raises(PreconditionError):
        TorusModel(2, ((1, 2), (2, 4)))
    with pytest.raises(PreconditionError):
        TorusModel(6, FIB)
    with pytest.raises(UnsupportedRankError):
        torus_graded_action(TorusModel(2, ((1, 0, 0), (0, 1, 0), (0, 0, 1))))


def test_torus_fixed_count_formula_examples():
    assert torus_fixed_count_formula(TorusModel(2, FIB), 1) == 3
    assert torus_fixed_count_formula(TorusModel(2, FIB), 2) == 1
    assert torus_fixed_count_formula(TorusModel(2, ((1, 0), (0, 1))), 1) == 1


def test_torus_bruteforce_examples():
    m = TorusModel(2, FIB)
    assert required_extension(2, 3) == 2  # the cube roots of unity live in F_4
    assert torus_fixed_count_bruteforce(m, 1, 2) == 3
    assert torus_fixed_count_bruteforce(TorusModel(2, ((1, 0), (0, 1))), 1, 1) == 1
    with pytest.raises(InsufficientExtensionError):
        torus_fixed_count_bruteforce(m, 1, 1)
    with pytest.raises(PreconditionError):
        torus_fixed_count_bruteforce(m, 1, 30)


def test_smith_invariants():
    assert smith_invariants_2x2(((3, 6), (2, 3))) == (1, 3)
    assert smith_invariants_2x2(((2, 0), (0, 4))) == (2, 4)
    assert smith_invariants_2x2(((6, 0), (0, 4))) == (2, 12)


def _feasible_torus_cases(q, n, count, seed):
    """Seeded random invertible M (|entries| <= 3) whose fixed points fit in F_{q^s} <= 10^5."""
    rng = random.Random(seed)
    ext_bound = int(math.log(10**5, q))
    out = []
    while len(out) < count:
        m = tuple(tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
        if mx.det(m) == 0:
            continue
        a = mx.sub(mx.scale(m, q**n), mx.identity(2))
        e = smith_invariants_2x2(a)[1]
        if required_extension(q, e) <= ext_bound:
            out.append(m)
    return out, ext_bound


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_formula_matches_enumeration_on_random_tori(q, n):
    matrices, ext_bound = _feasible_torus_cases(q, n, 20, seed=1000 * q + n)
    for m in matrices:
        model = TorusModel(q, m)
        count = torus_fixed_count_formula(model, n)
        assert torus_fixed_count_bruteforce(model, n, ext_bound) == count
        # fixed-point counts are prime to the characteristic
        assert math.gcd(count, prime_power(q)[0]) == 1


# --- abelian products ----------------------------------------------------------


def test_exterior_power_examples():
    b = ((2, 0, 0), (0, 3, 0), (0, 0, 5))
    assert exterior_power(b, 0) == ((1,),)
    assert exterior_power(b, 3) == ((30,),)
    assert exterior_power(b, 2) == ((6, 0, 0), (0, 10, 0), (0, 0, 15))
    with pytest.raises(PreconditionError):
        exterior_power(b, 4)


@settings(max_examples=50)
@given(int_matrices(4, bound=3), st.integers(min_value=1, max_value=3))
def test_exterior_power_eigenvalues_are_products(b, k):
    eig = np.linalg.eigvals(np.array(b, dtype=float))
    expected = [np.prod([eig[i] for i in s]) for s in itertools.combinations(range(4), k)]
    got = np.linalg.eigvals(np.array(exterior_power(b, k), dtype=float))
    # compare as multisets via the characteristic polynomial coefficients
    assert np.allclose(np.poly(got), np.poly(expected), atol=1e-6 * max(1.0, np.abs(np.poly(expected)).max()))


def test_abelian_g1_frobenius():
    a = abelian_graded_action(AbelianProductModel(5, -3, 1, ((1,),)))
    h1 = a.pieces[1]
    assert mx.charpoly(h1.frob_action).coefficients == (5, 3, 1)
    assert a.pieces[0].f_action == ((1,),) and a.pieces[0].frob_action == ((1,),)
    assert a.proper and a.dim == 1


def test_abelian_e3_degree_one_action():
    a = abelian_graded_action(AbelianProductModel(5, -3, 3, E3_MATRIX))
    eig = sorted(np.linalg.eigvals(np.array(a.pieces[1].f_action, dtype=float)).real)
    r = math.sqrt(3)
    assert np.allclose(eig, [2 - r, 2 - r, 1, 1, 2 + r, 2 + r])
    assert [p.dim for p in a.pieces] == [1, 6, 15, 20, 15, 6, 1]


def test_abelian_validation():
    with pytest.raises(PreconditionError):
        AbelianProductModel(5, 5, 1, ((1,),))  # 25 > 20
    with pytest.raises(PreconditionError):
        AbelianProductModel(5, 1, 2, ((1, 2), (2, 4)))


def test_constant_map():
    for q in (2, 5):
        a = constant_map_action(q)
        assert trace_sequence(a, 6) == [1] * 6
        assert a.proper and a.dim == 0


# --- traces and point counts ---------------------------------------------------


def test_trace_sequence_examples():
    assert trace_sequence(torus_graded_action(TorusModel(2, FIB)), 3) == [-3, -39, -351]
    assert trace_sequence(abelian_graded_action(AbelianProductModel(5, -3, 1, ((1,),))), 1) == [9]
    with pytest.raises(PreconditionError):
        trace_sequence(constant_map_action(2), 0)


def test_elliptic_point_counts():
    assert elliptic_point_count_bruteforce(5, 1, 1, 1) == 9
    assert frob_trace_from_curve(5, 1, 1) == -3
    assert elliptic_point_count_bruteforce(5, 1, 1, 2) == 27
    with pytest.raises(PreconditionError):
        elliptic_point_count_bruteforce(5, 0, 0, 1)
    with pytest.raises(PreconditionError):
        elliptic_point_count_bruteforce(4, 1, 1, 1)


@pytest.mark.parametrize("q,a4,a6", [(5, 1, 1), (7, 2, 3), (11, 1, 0), (13, 5, 7)])
def test_frobenius_trace_counts_points(q, a4, a6):
    a = frob_trace_from_curve(q, a4, a6)
    action = abelian_graded_action(AbelianProductModel(q, a, 1, ((1,),)))
    traces = trace_sequence(action, 3)
    for n in (1, 2, 3):
        if q**n <= 10**6:
            assert traces[n - 1] == elliptic_point_count_bruteforce(q, a4, a6, n)


def test_lefschetz_identity_examples():
    assert lefschetz_determinant_identity(((0, 0), (0, 0)))
    assert lefschetz_determinant_identity(((2, 0), (0, 3)))


@settings(max_examples=200)
@given(int_matrices(4, bound=5))
def test_lefschetz_identity_random(b):
    assert lefschetz_determinant_identity(b)


# --- graded actions ------------------------------------------------------------


def test_graded_piece_rejects_noncommuting_pair():
    with pytest.raises(PreconditionError):
        GradedPiece(1, 1, ((1, 1), (0, 1)), ((1, 0), (0, 2)))
    with pytest.raises(PreconditionError):
        GradedPiece(1, 1, ((1,),), ((1, 0), (0, 1)))


def test_graded_action_validation():
    p = GradedPiece(0, 0, ((1,),), ((1,),))
    with pytest.raises(PreconditionError):
        GradedAction((p, p), 2, proper=False, dim=0)
    with pytest.raises(PreconditionError):
        GradedAction((GradedPiece(3, 3, ((1,),), ((1,),)),), 2, proper=False, dim=1)
    with pytest.raises(PreconditionError):  # impure Frobenius on a proper model
        GradedAction((GradedPiece(2, 2, ((1,),), ((3,),)),), 2, proper=True, dim=1)
    pure = GradedAction((GradedPiece(2, 2, ((1,),), ((2,),)),), 2, proper=True, dim=1)
    assert pure.parity_dims() == (1, 0)


@settings(max_examples=30)
@given(
    st.integers(min_value=1, max_value=2).flatmap(
        lambda g: st.tuples(weil_pairs(), int_matrices(g, bound=3, invertible=True))
    )
)
def test_purity_of_random_abelian_models(data):
    (a, q), m = data
    action = abelian_graded_action(AbelianProductModel(q, a, mx.size(m), m))
    for piece in action.pieces:
        moduli = np.abs(np.linalg.eigvals(np.array(piece.frob_action, dtype=float)))
        assert np.allclose(moduli, q ** (piece.weight / 2), rtol=1e-9)


def test_iterate_and_twist():
    a = torus_graded_action(TorusModel(2, FIB))
    sq = a.iterate(2)
    assert sq.pieces[1].f_action == mx.matpow(FIB, 2)
    assert a.twist(2).q == 4
    assert a.twist(2).pieces[1].frob_action == ((4, 0), (0, 4))
    with pytest.raises(PreconditionError):
        a.iterate(0)
    # the first trace of the twisted action is the m = 2 alternating trace
    assert trace_sequence(a.twist(2), 1) == [Fraction(1)]
