"""Concrete (X0, f0) models with weight-graded cohomology actions.

Every model hands back a :class:`GradedAction`: per (degree, weight) piece a
commuting pair of exact matrices, the action of f and of geometric
Frobenius.  Brute-force fixed-point and point-count oracles live here too,
so the trace-formula side can be checked against honest enumeration.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from functools import lru_cache

from . import matrices as mx
from .errors import (
    InsufficientExtensionError,
    NonIsolatedFixedPointsError,
    PreconditionError,
    UnsupportedRankError,
)
from .finite_field import MAX_FIELD_SIZE, field, is_prime, prime_power
from .roots import max_root_modulus, min_root_modulus

PURITY_RTOL = Fraction(1, 10**9)


@dataclass(frozen=True)
class GradedPiece:
    degree: int
    weight: int
    f_action: tuple
    frob_action: tuple

    def __post_init__(self):
        object.__setattr__(self, "f_action", mx.as_matrix(self.f_action))
        object.__setattr__(self, "frob_action", mx.as_matrix(self.frob_action))
        if self.degree < 0 or self.weight < 0:
            raise PreconditionError("degree and weight must be nonnegative")
        if mx.size(self.f_action) != mx.size(self.frob_action):
            raise PreconditionError(
                f"piece (H^{self.degree}, weight {self.weight}): f and Frobenius sizes differ"
            )
        if not mx.commutes(self.f_action, self.frob_action):
            raise PreconditionError(
                f"piece (H^{self.degree}, weight {self.weight}): f and Frobenius do not commute"
            )

    @property
    def dim(self) -> int:
        return mx.size(self.f_action)

    def combined(self) -> tuple:
        """Matrix of (F o f)^* on this piece."""
        return mx.matmul(self.frob_action, self.f_action)

    def label(self) -> str:
        return f"H^{self.degree} weight {self.weight}"


@lru_cache(maxsize=512)
def is_pure(frob_action: tuple, q: int, weight: int) -> bool:
    """All eigenvalue moduli equal q**(weight/2) up to PURITY_RTOL (certified brackets)."""
    n = mx.size(frob_action)
    if n == 0:
        return True
    target_sq = Fraction(q) ** weight
    diagonal = all(frob_action[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    if diagonal and len(set(frob_action[i][i] for i in range(n))) == 1:
        c = Fraction(frob_action[0][0])
        return c * c == target_sq
    cp = mx.charpoly(frob_action)
    if cp.coeff(0) == 0:
        return False
    radius = math.sqrt(float(target_sq))
    tol = Fraction(radius) * PURITY_RTOL / 4
    hi = max_root_modulus(cp, tol)
    lo = min_root_modulus(cp, tol)
    lower_sq = target_sq * (1 - PURITY_RTOL) ** 2
    upper_sq = target_sq * (1 + PURITY_RTOL) ** 2
    return lo.lo**2 >= lower_sq and hi.hi**2 <= upper_sq


@dataclass(frozen=True)
class GradedAction:
    pieces: tuple
    q: int
    proper: bool
    dim: int
    notes: tuple = dc_field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        prime_power(self.q)
        seen = set()
        for piece in self.pieces:
            key = (piece.degree, piece.weight)
            if key in seen:
                raise PreconditionError(f"two pieces for (degree, weight) = {key}")
            seen.add(key)
            if piece.degree > 2 * self.dim or piece.weight > 2 * self.dim:
                raise PreconditionError(
                    f"{piece.label()} exceeds 2*dim = {2 * self.dim}"
                )
        if self.proper:
            for piece in self.pieces:
                if not is_pure(piece.frob_action, self.q, piece.weight):
                    raise PreconditionError(
                        f"{piece.label()}: Frobenius eigenvalues are not of modulus "
                        f"q^({piece.weight}/2)"
                    )

    def parity_dims(self) -> tuple:
        """(total even-degree dimension, total odd-degree dimension)."""
        even = sum(p.dim for p in self.pieces if p.degree % 2 == 0)
        odd = sum(p.dim for p in self.pieces if p.degree % 2 == 1)
        return even, odd

    def iterate(self, r: int) -> "GradedAction":
        """Same Frobenius, f replaced by its r-th power."""
        if r < 1:
            raise PreconditionError("iterate must be >= 1")
        if r == 1:
            return self
        pieces = tuple(replace(p, f_action=mx.matpow(p.f_action, r)) for p in self.pieces)
        return GradedAction(pieces, self.q, self.proper, self.dim, self.notes)

    def twist(self, m: int) -> "GradedAction":
        """Frobenius replaced by its m-th power (the action of f o F^m)."""
        pieces = tuple(replace(p, frob_action=mx.matpow(p.frob_action, m)) for p in self.pieces)
        return GradedAction(pieces, self.q**m, self.proper, self.dim, self.notes)


# --------------------------------------------------------------------------
# Model descriptions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusModel:
    """Split rank-2 torus over F_q with the monomial map given by M."""

    q: int
    M: tuple

    def __post_init__(self):
        object.__setattr__(self, "M", mx.as_matrix(self.M))
        prime_power(self.q)
        if any(not isinstance(x, int) for row in self.M for x in row):
            raise PreconditionError("torus matrix must be integral")
        if mx.det(self.M) == 0:
            raise PreconditionError("torus matrix must be invertible over Q")

    @property
    def rank(self) -> int:
        return mx.size(self.M)


@dataclass(frozen=True)
class AbelianProductModel:
    """E^g for an elliptic curve with Frobenius trace a, and f acting by M."""

    q: int
    frob_trace: int
    g: int
    M: tuple

    def __post_init__(self):
        object.__setattr__(self, "M", mx.as_matrix(self.M))
        prime_power(self.q)
        if self.frob_trace**2 > 4 * self.q:
            raise PreconditionError(
                f"|a| = {abs(self.frob_trace)} violates the Weil bound 2*sqrt({self.q})"
            )
        if mx.size(self.M) != self.g or self.g < 1:
            raise PreconditionError(f"M must be {self.g}x{self.g}")
        if any(not isinstance(x, int) for row in self.M for x in row):
            raise PreconditionError("endomorphism matrix must be integral")
        if mx.det(self.M) == 0:
            raise PreconditionError("endomorphism matrix must have nonzero determinant")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def torus_graded_action(m: TorusModel) -> GradedAction:
    """H^2_c, H^3_c, H^4_c of a rank-2 split torus.

    f acts on H^3_c with eigenvalues sign(det M) * eig(M), on H^2_c by
    sign(det M) and on the top class H^4_c by |det M| (the degree of f).
    """
    if m.rank != 2:
        raise UnsupportedRankError(f"only rank-2 tori are built in (got rank {m.rank})")
    d = mx.det(m.M)
    s = _sign(d)
    q = m.q
    pieces = (
        GradedPiece(2, 0, ((s,),), ((1,),)),
        GradedPiece(3, 2, mx.scale(m.M, s), mx.scalar(q, 2)),
        GradedPiece(4, 4, ((abs(d),),), ((q * q,),)),
    )
    notes = () if d == 1 else (f"det M = {d} != 1: H^2_c/H^4_c actions are inferred",)
    return GradedAction(pieces, q, proper=False, dim=2, notes=notes)


def exterior_power(b: tuple, k: int) -> tuple:
    """k-th compound matrix; rows/columns are k-subsets in lexicographic order."""
    b = mx.as_matrix(b)
    n = mx.size(b)
    if not 0 <= k <= n:
        raise PreconditionError(f"exterior power {k} out of range for size {n}")
    subsets = list(itertools.combinations(range(n), k))
    return tuple(
        tuple(
            mx.det(tuple(tuple(b[i][j] for j in cols) for i in rows)) if k else 1
            for cols in subsets
        )
        for rows in subsets
    )


def frobenius_companion(frob_trace: int, q: int) -> tuple:
    """Companion matrix of t^2 - a t + q (trace a, determinant q)."""
    return ((0, -q), (1, frob_trace))


def abelian_graded_action(m: AbelianProductModel) -> GradedAction:
    g = m.g
    b_f = mx.kron(mx.transpose(m.M), mx.identity(2))
    b_frob = mx.kron(mx.identity(g), frobenius_companion(m.frob_trace, m.q))
    pieces = tuple(
        GradedPiece(k, k, exterior_power(b_f, k), exterior_power(b_frob, k))
        for k in range(2 * g + 1)
    )
    return GradedAction(pieces, m.q, proper=True, dim=g)


def constant_map_action(q: int) -> GradedAction:
    return GradedAction((GradedPiece(0, 0, ((1,),), ((1,),)),), q, proper=True, dim=0)


def trace_sequence(a: GradedAction, n_terms: int) -> list:
    """Alternating traces of ((F o f)^*)^n for n = 1..n_terms."""
    if n_terms < 1:
        raise PreconditionError("need at least one term")
    totals = [0] * n_terms
    for piece in a.pieces:
        sign = -1 if piece.degree % 2 else 1
        combined = piece.combined()
        power = combined
        for n in range(n_terms):
            if n:
                power = mx.matmul(power, combined)
            totals[n] += sign * mx.trace(power)
    return [Fraction(t) for t in totals]


def single_twist_trace(a: GradedAction, m: int) -> Fraction:
    """Alternating trace of (f o F^m)^*."""
    total = 0
    for piece in a.pieces:
        sign = -1 if piece.degree % 2 else 1
        total += sign * mx.trace(mx.matmul(mx.matpow(piece.frob_action, m), piece.f_action))
    return Fraction(total)


# --------------------------------------------------------------------------
# Fixed-point oracles
# --------------------------------------------------------------------------


def torus_fixed_count_formula(m: TorusModel, n: int) -> int:
    """|det(q^n M - I)| = number of fixed points of f o F^n on the torus."""
    if n < 1:
        raise PreconditionError("twist exponent must be >= 1")
    a = mx.sub(mx.scale(m.M, m.q**n), mx.identity(m.rank))
    d = mx.det(a)
    if d == 0:
        raise NonIsolatedFixedPointsError(f"det(q^{n} M - I) = 0")
    return abs(d)


def smith_invariants_2x2(a: tuple) -> tuple:
    """Invariant factors (d1, d2) of a nonsingular 2x2 integer matrix, d1 | d2."""
    d1 = math.gcd(*(x for row in a for x in row))
    det = abs(mx.det(a))
    if det == 0:
        raise NonIsolatedFixedPointsError("singular matrix has an infinite cokernel")
    return d1, det // d1


def required_extension(q: int, exponent: int) -> int:
    """Least s with exponent | q^s - 1 (the roots of unity needed live in F_{q^s})."""
    if math.gcd(q, exponent) != 1:
        raise NonIsolatedFixedPointsError("fixed-point group order divisible by the characteristic")
    s, power = 1, q % exponent
    while power != 1 % exponent:
        power = (power * q) % exponent
        s += 1
    return s


def torus_fixed_count_bruteforce(m: TorusModel, n: int, ext_bound: int) -> int:
    """Count (x, y) in (F_{q^s}^*)^2 solving x^A11 y^A12 = x^A21 y^A22 = 1, A = q^n M - I.

    All solutions over the algebraic closure have order dividing the top
    invariant factor e of Z^2/A Z^2, so they lie in the first F_{q^s} with
    e | q^s - 1.  Enumeration runs over the e-th roots of unity of that field
    using its discrete-log tables.
    """
    if n < 1 or ext_bound < 1:
        raise PreconditionError("twist exponent and extension bound must be >= 1")
    if m.rank != 2:
        raise UnsupportedRankError("brute force is implemented for rank 2")
    q = m.q
    if q**ext_bound > MAX_FIELD_SIZE:
        raise PreconditionError(f"q^{ext_bound} exceeds the enumeration guard {MAX_FIELD_SIZE}")
    a = mx.sub(mx.scale(m.M, q**n), mx.identity(2))
    _, e = smith_invariants_2x2(a)
    s = required_extension(q, e)
    if s > ext_bound:
        raise InsufficientExtensionError(
            f"fixed points need F_{{{q}^{s}}} but the bound is s <= {ext_bound}"
        )
    p, r = prime_power(q)
    fq = field(p, r * s)
    mu = fq.roots_of_unity(e)
    (a11, a12), (a21, a22) = a
    by_y = Counter((fq.pow(y, a12), fq.pow(y, a22)) for y in mu)
    return sum(by_y[(fq.inv(fq.pow(x, a11)), fq.inv(fq.pow(x, a21)))] for x in mu)


def elliptic_point_count_bruteforce(q: int, a4: int, a6: int, n: int) -> int:
    """#E(F_{q^n}) for y^2 = x^3 + a4 x + a6, point at infinity included."""
    if not is_prime(q) or q == 2:
        raise PreconditionError("q must be an odd prime")
    if n < 1 or q**n > 10**6:
        raise PreconditionError("need n >= 1 and q^n <= 10^6")
    if (4 * a4**3 + 27 * a6**2) % q == 0:
        raise PreconditionError("curve is singular mod q")
    fq = field(q, n)
    c4, c6 = fq.element(a4), fq.element(a6)
    count = 1
    for x in range(fq.size):
        rhs = fq.add(fq.add(fq.pow(x, 3), fq.mul(c4, x)), c6)
        if rhs == 0:
            count += 1
        elif fq.is_square(rhs):
            count += 2
    return count


def frob_trace_from_curve(q: int, a4: int, a6: int) -> int:
    return q + 1 - elliptic_point_count_bruteforce(q, a4, a6, 1)


def abelian_fixed_count(m: AbelianProductModel, twist: int) -> int:
    """deg(1 - f o F^twist) = det(I - B) for B the combined action on H^1."""
    b_f = mx.kron(mx.transpose(m.M), mx.identity(2))
    b_frob = mx.kron(mx.identity(m.g), frobenius_companion(m.frob_trace, m.q))
    b = mx.matmul(b_f, mx.matpow(b_frob, twist))
    return mx.det(mx.sub(mx.identity(2 * m.g), b))


def lefschetz_determinant_identity(b: tuple) -> bool:
    """sum_k (-1)^k Tr(Lambda^k B) == det(I - B)."""
    b = mx.as_matrix(b)
    n = mx.size(b)
    alternating = sum((-1) ** k * mx.trace(exterior_power(b, k)) for k in range(n + 1))
    return alternating == mx.det(mx.sub(mx.identity(n), b))
