"""Spectral radii by cohomological parity, the parity/weight verdicts, and
the root-modulus bounds used to compare numerator and denominator roots.

Moduli are taken for the standard complex embedding: every model matrix is
rational, so eigenvalues are algebraic numbers evaluated in C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import matrices as mx
from .errors import ZeroRootError
from .models import GradedAction
from .roots import ModulusInterval, interval_max, max_root_modulus, min_root_modulus
from .zeta import ZetaResult

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not-applicable"

REFINEMENT_ROUNDS = 20


@dataclass(frozen=True)
class PieceRadius:
    degree: int
    weight: int
    radius: ModulusInterval


@dataclass(frozen=True)
class SpectralReport:
    lambda_even: ModulusInterval
    lambda_odd: ModulusInterval
    k_even: Optional[int]
    k_odd: Optional[int]
    ineq1: str
    ineq2: str
    pieces: tuple = ()
    resolution: Fraction = Fraction(0)


def _spectral_radius(a: tuple, tol: Fraction) -> ModulusInterval:
    if mx.size(a) == 0:
        return ModulusInterval.exact(0)
    return max_root_modulus(mx.charpoly(a), tol)


def _piece_radii(action: GradedAction, tol: Fraction) -> list:
    return [
        PieceRadius(p.degree, p.weight, _spectral_radius(p.f_action, tol))
        for p in action.pieces
        if p.dim
    ]


def _parity_lambda(radii: list, parity: int) -> ModulusInterval:
    return interval_max(r.radius for r in radii if r.degree % 2 == parity)


def _top_weight(radii: list, parity: int, lam: ModulusInterval) -> Optional[int]:
    weights = [
        r.weight for r in radii if r.degree % 2 == parity and r.radius.overlaps(lam)
    ]
    return max(weights) if weights else None


def spectral_report(action: GradedAction, tol) -> SpectralReport:
    """lambda/k per parity with verdicts on lambda_even >= lambda_odd and
    (on equality) k_even >= k_odd.

    Overlapping lambda brackets are refined by halving the tolerance.  If they
    still overlap once no bracket can shrink any further and every bracket met
    the requested tolerance, the radii are treated as equal.  If the requested
    tolerance itself could not be met, both verdicts are inconclusive.
    """
    tol = Fraction(tol)
    radii = _piece_radii(action, tol)
    current = tol
    for _ in range(REFINEMENT_ROUNDS):
        lam_even, lam_odd = _parity_lambda(radii, 0), _parity_lambda(radii, 1)
        if not lam_even.overlaps(lam_odd):
            break
        current /= 2
        refined = _piece_radii(action, current)
        if all(new.radius.width >= old.radius.width for new, old in zip(refined, radii)):
            break  # squaring cap reached everywhere: no further resolution
        radii = refined
    lam_even, lam_odd = _parity_lambda(radii, 0), _parity_lambda(radii, 1)
    k_even, k_odd = _top_weight(radii, 0, lam_even), _top_weight(radii, 1, lam_odd)

    if not lam_even.overlaps(lam_odd):
        ineq1 = HOLDS if lam_even.lo > lam_odd.hi else FAILS
        ineq2 = NOT_APPLICABLE
    elif all(r.radius.width <= tol for r in radii):
        ineq1 = HOLDS
        if k_odd is None or k_even is None:
            ineq2 = NOT_APPLICABLE
        else:
            ineq2 = HOLDS if k_even >= k_odd else FAILS
    else:
        ineq1 = ineq2 = INCONCLUSIVE
    if lam_even.overlaps(lam_odd) and lam_odd.hi == 0:
        # no odd spectrum at all: lambda_even >= 0 = lambda_odd trivially
        ineq1, ineq2 = HOLDS, NOT_APPLICABLE
    return SpectralReport(
        lambda_even=lam_even,
        lambda_odd=lam_odd,
        k_even=k_even,
        k_odd=k_odd,
        ineq1=ineq1,
        ineq2=ineq2,
        pieces=tuple(radii),
        resolution=max((r.radius.width for r in radii), default=Fraction(0)),
    )


@dataclass(frozen=True)
class DiscLemmaResult:
    verdict: str
    numerator_min: Optional[ModulusInterval]
    denominator_min: Optional[ModulusInterval]
    contradiction: bool


def disc_lemma_check(z: ZetaResult, positivity_ok: bool, tol) -> DiscLemmaResult:
    """Is the smallest root of the reduced denominator no farther out than
    the smallest root of the reduced numerator?

    A 'fails' verdict together with ``positivity_ok`` is a contradiction: the
    exponential of a nonnegative series cannot behave that way.
    """
    tol = Fraction(tol)
    num, den = z.reconstructed.numerator, z.reconstructed.denominator
    if num.degree == 0 or num.is_zero():
        return DiscLemmaResult(HOLDS, None, None, False)
    num_min = min_root_modulus(num, tol)
    if den.degree == 0:
        verdict = FAILS
        return DiscLemmaResult(verdict, num_min, None, positivity_ok)
    current = tol
    den_min = min_root_modulus(den, current)
    verdict = INCONCLUSIVE
    for _ in range(REFINEMENT_ROUNDS + 1):
        if den_min.hi <= num_min.lo:
            verdict = HOLDS
            break
        if den_min.lo > num_min.hi:
            verdict = FAILS
            break
        current /= 2
        new_num, new_den = min_root_modulus(num, current), min_root_modulus(den, current)
        if new_num.width >= num_min.width and new_den.width >= den_min.width:
            break
        num_min, den_min = new_num, new_den
    return DiscLemmaResult(verdict, num_min, den_min, positivity_ok and verdict == FAILS)


def _sqrt_bracket(n: int, bits: int = 64) -> tuple:
    """Rational (lo, hi) with lo <= sqrt(n) <= hi."""
    scale = 1 << bits
    root = math.isqrt(n * scale * scale)
    if root * root == n * scale * scale:
        return Fraction(root, scale), Fraction(root, scale)
    return Fraction(root, scale), Fraction(root + 1, scale)


def weight_bound_check(action: GradedAction, tol) -> list:
    """Violations of the weight bounds; empty when everything is consistent.

    * even degrees: every eigenvalue of (F o f)^* has modulus at most
      lambda_even * q^dim;
    * every piece: the extreme eigenvalue moduli of (F o f)^* equal those of
      f^* scaled by q^(weight/2).
    """
    tol = Fraction(tol)
    violations = []
    radii = _piece_radii(action, tol)
    lam_even = _parity_lambda(radii, 0)
    bound = lam_even.hi * Fraction(action.q) ** action.dim
    for piece in action.pieces:
        if not piece.dim:
            continue
        comb_cp = mx.charpoly(piece.combined())
        f_cp = mx.charpoly(piece.f_action)
        comb_max = max_root_modulus(comb_cp, tol)
        f_max = max_root_modulus(f_cp, tol)
        if piece.degree % 2 == 0 and comb_max.lo > bound + tol:
            violations.append(
                f"{piece.label()}: eigenvalue modulus >= {float(comb_max.lo):.10g} exceeds "
                f"lambda_even * q^dim <= {float(bound):.10g}"
            )
        s_lo, s_hi = _sqrt_bracket(action.q**piece.weight)
        problems = []
        if comb_max.lo > f_max.hi * s_hi + tol or comb_max.hi + tol < f_max.lo * s_lo:
            problems.append("largest")
        if f_cp.coeff(0) != 0 and comb_cp.coeff(0) != 0:
            try:
                comb_min = min_root_modulus(comb_cp, tol)
                f_min = min_root_modulus(f_cp, tol)
            except ZeroRootError:
                pass
            else:
                if comb_min.lo > f_min.hi * s_hi + tol or comb_min.hi + tol < f_min.lo * s_lo:
                    problems.append("smallest")
        if problems:
            violations.append(
                f"{piece.label()}: {' and '.join(problems)} eigenvalue modulus of F*f* is not "
                f"|f*| * q^({piece.weight}/2)"
            )
    return violations


__all__ = [
    "HOLDS",
    "FAILS",
    "INCONCLUSIVE",
    "NOT_APPLICABLE",
    "ModulusInterval",
    "PieceRadius",
    "SpectralReport",
    "DiscLemmaResult",
    "spectral_report",
    "disc_lemma_check",
    "weight_bound_check",
    "max_root_modulus",
    "min_root_modulus",
]
