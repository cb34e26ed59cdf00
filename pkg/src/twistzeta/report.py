"""The full pipeline for one model configuration and its canonical report."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .config import ModelConfig
from .errors import PreconditionError
from .exact_arith import Polynomial, format_rational
from .positivity import derivative_domination_check, nonneg_check, radius_estimate
from .roots import ModulusInterval
from .spectral import (
    FAILS,
    HOLDS,
    NOT_APPLICABLE,
    DiscLemmaResult,
    SpectralReport,
    disc_lemma_check,
    spectral_report,
    weight_bound_check,
)
from .zeta import ZetaResult, default_terms, n0_estimate, zeta

DEFAULT_TOL = Fraction(1, 10**9)
N0_MAX_TWIST = 8


@dataclass(frozen=True)
class PipelineDetails:
    """Live objects behind a report; not serialized."""

    zeta: ZetaResult
    spectral: SpectralReport
    disc: DiscLemmaResult


@dataclass(frozen=True)
class Report:
    config: dict
    traces: list
    zeta: dict
    spectral: dict
    positivity: dict
    disc_lemma: dict
    n0: dict
    weight_violations: list
    contradictions: list
    notes: list
    tol: str
    version: str
    details: Optional[PipelineDetails] = field(default=None, compare=False, repr=False)

    def body(self) -> dict:
        return {
            "config": self.config,
            "traces": self.traces,
            "zeta": self.zeta,
            "spectral": self.spectral,
            "positivity": self.positivity,
            "disc_lemma": self.disc_lemma,
            "n0": self.n0,
            "weight_violations": self.weight_violations,
            "contradictions": self.contradictions,
            "notes": self.notes,
            "tol": self.tol,
            "version": self.version,
        }

    @property
    def run_hash(self) -> str:
        return hashlib.sha256(canonical_json(self.body()).encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        out = self.body()
        out["run_hash"] = self.run_hash
        return out

    def to_json(self) -> str:
        return canonical_json(self.to_dict()) + "\n"


def canonical_json(tree) -> str:
    return json.dumps(tree, sort_keys=True, separators=(",", ":"), ensure_ascii=False,
                      allow_nan=False)


# --- encoders ------------------------------------------------------------------


def _poly(p: Polynomial) -> list:
    return [format_rational(c) for c in p.coefficients]


def _interval(i: Optional[ModulusInterval]):
    if i is None:
        return None
    return {"lo": format_rational(i.lo), "hi": format_rational(i.hi), "approx": i.midpoint()}


def _float(x: float):
    return "unbounded" if math.isinf(x) else x


# --- pipeline ------------------------------------------------------------------


def _positivity(z: ZetaResult, proper: bool) -> tuple:
    log_series = z.log_series
    violation = nonneg_check(log_series)
    out = {
        "log_zeta_nonneg": HOLDS if violation is None else FAILS,
        "first_violation": violation,
    }
    if violation is None:
        bad = derivative_domination_check(log_series)
        out["domination"] = HOLDS if bad is None else FAILS
        out["domination_first_failure"] = bad
    else:
        out["domination"] = NOT_APPLICABLE
        out["domination_first_failure"] = None
    order = log_series.order
    window = max(4, order // 4)
    if order >= 2 * window:
        out["radius_estimates"] = {
            "window": window,
            "log_zeta": _float(radius_estimate(log_series, window)),
            "zeta": _float(radius_estimate(z.series, window)),
        }
    else:
        out["radius_estimates"] = None
    out["positivity_ok"] = proper and violation is None
    return out, out["positivity_ok"]


def run_pipeline(cfg: ModelConfig, tol=DEFAULT_TOL) -> Report:
    """Traces, zeta, positivity, spectral verdicts, disc check, weight bounds, n0.

    Verdicts of 'fails' are results, never errors.  Anything that contradicts
    a proven statement is listed under ``contradictions``.
    """
    tol = Fraction(tol)
    action = cfg.graded_action()
    n_terms = cfg.terms if cfg.terms is not None else default_terms(action)
    z = zeta(action, n_terms)
    positivity, positivity_ok = _positivity(z, action.proper)
    spec = spectral_report(action, tol)
    disc = disc_lemma_check(z, positivity_ok, tol)
    violations = weight_bound_check(action, tol)

    model = cfg.model()
    if model is None:
        n0 = {"status": NOT_APPLICABLE, "value": None, "max_twist": None}
    else:
        value = n0_estimate(model, N0_MAX_TWIST)
        n0 = {
            "status": "found" if value is not None else "not-found",
            "value": value,
            "max_twist": N0_MAX_TWIST,
        }

    contradictions = []
    if not z.agreement:
        contradictions.append("series reconstruction and product formula disagree")
    if disc.contradiction:
        contradictions.append("disc check fails although the log-zeta series is nonnegative")
    if positivity["domination"] == FAILS:
        contradictions.append("exp(G) fails to dominate a nonnegative G")
    if action.proper:
        if spec.ineq1 == FAILS:
            contradictions.append("lambda_even < lambda_odd on a proper model")
        if spec.ineq2 == FAILS:
            contradictions.append("k_even < k_odd at equal radii on a proper model")
        contradictions.extend(f"weight bound: {v}" for v in violations)

    rec, prod = z.reconstructed, z.product_form
    report = Report(
        config=cfg.to_dict(),
        traces=[format_rational(t) for t in z.traces],
        zeta={
            "terms": n_terms,
            "series": [format_rational(c) for c in z.series.coefficients],
            "reconstructed": {"numerator": _poly(rec.numerator), "denominator": _poly(rec.denominator)},
            "product": {"numerator": _poly(prod.numerator), "denominator": _poly(prod.denominator)},
            "agreement": z.agreement,
            "cancelled_factor": _poly(z.cancelled),
        },
        spectral={
            "lambda_even": _interval(spec.lambda_even),
            "lambda_odd": _interval(spec.lambda_odd),
            "k_even": spec.k_even,
            "k_odd": spec.k_odd,
            "ineq1": spec.ineq1,
            "ineq2": spec.ineq2,
            "resolution": format_rational(spec.resolution),
            "pieces": [
                {"degree": p.degree, "weight": p.weight, "radius": _interval(p.radius)}
                for p in spec.pieces
            ],
        },
        positivity=positivity,
        disc_lemma={
            "verdict": disc.verdict,
            "numerator_min": _interval(disc.numerator_min),
            "denominator_min": _interval(disc.denominator_min),
            "contradiction": disc.contradiction,
        },
        n0=n0,
        weight_violations=violations,
        contradictions=contradictions,
        notes=list(action.notes),
        tol=format_rational(tol),
        version=__version__,
        details=PipelineDetails(z, spec, disc),
    )
    return report


def scan_iterates(cfg: ModelConfig, r_max: int, tol=DEFAULT_TOL) -> list:
    """run_pipeline for f^1 .. f^r_max, ordered by r.

    Runs sequentially: the interval arithmetic precision is process-global.
    """
    if r_max < 1:
        raise PreconditionError("r_max must be >= 1")
    return [run_pipeline(cfg.with_iterate(r), tol) for r in range(1, r_max + 1)]


def csv_rows(report: Report) -> list:
    """(n, trace_n, |coeff_n(Z)|) for n = 1..terms, as strings."""
    rows = [("n", "trace", "abs_zeta_coeff")]
    series = report.zeta["series"]
    for n, t in enumerate(report.traces, start=1):
        c = Fraction(series[n])
        rows.append((str(n), t, format_rational(abs(c))))
    return rows


__all__ = [
    "DEFAULT_TOL",
    "N0_MAX_TWIST",
    "Report",
    "PipelineDetails",
    "canonical_json",
    "run_pipeline",
    "scan_iterates",
    "csv_rows",
]
