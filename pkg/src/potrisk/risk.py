"""Tail risk measures and threshold selection.

Value-at-risk extrapolates the fitted GPD tail through the exceedance
frequency n_u/n; expected shortfall follows algebraically from the same
parameters. Threshold selection fits a GPD at every candidate threshold,
keeps the fits whose shape sign matches the expected tail regime, and
picks the candidate with the maximal VaR (ties broken toward the smaller
threshold, which keeps more data in the tail).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSample,
    InvalidCounts,
    InvalidProbability,
    NonConvergence,
    NoSurvivingCandidates,
    NotApplicable,
    ShapeAtOrAboveOne,
)
from .excess import candidate_thresholds
from .gof import (
    ACCEPT,
    CRITICAL_VALUE_TABLE,
    CriticalValueTable,
    GofReport,
    require_alpha,
    test_gpd_fit,
)
from .gpd import DEFAULT_MIN_EXCEEDANCES, ExcessSample, GpdParams, fit_mle

__all__ = [
    "HEAVY_TAIL",
    "SHORT_TAIL",
    "RiskEstimate",
    "ScanDiagnostics",
    "ThresholdScan",
    "expected_shortfall",
    "scan_thresholds",
    "scan_with_alpha_filter",
    "value_at_risk",
]

HEAVY_TAIL = "heavy_tail_positive_xi"
SHORT_TAIL = "short_tail_negative_xi"

# Fitted shapes within this band of zero belong to neither sign regime.
_SIGN_EPS = 1e-8


@dataclass(frozen=True)
class RiskEstimate:
    u: float
    params: GpdParams
    n: int
    n_u: int
    p: float
    var: float
    es: float | None
    gof: GofReport | None = None


@dataclass(frozen=True)
class ScanDiagnostics:
    candidates_total: int
    fit_errors: int
    not_converged: int
    boundary_hits: int
    wrong_sign: int
    surviving: int


@dataclass(frozen=True)
class ThresholdScan:
    estimates: tuple[RiskEstimate, ...]
    selected_index: int
    regime: str
    diagnostics: ScanDiagnostics

    @property
    def selected(self) -> RiskEstimate:
        return self.estimates[self.selected_index]


def value_at_risk(u: float, params: GpdParams, n: int, n_u: int, p: float) -> float:
    """Level exceeded with probability p under the fitted tail model.

    u + (sigma/xi) * (((n/n_u) * p)^(-xi) - 1), with the exponential limit
    u + sigma*ln(n_u/(n*p)) at shape zero.
    """
    if not 0.0 < p < 1.0:
        raise InvalidProbability(f"p must lie in (0, 1), got {p}")
    if not 0 < n_u <= n:
        raise InvalidCounts(f"need 0 < n_u <= n, got n_u={n_u}, n={n}")
    xi, sigma = params.shape, params.scale
    ratio = (n / n_u) * p
    if xi == 0.0:
        return u - sigma * math.log(ratio)
    return u + (sigma / xi) * math.expm1(-xi * math.log(ratio))


def expected_shortfall(var: float, u: float, params: GpdParams) -> float:
    """Expected size of an outcome beyond ``var``: (var + sigma - u*xi)/(1 - xi)."""
    xi, sigma = params.shape, params.scale
    if xi >= 1.0:
        raise ShapeAtOrAboveOne(
            f"expected shortfall diverges for shape >= 1, got {xi}"
        )
    return (var + sigma - u * xi) / (1.0 - xi)


def _sign_matches(xi: float, regime: str) -> bool:
    if regime == HEAVY_TAIL:
        return xi > _SIGN_EPS
    return xi < -_SIGN_EPS


def scan_thresholds(
    tail,
    p: float = 0.01,
    regime: str = HEAVY_TAIL,
    min_exceedances: int = DEFAULT_MIN_EXCEEDANCES,
    gof_table: CriticalValueTable = CRITICAL_VALUE_TABLE,
) -> ThresholdScan:
    """Fit every candidate threshold and select the maximal-VaR estimate.

    ``tail`` holds positive magnitudes (gains, or sign-flipped losses).
    Fits that error out or fail to converge are dropped but counted, as
    are fits whose shape sign contradicts ``regime``. Boundary optima are
    dropped too: there the likelihood is unbounded and the "fit" would
    only reflect the numerical feasibility margin. Goodness-of-fit
    reports are attached for the heavy-tail regime, where the critical
    table applies.
    """
    if regime not in (HEAVY_TAIL, SHORT_TAIL):
        raise ValueError(f"unknown regime {regime!r}")
    if not 0.0 < p < 1.0:
        raise InvalidProbability(f"p must lie in (0, 1), got {p}")
    x = np.asarray(tail, dtype=float)
    candidates = candidate_thresholds(x, min_exceedances)
    estimates = []
    fit_errors = 0
    not_converged = 0
    boundary_hits = 0
    wrong_sign = 0
    for u in candidates:
        sample = ExcessSample.from_sample(x, u)
        try:
            fit = fit_mle(sample, min_exceedances=min_exceedances)
        except (NonConvergence, DegenerateSample):
            fit_errors += 1
            continue
        if not fit.converged:
            not_converged += 1
            continue
        if fit.boundary_hit:
            boundary_hits += 1
            continue
        xi = fit.params.shape
        if not _sign_matches(xi, regime):
            wrong_sign += 1
            continue
        var = value_at_risk(float(u), fit.params, sample.n, sample.n_u, p)
        es = None if xi >= 1.0 else expected_shortfall(var, float(u), fit.params)
        gof = test_gpd_fit(sample.excesses, fit.params, gof_table) if regime == HEAVY_TAIL else None
        estimates.append(
            RiskEstimate(
                u=float(u), params=fit.params, n=sample.n, n_u=sample.n_u,
                p=p, var=var, es=es, gof=gof,
            )
        )
    diagnostics = ScanDiagnostics(
        candidates_total=int(candidates.size),
        fit_errors=fit_errors,
        not_converged=not_converged,
        boundary_hits=boundary_hits,
        wrong_sign=wrong_sign,
        surviving=len(estimates),
    )
    if not estimates:
        raise NoSurvivingCandidates(
            f"no candidate threshold survived the {regime} scan "
            f"(of {candidates.size}: {fit_errors} fit errors, "
            f"{not_converged} unconverged, {boundary_hits} at the boundary, "
            f"{wrong_sign} wrong-sign)"
        )
    selected = _argmax_var(estimates)
    return ThresholdScan(
        estimates=tuple(estimates),
        selected_index=selected,
        regime=regime,
        diagnostics=diagnostics,
    )


def _argmax_var(estimates) -> int:
    """Index of the maximal VaR; exact ties go to the smaller threshold."""
    best = 0
    for i in range(1, len(estimates)):
        if estimates[i].var > estimates[best].var or (
            estimates[i].var == estimates[best].var and estimates[i].u < estimates[best].u
        ):
            best = i
    return best


def scan_with_alpha_filter(scan: ThresholdScan, alpha: float) -> RiskEstimate:
    """Max-VaR estimate among those whose fit is accepted at ``alpha``."""
    alpha = require_alpha(alpha)
    if scan.regime == SHORT_TAIL:
        raise NotApplicable(
            "the critical-value table does not cover negative shapes; "
            "the short-tail scan has no goodness-of-fit verdicts"
        )
    survivors = [
        e for e in scan.estimates
        if e.gof is not None and e.gof.verdicts.get(alpha) == ACCEPT
    ]
    if not survivors:
        raise NoSurvivingCandidates(f"no estimate accepted at alpha={alpha}")
    return survivors[_argmax_var(survivors)]
