"""Mean-excess functions and candidate-threshold generation.

The empirical mean excess at u averages x - u over the observations that
exceed u; under a GPD tail it is linear in u with slope shape/(1 - shape),
so its trend diagnoses the tail regime. Candidate thresholds are the
observed order statistics themselves: a threshold between two data points
leaves the exceedance set unchanged and adds nothing.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, NoExceedances, TooFewObservations
from .gpd import GpdParams

__all__ = [
    "MeanExcessCurve",
    "candidate_thresholds",
    "mean_excess_curve",
    "mean_excess_empirical",
    "mean_excess_theoretical",
]


@dataclass(frozen=True)
class MeanExcessCurve:
    """Empirical mean-excess evaluations at increasing thresholds."""

    thresholds: np.ndarray
    mean_excesses: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        for name in ("thresholds", "mean_excesses", "counts"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.thresholds.size)


def mean_excess_empirical(sample, u: float) -> tuple[float, int]:
    """Average excess over u and the exceedance count.

    The sum runs over exceedances only, estimating E(X - u | X > u).
    """
    x = np.asarray(sample, dtype=float)
    exceed = x[x > u]
    if exceed.size == 0:
        raise NoExceedances(f"no sample values exceed u={u}")
    return float(np.mean(exceed - u)), int(exceed.size)


def mean_excess_theoretical(params: GpdParams, u: float) -> float:
    """GPD mean excess (scale + shape*u) / (1 - shape)."""
    xi, sigma = params.shape, params.scale
    if xi >= 1.0:
        raise InvalidParams(f"mean excess requires shape < 1, got {xi}")
    if sigma + xi * u <= 0.0:
        raise InvalidParams(f"mean excess undefined: scale + shape*u = {sigma + xi * u}")
    return (sigma + xi * u) / (1.0 - xi)


def candidate_thresholds(sample, min_exceedances: int) -> np.ndarray:
    """Distinct observed values u with at least ``min_exceedances`` points above.

    Sorted ascending. Because candidates are order statistics, the count
    above the k-th distinct value is exactly the number of larger
    observations.
    """
    x = np.asarray(sample, dtype=float)
    if x.size <= min_exceedances:
        raise TooFewObservations(
            f"sample size {x.size} must exceed min_exceedances={min_exceedances}"
        )
    distinct = np.unique(x)
    counts = np.searchsorted(np.sort(x), distinct, side="right")
    above = x.size - counts
    return distinct[above >= min_exceedances]


def mean_excess_curve(sample) -> MeanExcessCurve:
    """Empirical mean-excess curve at every candidate threshold."""
    x = np.asarray(sample, dtype=float)
    if x.size < 3:
        raise TooFewObservations("mean-excess curve needs at least 3 observations")
    thresholds = candidate_thresholds(x, 1)
    means = np.empty(thresholds.size)
    counts = np.empty(thresholds.size, dtype=int)
    for i, u in enumerate(thresholds):
        means[i], counts[i] = mean_excess_empirical(x, u)
    return MeanExcessCurve(thresholds=thresholds, mean_excesses=means, counts=counts)
