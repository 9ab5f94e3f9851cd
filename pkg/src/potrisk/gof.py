"""Goodness-of-fit testing for fitted GPD tails.

Cramér–von Mises W² and Anderson–Darling A² on probability-transformed
excesses, judged against a critical-value table indexed by the fitted
shape (rows 0.0–0.3) and significance level. The table is built for
estimated parameters and covers nonnegative shapes only: fits with a
negative shape, or one above 0.3, yield not_applicable verdicts.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryValue, EmptySample, UnknownAlphaLevel
from .gpd import GpdParams, gpd_cdf

__all__ = [
    "ALPHA_LEVELS",
    "CRITICAL_VALUE_TABLE",
    "CriticalValueTable",
    "GofReport",
    "anderson_darling",
    "cramer_von_mises",
    "interpolate_criticals",
    "test_gpd_fit",
    "transform_to_uniform",
    "verdicts_for",
]

ACCEPT = "accept"
REJECT = "reject"
NOT_APPLICABLE = "not_applicable"

ALPHA_LEVELS = (0.5, 0.25, 0.1, 0.05, 0.025, 0.01, 0.005)

_Z_CLAMP = 1e-12


@dataclass(frozen=True)
class CriticalValueTable:
    """Critical values per (shape row, alpha level) for W² and A²."""

    shapes: tuple[float, ...]
    alphas: tuple[float, ...]
    w2: tuple[tuple[float, ...], ...]
    a2: tuple[tuple[float, ...], ...]

    def row(self, shape: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
        i = self.shapes.index(shape)
        return self.w2[i], self.a2[i]


CRITICAL_VALUE_TABLE = CriticalValueTable(
    shapes=(0.0, 0.1, 0.2, 0.3),
    alphas=ALPHA_LEVELS,
    w2=(
        (0.057, 0.086, 0.124, 0.153, 0.183, 0.224, 0.255),
        (0.055, 0.081, 0.116, 0.144, 0.172, 0.210, 0.240),
        (0.053, 0.078, 0.111, 0.137, 0.164, 0.200, 0.228),
        (0.052, 0.076, 0.108, 0.133, 0.158, 0.193, 0.220),
    ),
    a2=(
        (0.397, 0.569, 0.796, 0.974, 1.158, 1.409, 1.603),
        (0.386, 0.550, 0.766, 0.935, 1.110, 1.348, 1.532),
        (0.376, 0.534, 0.741, 0.903, 1.069, 1.296, 1.471),
        (0.369, 0.522, 0.722, 0.879, 1.039, 1.257, 1.426),
    ),
)


@dataclass(frozen=True)
class GofReport:
    w2: float
    a2: float
    shape_used: float
    verdicts: dict[float, str]
    interpolated_criticals: dict[float, tuple[float, float]]

    @property
    def applicable(self) -> bool:
        return any(v != NOT_APPLICABLE for v in self.verdicts.values())

    def accepted_alphas(self) -> tuple[float, ...]:
        return tuple(a for a in ALPHA_LEVELS if self.verdicts[a] == ACCEPT)


def transform_to_uniform(excesses, params: GpdParams) -> np.ndarray:
    """Probability integral transform of the excesses, sorted ascending."""
    y = np.asarray(excesses, dtype=float)
    if y.size == 0:
        raise EmptySample("cannot transform an empty excess sample")
    z = gpd_cdf(params, y)
    return np.sort(np.atleast_1d(z))


def cramer_von_mises(z) -> float:
    """W² statistic of sorted probabilities z against uniformity."""
    z = np.asarray(z, dtype=float)
    n = z.size
    if n == 0:
        raise EmptySample("W² requires a nonempty sample")
    i = np.arange(1, n + 1)
    return float(np.sum((z - (2.0 * i - 1.0) / (2.0 * n)) ** 2) + 1.0 / (12.0 * n))


def anderson_darling(z) -> float:
    """A² statistic of sorted probabilities z against uniformity.

    Values are clamped into [1e-12, 1 - 1e-12] before the logs; anything
    still at 0 or 1 afterwards (non-finite input) raises BoundaryValue.
    """
    z = np.asarray(z, dtype=float)
    n = z.size
    if n == 0:
        raise EmptySample("A² requires a nonempty sample")
    z = np.clip(z, _Z_CLAMP, 1.0 - _Z_CLAMP)
    if np.any(~np.isfinite(z)) or np.any(z <= 0.0) or np.any(z >= 1.0):
        raise BoundaryValue("A² input contains values at 0 or 1 after clamping")
    i = np.arange(1, n + 1)
    s = np.sum((2.0 * i - 1.0) * (np.log(z) + np.log(1.0 - z[::-1])))
    return float(-n - s / n)


def interpolate_criticals(
    shape: float, table: CriticalValueTable = CRITICAL_VALUE_TABLE
) -> dict[float, tuple[float, float]]:
    """Critical values at ``shape``, linearly interpolated between table rows.

    Defined for shapes within the table's coverage only; extrapolation is
    refused and returns an empty mapping.
    """
    shapes = table.shapes
    if shape < shapes[0] or shape > shapes[-1]:
        return {}
    hi_idx = next(i for i, s in enumerate(shapes) if s >= shape)
    lo_idx = max(hi_idx - 1, 0)
    lo, hi = shapes[lo_idx], shapes[hi_idx]
    frac = 0.0 if hi == lo else (shape - lo) / (hi - lo)
    out = {}
    for j, alpha in enumerate(table.alphas):
        w2c = table.w2[lo_idx][j] + frac * (table.w2[hi_idx][j] - table.w2[lo_idx][j])
        a2c = table.a2[lo_idx][j] + frac * (table.a2[hi_idx][j] - table.a2[lo_idx][j])
        out[alpha] = (w2c, a2c)
    return out


def verdicts_for(
    w2: float,
    a2: float,
    shape: float,
    table: CriticalValueTable = CRITICAL_VALUE_TABLE,
) -> tuple[dict[float, str], dict[float, tuple[float, float]]]:
    """Per-alpha verdicts for given statistics at a fitted shape.

    Accept at a level when neither statistic exceeds its interpolated
    critical value; not_applicable at every level outside table coverage.
    """
    criticals = interpolate_criticals(shape, table)
    verdicts = {}
    for alpha in table.alphas:
        if not criticals:
            verdicts[alpha] = NOT_APPLICABLE
        else:
            w2c, a2c = criticals[alpha]
            verdicts[alpha] = ACCEPT if (w2 <= w2c and a2 <= a2c) else REJECT
    return verdicts, criticals


def test_gpd_fit(
    excesses,
    params: GpdParams,
    table: CriticalValueTable = CRITICAL_VALUE_TABLE,
) -> GofReport:
    """W²/A² report for a fitted GPD on its excess sample.

    Zero-valued transforms are dropped before both statistics.
    """
    z = transform_to_uniform(excesses, params)
    z = z[z != 0.0]
    if z.size == 0:
        raise EmptySample("all transformed values are zero")
    w2 = cramer_von_mises(z)
    a2 = anderson_darling(z)
    verdicts, criticals = verdicts_for(w2, a2, params.shape, table)
    return GofReport(
        w2=w2,
        a2=a2,
        shape_used=params.shape,
        verdicts=verdicts,
        interpolated_criticals=criticals,
    )


def require_alpha(alpha: float) -> float:
    """Validate that ``alpha`` is one of the tabulated levels."""
    for level in ALPHA_LEVELS:
        if math.isclose(alpha, level, rel_tol=0.0, abs_tol=1e-12):
            return level
    raise UnknownAlphaLevel(f"alpha must be one of {ALPHA_LEVELS}, got {alpha}")


def table_rows(table: CriticalValueTable = CRITICAL_VALUE_TABLE):
    """Iterate (shape, alpha, w2, a2) rows, e.g. for CSV export."""
    for i, shape in enumerate(table.shapes):
        for j, alpha in enumerate(table.alphas):
            yield shape, alpha, table.w2[i][j], table.a2[i][j]
