"""Peaks-over-threshold tail risk toolkit.

Transforms an earnings series into returns, fits Generalized Pareto tails
by maximum likelihood, validates the fits with Cramér–von Mises and
Anderson–Darling statistics, and estimates value-at-risk and expected
shortfall with a maximum-VaR threshold selection.
"""

from importlib import resources
from pathlib import Path

from .errors import PotriskError, ValidationError
from .excess import (
    MeanExcessCurve,
    candidate_thresholds,
    mean_excess_curve,
    mean_excess_empirical,
    mean_excess_theoretical,
)
from .gof import (
    ALPHA_LEVELS,
    CRITICAL_VALUE_TABLE,
    CriticalValueTable,
    GofReport,
    anderson_darling,
    cramer_von_mises,
    test_gpd_fit,
    transform_to_uniform,
)
from .gpd import (
    ExcessSample,
    FitResult,
    GpdParams,
    fit_mle,
    gpd_cdf,
    gpd_log_likelihood,
    gpd_quantile,
    gpd_sample,
)
from .report import AnalysisConfig, analyze, trend_coefficients
from .risk import (
    HEAVY_TAIL,
    SHORT_TAIL,
    RiskEstimate,
    ThresholdScan,
    expected_shortfall,
    scan_thresholds,
    scan_with_alpha_filter,
    value_at_risk,
)
from .series import (
    BoxPlotSummary,
    EarningsSeries,
    ReturnSeries,
    box_plot,
    compute_returns,
    split_by_period,
    split_by_sign,
)

__version__ = "0.1.0"


def bundled_data_path(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(resources.files("potrisk") / "data" / name)
