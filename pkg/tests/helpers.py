"""Shared fixtures-in-spirit: generative models and independent oracles."""

import datetime

import numpy as np

from potrisk.gpd import GpdParams, gpd_quantile, gpd_sample
from potrisk.series import ReturnSeries


def gpd_logpdf_direct(y, xi, sigma):
    """Independent GPD log-density for likelihood cross-checks."""
    y = np.asarray(y, dtype=float)
    if sigma <= 0:
        return -np.inf
    if xi == 0.0:
        return float(np.sum(-np.log(sigma) - y / sigma))
    t = 1.0 + xi * y / sigma
    if np.any(t <= 0):
        return -np.inf
    return float(np.sum(-np.log(sigma) - (1.0 / xi + 1.0) * np.log(t)))


def ks_distance(sample, cdf) -> float:
    """Kolmogorov-Smirnov distance between a sample and a cdf callable."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    f = np.asarray(cdf(x))
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return float(max(upper, lower))


def grafted_sample(seed, n=1000, tail_prob=0.10, shape=0.25, scale=1.0, graft_at=1.0):
    """Uniform body with a GPD tail grafted above ``graft_at``.

    The true upper quantile at level p < tail_prob is
    graft_at + gpd_quantile(1 - p/tail_prob).
    """
    rng = np.random.default_rng(seed)
    is_tail = rng.random(n) < tail_prob
    body = rng.random(n) * graft_at
    tail = graft_at + np.asarray(gpd_sample(GpdParams(shape, scale), n, seed=seed + 10_000))
    return np.where(is_tail, tail, body)


def grafted_true_quantile(p, tail_prob=0.10, shape=0.25, scale=1.0, graft_at=1.0) -> float:
    return graft_at + float(gpd_quantile(GpdParams(shape, scale), 1.0 - p / tail_prob))


def weekly_returns(values, start=datetime.date(2000, 1, 7)) -> ReturnSeries:
    """Wrap raw values into a ReturnSeries with weekly dates."""
    vals = np.asarray(values, dtype=float)
    dates = tuple(start + datetime.timedelta(weeks=i) for i in range(vals.size))
    return ReturnSeries(dates=dates, values=vals)
