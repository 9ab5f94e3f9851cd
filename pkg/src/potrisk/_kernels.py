"""Numeric kernels behind the GPD likelihood machinery.

Each kernel exists twice: a numba-compiled loop and a pure-numpy fallback.
The active implementation is chosen once, at import time, from the
POTRISK_BACKEND environment variable ("numba" or "numpy"). Unset, it
prefers numba and silently falls back to numpy when numba cannot be
imported. The numba path pays off in the threshold scan, where hundreds of
small-sample fits each drive many likelihood evaluations; see
benchmarks/bench_kernels.py for a comparison of both paths.

The profile trick: for a fixed ratio tau = shape/scale, the log-likelihood
is maximized in closed form by shape k(tau) = mean(log1p(tau * y)) with
scale k/tau, so the two-parameter fit reduces to a one-dimensional search
over tau. Kernels return the *negative* profile log-likelihood, +inf
outside the feasible region.
"""

import math
import os

import numpy as np

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "gpd_nll",
    "profile_nll",
    "profile_nll_deriv",
    "profile_nll_grid",
]


# -- pure numpy implementations ----------------------------------------------

def profile_nll_numpy(y: np.ndarray, tau: float) -> float:
    n = y.shape[0]
    if tau == 0.0:
        return n * (math.log(y.mean()) + 1.0)
    t = tau * y
    if np.min(t) <= -1.0:
        return math.inf
    k = np.log1p(t).mean()
    r = k / tau
    if not (r > 0.0) or not math.isfinite(r):
        return math.inf
    return n * (math.log(r) + k + 1.0)


def profile_nll_grid_numpy(y: np.ndarray, taus: np.ndarray) -> np.ndarray:
    out = np.empty(taus.shape[0])
    for j in range(taus.shape[0]):
        out[j] = profile_nll_numpy(y, taus[j])
    return out


def profile_nll_deriv_numpy(y: np.ndarray, tau: float) -> float:
    """Derivative of the negative profile log-likelihood in tau.

    Equal to n * (k'/k - 1/tau + k'). The first two terms cancel
    catastrophically near tau = 0, so they are evaluated as
    (tau*k' - k) / (tau*k) with the numerator accumulated per element,
    where each term t/(1+t) - log1p(t) is O(t^2) and loses no accuracy.
    Returns nan when tau is infeasible.
    """
    n = y.shape[0]
    if tau == 0.0:
        m1 = y.mean()
        m2 = float(np.mean(y * y))
        return n * (m1 - m2 / (2.0 * m1))
    t = tau * y
    if np.min(t) <= -1.0:
        return math.nan
    l = np.log1p(t)
    w = t / (1.0 + t)
    k = l.mean()
    kp = w.mean() / tau
    g = float(np.mean(w - l)) / (tau * k)
    return n * (g + kp)


def gpd_nll_numpy(y: np.ndarray, xi: float, sigma: float) -> float:
    """Negative GPD log-likelihood at (xi, sigma), +inf when infeasible."""
    n = y.shape[0]
    if not (sigma > 0.0):
        return math.inf
    if xi == 0.0:
        return n * math.log(sigma) + float(y.sum()) / sigma
    t = (xi / sigma) * y
    if np.min(t) <= -1.0:
        return math.inf
    return n * math.log(sigma) + (1.0 + 1.0 / xi) * float(np.log1p(t).sum())


# -- numba implementations ----------------------------------------------------

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None
    HAVE_NUMBA = False


if HAVE_NUMBA:

    @njit(cache=True)
    def profile_nll_numba(y, tau):
        n = y.shape[0]
        if tau == 0.0:
            m = 0.0
            for i in range(n):
                m += y[i]
            return n * (math.log(m / n) + 1.0)
        acc = 0.0
        for i in range(n):
            t = tau * y[i]
            if t <= -1.0:
                return math.inf
            acc += math.log1p(t)
        k = acc / n
        r = k / tau
        if not (r > 0.0) or not math.isfinite(r):
            return math.inf
        return n * (math.log(r) + k + 1.0)

    @njit(cache=True)
    def profile_nll_grid_numba(y, taus):
        out = np.empty(taus.shape[0])
        for j in range(taus.shape[0]):
            out[j] = profile_nll_numba(y, taus[j])
        return out

    @njit(cache=True)
    def profile_nll_deriv_numba(y, tau):
        n = y.shape[0]
        if tau == 0.0:
            m1 = 0.0
            m2 = 0.0
            for i in range(n):
                m1 += y[i]
                m2 += y[i] * y[i]
            m1 /= n
            m2 /= n
            return n * (m1 - m2 / (2.0 * m1))
        acc_l = 0.0
        acc_w = 0.0
        acc_d = 0.0
        for i in range(n):
            t = tau * y[i]
            if t <= -1.0:
                return math.nan
            l = math.log1p(t)
            w = t / (1.0 + t)
            acc_l += l
            acc_w += w
            acc_d += w - l
        k = acc_l / n
        kp = (acc_w / n) / tau
        g = (acc_d / n) / (tau * k)
        return n * (g + kp)

    @njit(cache=True)
    def gpd_nll_numba(y, xi, sigma):
        n = y.shape[0]
        if not (sigma > 0.0):
            return math.inf
        if xi == 0.0:
            acc = 0.0
            for i in range(n):
                acc += y[i]
            return n * math.log(sigma) + acc / sigma
        c = xi / sigma
        acc = 0.0
        for i in range(n):
            t = c * y[i]
            if t <= -1.0:
                return math.inf
            acc += math.log1p(t)
        return n * math.log(sigma) + (1.0 + 1.0 / xi) * acc


def _select_backend() -> str:
    choice = os.environ.get("POTRISK_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"POTRISK_BACKEND must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    if not HAVE_NUMBA:
        if choice == "numba":
            raise ImportError("POTRISK_BACKEND=numba but numba is not importable")
        return "numpy"
    return "numba"


BACKEND = _select_backend()

if BACKEND == "numba":
    profile_nll = profile_nll_numba
    profile_nll_grid = profile_nll_grid_numba
    profile_nll_deriv = profile_nll_deriv_numba
    gpd_nll = gpd_nll_numba
else:
    profile_nll = profile_nll_numpy
    profile_nll_grid = profile_nll_grid_numpy
    profile_nll_deriv = profile_nll_deriv_numpy
    gpd_nll = gpd_nll_numpy
