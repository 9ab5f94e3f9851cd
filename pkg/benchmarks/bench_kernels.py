"""Compare the numba kernels against the pure-numpy fallback.

Times the profile negative log-likelihood (single evaluation and a
120-point grid), its derivative, and a full maximum-likelihood fit under
each backend. The fit is timed by swapping the kernel bindings that
potrisk.gpd resolves at call time.

Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from potrisk import _kernels  # noqa: E402
from potrisk.gpd import ExcessSample, GpdParams, fit_mle, gpd_sample  # noqa: E402

SIZES = (100, 1_000, 10_000)
GRID = np.concatenate([-np.geomspace(1e-4, 0.5, 60)[::-1], np.geomspace(1e-4, 10.0, 60)])

_BINDINGS = ("profile_nll", "profile_nll_grid", "profile_nll_deriv", "gpd_nll")


def _use(backend: str) -> None:
    for name in _BINDINGS:
        setattr(_kernels, name, getattr(_kernels, f"{name}_{backend}"))


def _time(fn, repeats=200) -> float:
    best = np.inf
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeats):
            fn()
        best = min(best, (time.perf_counter() - t0) / repeats)
    return best


def main() -> None:
    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return

    samples = {n: np.ascontiguousarray(gpd_sample(GpdParams(0.2, 1.0), n, seed=1)) for n in SIZES}

    # trigger jit compilation outside the timed region
    y0 = samples[SIZES[0]]
    _kernels.profile_nll_numba(y0, 0.1)
    _kernels.profile_nll_grid_numba(y0, GRID)
    _kernels.profile_nll_deriv_numba(y0, 0.1)
    _kernels.gpd_nll_numba(y0, 0.1, 1.0)

    rows = []
    for n, y in samples.items():
        cases = {
            "profile_nll": lambda k, y=y: k(y, 0.37),
            "nll_grid_120": lambda k, y=y: k(y, GRID),
            "nll_deriv": lambda k, y=y: k(y, 0.37),
        }
        kernel_of = {
            "profile_nll": ("profile_nll_numpy", "profile_nll_numba"),
            "nll_grid_120": ("profile_nll_grid_numpy", "profile_nll_grid_numba"),
            "nll_deriv": ("profile_nll_deriv_numpy", "profile_nll_deriv_numba"),
        }
        for case, call in cases.items():
            np_name, nb_name = kernel_of[case]
            t_np = _time(lambda: call(getattr(_kernels, np_name)))
            t_nb = _time(lambda: call(getattr(_kernels, nb_name)))
            rows.append((case, n, t_np, t_nb))

        sample = ExcessSample(0.0, y, n)
        _use("numpy")
        t_np = _time(lambda: fit_mle(sample), repeats=10)
        _use("numba")
        t_nb = _time(lambda: fit_mle(sample), repeats=10)
        rows.append(("fit_mle", n, t_np, t_nb))

    print(f"{'case':<14}{'n':>8}{'numpy':>12}{'numba':>12}{'speedup':>9}")
    for case, n, t_np, t_nb in rows:
        print(f"{case:<14}{n:>8}{t_np * 1e6:>10.1f}us{t_nb * 1e6:>10.1f}us{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
