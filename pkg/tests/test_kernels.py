import math
import subprocess
import sys

import numpy as np
import pytest

from potrisk import _kernels


pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def _samples():
    rng = np.random.default_rng(123)
    small = rng.exponential(1.0, size=25)
    large = rng.pareto(4.0, size=4000) + 0.01
    return [np.ascontiguousarray(small), np.ascontiguousarray(large)]


def _taus(y):
    tau_min = -(1.0 - 1e-10) / y.max()
    return [0.0, 1e-9, -1e-9, 0.5, 5.0, tau_min * 0.5, tau_min * 0.999, tau_min]


class TestBackendEquivalence:
    def test_profile_nll(self):
        for y in _samples():
            for tau in _taus(y):
                a = _kernels.profile_nll_numpy(y, tau)
                b = _kernels.profile_nll_numba(y, tau)
                assert a == pytest.approx(b, rel=1e-12, abs=1e-9)

    def test_profile_nll_grid(self):
        for y in _samples():
            taus = np.asarray(_taus(y))
            a = _kernels.profile_nll_grid_numpy(y, taus)
            b = _kernels.profile_nll_grid_numba(y, taus)
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-9)

    def test_profile_nll_deriv(self):
        # near the feasibility edge the w/(tau*k) terms amplify
        # summation-order differences, hence the looser tolerance
        for y in _samples():
            for tau in _taus(y)[:-1]:
                a = _kernels.profile_nll_deriv_numpy(y, tau)
                b = _kernels.profile_nll_deriv_numba(y, tau)
                assert a == pytest.approx(b, rel=1e-8, abs=1e-6)

    def test_gpd_nll(self):
        for y in _samples():
            for xi, sigma in [(0.0, 1.0), (0.3, 0.5), (-0.2, 2.0)]:
                if xi < 0 and (1.0 + xi * y.max() / sigma) <= 0:
                    continue
                a = _kernels.gpd_nll_numpy(y, xi, sigma)
                b = _kernels.gpd_nll_numba(y, xi, sigma)
                assert a == pytest.approx(b, rel=1e-12)

    def test_infeasible_tau_is_inf(self):
        y = np.array([1.0, 2.0, 4.0])
        bad = -0.3  # 1 + tau*4 < 0
        assert _kernels.profile_nll_numpy(y, bad) == math.inf
        assert _kernels.profile_nll_numba(y, bad) == math.inf
        assert math.isnan(_kernels.profile_nll_deriv_numpy(y, bad))
        assert math.isnan(_kernels.profile_nll_deriv_numba(y, bad))


class TestDerivative:
    @pytest.mark.parametrize("tau", [-0.15, -1e-4, 1e-4, 0.3, 2.0])
    def test_matches_finite_differences(self, tau):
        y = np.ascontiguousarray(np.random.default_rng(5).exponential(1.0, 400))
        h = 1e-7 * max(1.0, abs(tau))
        fd = (_kernels.profile_nll_numpy(y, tau + h) - _kernels.profile_nll_numpy(y, tau - h)) / (2 * h)
        assert _kernels.profile_nll_deriv_numpy(y, tau) == pytest.approx(fd, rel=1e-5, abs=1e-6)

    def test_zero_tau_limit(self):
        y = np.ascontiguousarray(np.random.default_rng(6).exponential(1.0, 400))
        left = _kernels.profile_nll_deriv_numpy(y, -1e-10)
        at0 = _kernels.profile_nll_deriv_numpy(y, 0.0)
        right = _kernels.profile_nll_deriv_numpy(y, 1e-10)
        assert left == pytest.approx(at0, rel=1e-5, abs=1e-8)
        assert right == pytest.approx(at0, rel=1e-5, abs=1e-8)


class TestBackendSelection:
    def _probe(self, env_value):
        code = "import potrisk._kernels as k; print(k.BACKEND)"
        env = {"POTRISK_BACKEND": env_value} if env_value is not None else {}
        import os

        full_env = dict(os.environ)
        full_env.pop("POTRISK_BACKEND", None)
        full_env.update(env)
        return subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=full_env
        )

    def test_default_prefers_numba(self):
        out = self._probe(None)
        assert out.stdout.strip() == "numba"

    def test_numpy_fallback_via_env(self):
        out = self._probe("numpy")
        assert out.stdout.strip() == "numpy"

    def test_invalid_value_rejected(self):
        out = self._probe("cuda")
        assert out.returncode != 0
        assert "POTRISK_BACKEND" in out.stderr

    def test_fit_results_agree_across_backends(self):
        code = (
            "from potrisk.gpd import ExcessSample, GpdParams, fit_mle, gpd_sample\n"
            "y = gpd_sample(GpdParams(0.2, 1.0), 2000, seed=99)\n"
            "r = fit_mle(ExcessSample(0.0, y, 2000))\n"
            "print(f'{r.params.shape:.12g} {r.params.scale:.12g}')\n"
        )
        import os

        runs = {}
        for backend in ("numba", "numpy"):
            env = dict(os.environ)
            env["POTRISK_BACKEND"] = backend
            out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
            assert out.returncode == 0, out.stderr
            runs[backend] = out.stdout.strip()
        assert runs["numba"] == runs["numpy"]
