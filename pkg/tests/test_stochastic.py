import numpy as np
import pytest

from kklab import (
    DegenerateEnsembleError,
    EnsembleStats,
    LinearizedRegimeWarning,
    MomentBreakdownWarning,
    NoiseModel,
    ensemble_moments,
    integrate_sde,
    sample_path,
    second_moment_closed_form,
    second_moment_linearized,
)


def _grid(t_max, dt=1e-3):
    return np.arange(0.0, t_max + dt / 2.0, dt)


class TestNoiseModel:
    def test_validation(self):
        with pytest.raises(ValueError):
            NoiseModel(sigma2=-0.1)
        with pytest.raises(ValueError):
            NoiseModel(sigma2=0.1, convention="milstein")
        with pytest.raises(ValueError):
            NoiseModel(sigma2=0.1, dt=0.0)
        with pytest.raises(ValueError):
            NoiseModel(sigma2=0.1, seed=1.5)

    def test_grid_spacing_enforced(self):
        noise = NoiseModel(sigma2=0.1, dt=1e-3)
        with pytest.raises(ValueError):
            integrate_sde(noise, 0.0, 1.0, np.linspace(0.0, 1.0, 11))


class TestIncrements:
    def test_moments_of_raw_increments(self):
        # increments are N(0, 2 sigma^2 dt); check on one long path
        noise = NoiseModel(sigma2=0.2, seed=42, dt=1e-3)
        t = _grid(50.0)
        inc = sample_path(noise, 0, t)
        assert inc.shape == (t.size - 1,)
        var = 2.0 * 0.2 * 1e-3
        assert abs(np.mean(inc)) < 4.0 * np.sqrt(var / inc.size)
        assert np.var(inc) == pytest.approx(var, rel=0.05)

    def test_deterministic_offset(self):
        noise_a = NoiseModel(sigma2=0.1, alpha0=0.0, seed=3)
        noise_b = NoiseModel(sigma2=0.1, alpha0=2.0, seed=3)
        t = _grid(0.01)
        shift = sample_path(noise_b, 0, t) - sample_path(noise_a, 0, t)
        np.testing.assert_allclose(shift, 2.0 * 1e-3, rtol=1e-12)

    def test_paths_differ_by_index(self):
        noise = NoiseModel(sigma2=0.1, seed=3)
        t = _grid(0.01)
        assert not np.array_equal(sample_path(noise, 0, t), sample_path(noise, 1, t))

    def test_same_seed_same_bits(self):
        noise = NoiseModel(sigma2=0.1, seed=9)
        t = _grid(0.1)
        np.testing.assert_array_equal(sample_path(noise, 5, t), sample_path(noise, 5, t))


class TestSinglePath:
    def test_zero_noise_reduces_to_deterministic(self):
        noise = NoiseModel(sigma2=0.0, alpha0=1.0, seed=0, dt=1e-4)
        t = _grid(1.0, dt=1e-4)
        path = integrate_sde(noise, 0.1, 1.0, t)
        from kklab import RiccatiModel, riccati_closed_form

        expected = riccati_closed_form(RiccatiModel(alpha=1.0, beta=0.1, k0=1.0), t)
        # Euler at dt=1e-4 against the exact solution
        np.testing.assert_allclose(path.k, expected, rtol=5e-4)
        assert not path.blown_up
        assert path.blowup_time is None

    def test_blowup_freezes_path(self):
        # deterministic super-exponential growth overflows quickly
        noise = NoiseModel(sigma2=0.0, alpha0=80.0, seed=0, dt=1e-2)
        t = _grid(4.0, dt=1e-2)
        path = integrate_sde(noise, 0.0, 1.0, t)
        assert path.blown_up
        assert path.blowup_time is not None
        assert np.all(np.isfinite(path.k))
        frozen = path.k[-1]
        i = np.searchsorted(path.t_grid, path.blowup_time)
        assert np.all(path.k[i:] == frozen)


class TestEnsemble:
    def test_minimum_size_enforced(self):
        noise = NoiseModel(sigma2=0.1, seed=1)
        with pytest.raises(ValueError):
            ensemble_moments(noise, 0.0, 1.0, _grid(0.01), n_paths=50)

    def test_bit_reproducible_across_runs_and_threads(self):
        noise = NoiseModel(sigma2=0.15, seed=77)
        t = _grid(0.2)
        a = ensemble_moments(noise, 0.1, 1.0, t, n_paths=3000, n_jobs=1)
        b = ensemble_moments(noise, 0.1, 1.0, t, n_paths=3000, n_jobs=1)
        c = ensemble_moments(noise, 0.1, 1.0, t, n_paths=3000, n_jobs=4)
        for x, y in ((a, b), (a, c)):
            np.testing.assert_array_equal(x.mean_k, y.mean_k)
            np.testing.assert_array_equal(x.mean_k2, y.mean_k2)
            np.testing.assert_array_equal(x.se_k, y.se_k)
            np.testing.assert_array_equal(x.se_k2, y.se_k2)
        assert a.survived_paths == c.survived_paths == 3000

    def test_seed_changes_results(self):
        t = _grid(0.1)
        a = ensemble_moments(NoiseModel(sigma2=0.15, seed=1), 0.0, 1.0, t, n_paths=200)
        b = ensemble_moments(NoiseModel(sigma2=0.15, seed=2), 0.0, 1.0, t, n_paths=200)
        assert not np.array_equal(a.mean_k2, b.mean_k2)

    def test_undamped_growth_law_by_convention(self):
        # second moment grows like exp(2 s t) under Ito stepping and
        # exp(4 s t) under Stratonovich, s = sigma^2
        t = _grid(1.0)
        for convention, rate in (("ito", 2.0), ("stratonovich", 4.0)):
            noise = NoiseModel(sigma2=0.25, convention=convention, seed=2024)
            stats = ensemble_moments(noise, 0.0, 1.0, t, n_paths=20000, n_jobs=4)
            target = np.exp(rate * 0.25 * 1.0)
            gap = abs(stats.mean_k2[-1] - target)
            assert gap < 3.0 * stats.se_k2[-1], (convention, gap, stats.se_k2[-1])

    def test_mean_is_martingale_without_drift(self):
        noise = NoiseModel(sigma2=0.2, seed=5)
        t = _grid(1.0)
        stats = ensemble_moments(noise, 0.0, 1.0, t, n_paths=20000, n_jobs=4)
        assert abs(stats.mean_k[-1] - 1.0) < 3.0 * stats.se_k[-1]

    def test_all_paths_blowing_up_raises(self):
        noise = NoiseModel(sigma2=0.0, alpha0=200.0, seed=0, dt=1e-2)
        with pytest.raises(DegenerateEnsembleError):
            ensemble_moments(noise, 0.0, 1.0, _grid(3.0, dt=1e-2), n_paths=100)

    def test_stats_container_shape(self):
        noise = NoiseModel(sigma2=0.1, seed=8)
        t = _grid(0.05)
        stats = ensemble_moments(noise, 0.0, 1.0, t, n_paths=150)
        assert isinstance(stats, EnsembleStats)
        for arr in (stats.mean_k, stats.mean_k2, stats.se_k, stats.se_k2):
            assert arr.shape == t.shape
        assert stats.se_k[0] == 0.0  # all paths share k0
        assert stats.n_paths == 150


class TestMomentFormulas:
    def test_closed_form_reference_value(self):
        assert second_moment_closed_form(0.15, 0.1, 1.0, 1.0) == pytest.approx(
            1.0979868114082667, rel=1e-14
        )

    def test_closed_form_definition(self):
        s, beta, k0, t = 0.2, 0.05, 1.3, 0.7
        growth = np.exp(2.0 * s * t)
        expected = k0 ** 2 * growth * (1.0 - 0.8 * (beta * k0 / s) * (growth - 1.0))
        assert second_moment_closed_form(s, beta, k0, t) == pytest.approx(expected, rel=1e-14)

    def test_zero_noise_limit_is_continuous(self):
        # s -> 0 collapses to k0^2 (1 - 1.6 beta k0 t)
        beta, k0, t = 0.1, 1.0, 0.5
        exact_limit = k0 ** 2 * (1.0 - 1.6 * beta * k0 * t)
        assert second_moment_closed_form(0.0, beta, k0, t) == pytest.approx(exact_limit, rel=1e-14)
        assert second_moment_closed_form(1e-9, beta, k0, t) == pytest.approx(exact_limit, rel=1e-7)

    def test_breakdown_warns(self):
        with pytest.warns(MomentBreakdownWarning):
            val = second_moment_closed_form(0.25, 0.1, 1.0, 4.0)
        assert val <= 0.0

    def test_linearized_reference_value(self):
        assert second_moment_linearized(0.15, 0.1, 1.0, 1.0) == pytest.approx(1.14, rel=1e-14)

    def test_linearized_beyond_window_warns(self):
        with pytest.warns(LinearizedRegimeWarning):
            second_moment_linearized(0.5, 0.1, 1.0, 3.0)

    def test_formulas_agree_at_short_times(self):
        t = np.linspace(0.0, 0.2, 21)
        a = second_moment_closed_form(0.15, 0.1, 1.0, t)
        b = second_moment_linearized(0.15, 0.1, 1.0, t)
        np.testing.assert_allclose(a, b, rtol=5e-3)

    def test_vectorized_over_time(self):
        t = np.linspace(0.0, 1.0, 7)
        out = second_moment_closed_form(0.1, 0.05, 1.0, t)
        assert out.shape == t.shape
        assert out[0] == pytest.approx(1.0, rel=1e-15)
