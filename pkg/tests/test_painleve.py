import numpy as np
import pytest

from kklab import (
    INDUCED_DELTA,
    PainleveProblem,
    PoleError,
    SingularScalingError,
    airy_type_solution,
    pii_exact_rational,
    pii_residual,
    reduce_to_pii,
    rk4_solve,
    solve_pii,
    yablonskii_vorobev,
)


class TestReductionMaps:
    def test_scaling_constants(self):
        prob = reduce_to_pii(n=0.3, m=1.7, lam=-0.12)
        assert prob.k_scale == pytest.approx(np.cbrt(2.0 * 1.7 / 0.12 ** 2), rel=1e-15)
        assert prob.z_scale == pytest.approx(np.cbrt(-2.0 * 0.12 / 1.7 ** 2), rel=1e-15)

    def test_round_trip_identity(self):
        for lam in (-0.12, 0.4):
            prob = reduce_to_pii(n=0.3, m=1.7, lam=lam)
            t = np.linspace(-2.0, 2.0, 41)
            k = np.linspace(-3.0, 3.0, 41)
            z, q = prob.to_pii_variables(t, k)
            t2, k2 = prob.from_pii_variables(z, q)
            np.testing.assert_allclose(t2, t, rtol=0, atol=1e-12)
            np.testing.assert_allclose(k2, k, rtol=0, atol=1e-12)

    def test_curvature_follows_from_momentum_rhs(self):
        # d/dt of the first-order flow along its own solutions gives the
        # second-order form only at delta = 1/2; this pins the constant
        prob = reduce_to_pii(n=0.5, m=1.2, lam=-0.3, delta=INDUCED_DELTA)
        rng = np.random.default_rng(7)
        for t, k in rng.uniform(-2.0, 2.0, size=(25, 2)):
            kprime = prob.momentum_rhs(t, k)
            chain = prob.m + 2.0 * prob.lam * k * kprime
            assert prob.curvature_rhs(t, k) == pytest.approx(chain, rel=1e-12, abs=1e-12)

    def test_induced_delta_value(self):
        assert INDUCED_DELTA == 0.5

    def test_degenerate_scaling_rejected(self):
        with pytest.raises(SingularScalingError):
            reduce_to_pii(n=0.0, m=0.0, lam=-0.1)
        with pytest.raises(SingularScalingError):
            reduce_to_pii(n=0.0, m=1.0, lam=0.0)


class TestRationalSolutions:
    def test_simplest_rational_is_minus_one_over_z(self):
        z = np.linspace(1.0, 5.0, 201)
        np.testing.assert_allclose(pii_exact_rational(1, z), -1.0 / z, rtol=0, atol=1e-15)

    def test_second_rational_partial_fractions(self):
        z = np.linspace(1.0, 3.0, 101)
        expected = 1.0 / z - 3.0 * z ** 2 / (z ** 3 + 4.0)
        np.testing.assert_allclose(pii_exact_rational(2, z), expected, rtol=0, atol=1e-13)

    @pytest.mark.parametrize("delta", [-2, -1, 1, 2])
    def test_rationals_satisfy_the_equation(self, delta):
        z = np.linspace(1.0, 4.0, 4001)
        q = pii_exact_rational(delta, z)
        res = pii_residual(z, q, float(delta))
        assert np.max(np.abs(res)) < 1e-7

    def test_negation_symmetry(self):
        z = np.linspace(1.0, 3.0, 51)
        np.testing.assert_array_equal(pii_exact_rational(-1, z), -pii_exact_rational(1, z))

    def test_zero_delta_is_trivial(self):
        z = np.linspace(-2.0, 2.0, 11)
        assert np.all(pii_exact_rational(0, z) == 0.0)

    def test_evaluation_at_pole_raises(self):
        with pytest.raises(PoleError):
            pii_exact_rational(2, -float(np.cbrt(4.0)))

    def test_polynomial_family(self):
        q0 = yablonskii_vorobev(0)
        q1 = yablonskii_vorobev(1)
        q2 = yablonskii_vorobev(2)
        q3 = yablonskii_vorobev(3)
        np.testing.assert_allclose(q0.coef, [1.0])
        np.testing.assert_allclose(q1.coef, [0.0, 1.0])
        np.testing.assert_allclose(q2.coef, [4.0, 0.0, 0.0, 1.0])
        np.testing.assert_allclose(q3.coef, [-80.0, 0.0, 0.0, 20.0, 0.0, 0.0, 1.0])
        for n in range(2, 7):
            # triangular degree growth n(n+1)/2
            assert yablonskii_vorobev(n).degree() == n * (n + 1) // 2


class TestIntegrator:
    def test_tracks_exact_rational(self):
        sol = solve_pii(1.0, -1.0, 1.0, (1.0, 5.0), n_steps=20000)
        assert not sol.pole_found
        err = np.max(np.abs(sol.q - (-1.0 / sol.z_grid)))
        assert err < 1e-10
        assert sol.max_residual < 1e-6

    def test_derivative_channel(self):
        sol = solve_pii(1.0, -1.0, 1.0, (1.0, 5.0), n_steps=20000)
        np.testing.assert_allclose(sol.q_prime, 1.0 / sol.z_grid ** 2, rtol=0, atol=1e-9)

    def test_matches_linear_companion_oracle(self):
        # delta = 1/2 has log-derivative solutions of a second-order linear
        # equation, integrated by an unrelated adaptive scheme
        sol = solve_pii(0.5, -1.0, 1.5, (1.0, 3.0), n_steps=20000)
        q_ref = airy_type_solution(sol.z_grid, phi0=1.0, dphi0=1.0)
        assert np.max(np.abs(sol.q - q_ref)) < 1e-9

    def test_pole_stops_and_estimates(self):
        sol = solve_pii(0.5, 2.0, 5.0, (1.0, 6.0), n_steps=20000)
        assert sol.pole_found
        assert sol.pole_estimate is not None
        assert 1.0 < sol.pole_estimate < 6.0
        assert sol.z_grid.size == sol.q.size == sol.q_prime.size
        assert np.all(np.isfinite(sol.q))

    def test_negation_symmetry_of_flows(self):
        a = solve_pii(0.5, -1.0, 1.5, (1.0, 3.0), n_steps=5000)
        b = solve_pii(-0.5, 1.0, -1.5, (1.0, 3.0), n_steps=5000)
        np.testing.assert_allclose(a.q, -b.q, rtol=0, atol=1e-9)

    def test_residual_operator_on_known_zero(self):
        # q = -1/z at delta = 1 is an exact solution: residual is
        # limited only by the finite-difference stencil
        z = np.linspace(1.0, 5.0, 8001)
        res = pii_residual(z, -1.0 / z, 1.0)
        assert np.max(np.abs(res)) < 1e-8

    def test_residual_detects_wrong_delta(self):
        z = np.linspace(1.0, 5.0, 2001)
        res = pii_residual(z, -1.0 / z, 0.0)
        assert np.max(np.abs(res)) == pytest.approx(1.0, rel=1e-6)


class TestLinearCompanion:
    def test_log_derivative_satisfies_full_equation(self):
        z = np.linspace(1.0, 3.0, 4001)
        q = airy_type_solution(z, phi0=1.0, dphi0=1.0)
        assert q[0] == pytest.approx(-1.0, rel=1e-12)
        res = pii_residual(z, q, 0.5)
        assert np.max(np.abs(res)) < 1e-7

    def test_zero_crossing_raises(self):
        # this window contains a root of the underlying linear solution,
        # where the log-derivative blows up; must refuse, not return garbage
        z = np.linspace(1.0, 3.0, 501)
        with pytest.raises(PoleError):
            airy_type_solution(z, phi0=1.0, dphi0=-1.0)


class TestEndToEnd:
    @pytest.mark.parametrize("lam,t_max", [(-0.12, 2.0), (0.4, 1.0)])
    def test_transported_flow_solves_the_target_equation(self, lam, t_max):
        # positive quadratic coefficient escapes in finite time, so that
        # branch gets a shorter window
        prob = reduce_to_pii(n=0.3, m=1.7, lam=lam, delta=INDUCED_DELTA)
        t = np.linspace(0.0, t_max, 4001)
        k = rk4_solve(
            lambda tt, y: np.array([prob.momentum_rhs(tt, y[0])]),
            np.array([0.5]),
            t,
            n_steps=8000,
        )[:, 0]
        z, q = prob.to_pii_variables(t, k)
        res = pii_residual(z, q, INDUCED_DELTA)
        assert np.max(np.abs(res)) < 1e-6

    def test_wrong_delta_leaves_constant_defect(self):
        prob = reduce_to_pii(n=0.3, m=1.7, lam=-0.12, delta=INDUCED_DELTA)
        t = np.linspace(0.0, 2.0, 2001)
        k = rk4_solve(
            lambda tt, y: np.array([prob.momentum_rhs(tt, y[0])]),
            np.array([0.5]),
            t,
            n_steps=4000,
        )[:, 0]
        z, q = prob.to_pii_variables(t, k)
        res = pii_residual(z, q, 0.0)
        # defect equals the dropped constant exactly
        assert np.median(np.abs(res)) == pytest.approx(INDUCED_DELTA, rel=1e-6)
