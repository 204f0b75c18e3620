import math

import numpy as np
import pytest
from scipy.integrate import quad

from fourwave import classical
from fourwave.classical import ActionAngle, ModeState, QuadraticCoeffs, ReducedCoords
from fourwave.errors import (ConfigError, NotResonant, OnBoundary, OutOfInterval,
                             UnsupportedRegime, ZeroCoupling)
from fourwave.sector import FourWaveParams

from conftest import WORKED_B


def random_state(rng):
    return ModeState.from_array(rng.uniform(0.5, 1.5, 4) * np.exp(1j * rng.uniform(0, 2 * np.pi, 4)))


def test_hamiltonian_of_unit_state(unit_params):
    assert classical.hamiltonian((1, 1, 1, 1), unit_params) == pytest.approx(8.0)


class TestActionAngle:
    def test_unit_state(self):
        aa = classical.to_action_angle((1, 1, 1, 1))
        assert aa.I == pytest.approx((1.0, 2.0, 2.0, 0.0))
        assert aa.psi == pytest.approx((0.0, 0.0, 0.0, 0.0))
        assert aa.b == pytest.approx((2.0, 2.0, 0.0))

    def test_round_trip(self, rng):
        for _ in range(20):
            z = random_state(rng)
            back = classical.from_action_angle(classical.to_action_angle(z))
            np.testing.assert_allclose(back.array, z.array, atol=1e-12)

    def test_on_boundary(self):
        assert ModeState(0, 1, 1, 1).on_boundary
        with pytest.raises(OnBoundary):
            classical.to_action_angle((0, 1, 1, 1))

    def test_worked_point(self, worked_start):
        z = classical.from_action_angle(ActionAngle((1.0, 2.0, 2.0, 0.0), (math.pi / 2, 0, 0, 0)))
        np.testing.assert_allclose(z.array, [1j, 1, 1, 1], atol=1e-15)
        assert classical.to_action_angle(z).reduced.I0 == pytest.approx(worked_start.I0)


class TestReducedPhaseSpace:
    def test_interval(self):
        assert classical.interval(WORKED_B) == (0.0, 2.0)
        assert classical.interval((3.0, 1.0, 1.5)) == (1.5, 2.5)

    def test_g0(self):
        assert classical.g0(1.0, WORKED_B) == pytest.approx(1.0)
        lo, hi = classical.interval((3.0, 1.0, 1.5))
        assert classical.g0(lo, (3.0, 1.0, 1.5)) == 0.0
        assert classical.g0(hi, (3.0, 1.0, 1.5)) == 0.0

    def test_g0_prime_is_derivative(self):
        b = (3.0, 2.5, 0.5)
        h = 1e-6
        for I0 in (0.7, 1.2, 2.1):
            numeric = (classical.g0(I0 + h, b) - classical.g0(I0 - h, b)) / (2 * h)
            assert classical.g0_prime(I0, b) == pytest.approx(numeric, rel=1e-7)

    def test_reduced_energy_matches_full(self, rng, resonant_params):
        z = random_state(rng)
        rc = classical.to_action_angle(z).reduced
        assert classical.reduced_hamiltonian(rc, resonant_params) == \
            pytest.approx(classical.hamiltonian(z, resonant_params), rel=1e-12)

    def test_worked_energy(self, worked_start, unit_params):
        assert classical.reduced_hamiltonian(worked_start, unit_params) == pytest.approx(6.0)

    def test_out_of_interval(self, unit_params):
        with pytest.raises(OutOfInterval):
            classical.reduced_hamiltonian(ReducedCoords(2.5, 0.0, WORKED_B), unit_params)


class TestQuadraticCoefficients:
    def test_worked_values(self, unit_params):
        coeffs = classical.pqr(6.0, WORKED_B, unit_params)
        assert (coeffs.p, coeffs.q, coeffs.r, coeffs.delta) == pytest.approx((-8, 16, -4, 128))
        assert coeffs.regime == "a"

    def test_off_resonance(self):
        with pytest.raises(NotResonant):
            classical.pqr(6.0, WORKED_B, FourWaveParams(1.0, 1.0, 1.0, 0.5))

    def test_zero_coupling(self):
        with pytest.raises(ZeroCoupling):
            classical.pqr(6.0, WORKED_B, FourWaveParams(g=0.0))

    @pytest.mark.parametrize("pc, disc, regime", [
        (-8.0, 128.0, "a"),
        (1.0, 0.0, "b"),
        (1.0, -4.0, "c"),
        (-1.0, 0.0, "stationary"),
        (1.0, 4.0, "fallback"),
    ])
    def test_classify(self, pc, disc, regime):
        assert classical.classify(pc, disc) == regime

    def test_velocity_squared_matches_quadratic(self, resonant_params):
        rc = ReducedCoords(1.1, 0.8, (2.0, 1.5, 0.3))
        traj = classical.closed_form(rc, resonant_params)
        times = np.linspace(0, 4, 9)
        np.testing.assert_allclose(traj.dI0(times) ** 2, traj.coeffs(traj.I0(times)), atol=1e-10)


class TestQuadraticMotion:
    def test_exponential_regime(self):
        coeffs = QuadraticCoeffs(1.0, -2.0, 1.0, 0.0, "b")
        I0, dI0 = classical.quadratic_motion(coeffs, 0.0, 1.5, 0.5)
        t = np.linspace(0, 1, 5)
        np.testing.assert_allclose(I0(t), 1 + 0.5 * np.exp(t))
        np.testing.assert_allclose(dI0(t) ** 2, coeffs(I0(t)))

    def test_exponential_decay(self):
        coeffs = QuadraticCoeffs(1.0, -2.0, 1.0, 0.0, "b")
        I0, _ = classical.quadratic_motion(coeffs, 0.0, 1.5, -0.5)
        assert I0(3.0) == pytest.approx(1 + 0.5 * math.exp(-3.0))

    def test_hyperbolic_regime(self):
        coeffs = QuadraticCoeffs(1.0, 0.0, 1.0, -4.0, "c")
        start = 0.3
        I0, dI0 = classical.quadratic_motion(coeffs, 0.0, start, math.sqrt(1 + start ** 2))
        t = np.linspace(0, 2, 9)
        assert I0(0.0) == pytest.approx(start)
        np.testing.assert_allclose(I0(t), np.sinh(t + math.asinh(start)))
        np.testing.assert_allclose(dI0(t) ** 2, coeffs(I0(t)))

    def test_stationary(self):
        I0, dI0 = classical.quadratic_motion(QuadraticCoeffs(-1.0, 2.0, -1.0, 0.0, "stationary"),
                                             0.0, 1.0, 0.0)
        assert I0(5.0) == 1.0
        assert dI0(5.0) == 0.0

    def test_unsupported(self):
        with pytest.raises(UnsupportedRegime):
            classical.quadratic_motion(QuadraticCoeffs(1.0, 0.0, 1.0, 4.0, "fallback"), 0.0, 1.0, 1.0)


class TestClosedForm:
    def test_worked_trajectory(self, worked_start, unit_params):
        traj = classical.closed_form(worked_start, unit_params)
        t = np.linspace(0, 5, 51)
        np.testing.assert_allclose(traj.I0(t), 1 + math.sqrt(2) / 2 * np.sin(2 * math.sqrt(2) * t),
                                   atol=1e-12)
        assert traj.energy == pytest.approx(6.0)

    def test_phase_starts_at_initial_angle(self, worked_start, unit_params):
        sample = classical.closed_form(worked_start, unit_params).sample(np.linspace(0, 3, 31))
        assert sample.psi0[0] == pytest.approx(math.pi / 2)
        assert sample.method == "closed:a"

    def test_agrees_with_rk4(self, worked_start, unit_params):
        times = np.linspace(0, 3, 3001)
        exact = classical.closed_form(worked_start, unit_params).sample(times)
        numeric = classical.rk4_reduced(worked_start, unit_params, times)
        np.testing.assert_allclose(numeric.I0, exact.I0, atol=1e-6)
        np.testing.assert_allclose(numeric.psi0, exact.psi0, atol=1e-6)

    def test_free_motion(self):
        p = FourWaveParams(1.0, 0.5, 1.0, 1.0, g=0.0)
        rc = ReducedCoords(1.0, 0.2, WORKED_B)
        sample = classical.trajectory(rc, p, np.linspace(0, 2, 5))
        np.testing.assert_allclose(sample.I0, 1.0)
        np.testing.assert_allclose(sample.psi0, 0.2 + 0.5 * np.linspace(0, 2, 5), atol=1e-12)

    def test_off_resonance_falls_back_to_rk4(self, worked_start):
        sample = classical.trajectory(worked_start, FourWaveParams(1.0, 1.0, 1.0, 0.8),
                                      np.linspace(0, 1, 11))
        assert sample.method == "rk4"


class TestOuterPhases:
    def test_printed_and_derived_rates_agree(self, rng, resonant_params):
        b = (3.0, 2.5, 0.5)
        for _ in range(20):
            I0 = rng.uniform(0.6, 2.9)
            psi0 = rng.uniform(0, 2 * np.pi)
            np.testing.assert_allclose(
                classical.printed_outer_phase_rates(I0, psi0, b, resonant_params),
                classical.outer_phase_rates(I0, psi0, b, resonant_params), rtol=1e-10, atol=1e-12)

    def test_rates_are_energy_gradients(self, resonant_params):
        I = [1.1, 2.0, 1.5, 0.3]
        psi0 = 0.8
        h = 1e-6
        rates = classical.outer_phase_rates(I[0], psi0, tuple(I[1:]), resonant_params)
        for k in range(1, 4):
            up, down = list(I), list(I)
            up[k] += h
            down[k] -= h
            numeric = (classical.reduced_hamiltonian(ReducedCoords(up[0], psi0, tuple(up[1:])), resonant_params)
                       - classical.reduced_hamiltonian(ReducedCoords(down[0], psi0, tuple(down[1:])),
                                                       resonant_params)) / (2 * h)
            assert rates[k - 1] == pytest.approx(numeric, rel=1e-6)

    def test_free_phases_are_linear(self):
        p = FourWaveParams(1.0, 0.5, 1.0, 1.0, g=0.0)
        times = np.linspace(0, 2, 21)
        traj = classical.trajectory(ReducedCoords(1.0, 0.0, WORKED_B), p, times)
        phases = classical.integrate_outer_phases(traj, p, start=(0.1, 0.2, 0.3))
        np.testing.assert_allclose(phases[0], 0.1 + 0.5 * times, atol=1e-12)
        np.testing.assert_allclose(phases[1], 0.2 + 1.0 * times, atol=1e-12)
        np.testing.assert_allclose(phases[2], 0.3 + 0.0 * times, atol=1e-12)

    def test_reconstruction_follows_full_flow(self, worked_start, unit_params):
        times = np.linspace(0, 2, 2001)
        traj = classical.trajectory(worked_start, unit_params, times)
        states = classical.reconstruct_states(traj, classical.integrate_outer_phases(traj, unit_params))
        np.testing.assert_allclose(states[0], [1j, 1, 1, 1], atol=1e-12)
        full = classical.rk4_full(states[0], unit_params, 2.0, 1e-3)
        np.testing.assert_allclose(states[-1], full.states[-1], atol=1e-6)

    def test_reconstruction_over_whole_window(self, worked_start, unit_params):
        times = np.linspace(0, 10, 10001)
        traj = classical.closed_form(worked_start, unit_params).sample(times)
        states = classical.reconstruct_states(traj, classical.integrate_outer_phases(traj, unit_params))
        full = classical.rk4_full(states[0], unit_params, 10.0, 1e-3)
        assert np.max(np.abs(states - full.states)) < 1e-5

    def test_quadrature_is_fourth_order(self, worked_start, unit_params):
        cf = classical.closed_form(worked_start, unit_params)

        def rate(t, k):
            psi0 = float(np.angle(cf.phase(t)))
            return classical.outer_phase_rates(float(cf.I0(t)), psi0, WORKED_B, unit_params)[k]

        exact = np.array([quad(rate, 0.0, 2.0, args=(k,), epsabs=1e-13, epsrel=1e-13, limit=200)[0]
                          for k in range(3)])
        errors = []
        for intervals in (20, 40, 80, 160):
            traj = cf.sample(np.linspace(0.0, 2.0, intervals + 1))
            phases = classical.integrate_outer_phases(traj, unit_params)
            errors.append(np.max(np.abs(phases[:, -1] - exact)))
        orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert np.all(orders > 3.5), orders


class TestFullRK4:
    def test_uncoupled_rotation(self, rng):
        p = FourWaveParams(1.0, 0.5, 2.0, 1.5, g=0.0)
        z = random_state(rng)
        result = classical.rk4_full(z, p, 1.0, 1e-3)
        np.testing.assert_allclose(result.states[-1], z.array * np.exp(1j * np.array(p.omegas)), atol=1e-10)

    def test_fourth_order(self, rng):
        p = FourWaveParams(1.0, 0.5, 2.0, 1.5, g=0.0)
        z = random_state(rng)
        exact = z.array * np.exp(1j * np.array(p.omegas))
        errors = [np.max(np.abs(classical.rk4_full(z, p, 1.0, dt).states[-1] - exact)) for dt in (0.1, 0.05)]
        assert math.log2(errors[0] / errors[1]) == pytest.approx(4.0, abs=0.2)

    def test_invariants_drift(self, rng, resonant_params):
        result = classical.rk4_full(random_state(rng), resonant_params, 1.0, 1e-3)
        assert set(result.drift) == {"H", "I1", "I2", "I3"}
        assert max(result.drift.values()) < 1e-8

    def test_time_grid(self, unit_params):
        result = classical.rk4_full((1, 1, 1, 1), unit_params, 1.0, 0.25)
        np.testing.assert_allclose(result.times, [0, 0.25, 0.5, 0.75, 1.0])

    def test_rejects_nonpositive_step(self, unit_params):
        with pytest.raises(ConfigError):
            classical.rk4_full((1, 1, 1, 1), unit_params, 1.0, 0.0)
