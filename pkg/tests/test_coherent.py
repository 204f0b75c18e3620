import math

import numpy as np
import pytest

from fourwave import classical, coherent, quantum
from fourwave.classical import ReducedCoords
from fourwave.errors import DivisionByZero, NotResonant, OutOfInterval
from fourwave.sector import FourWaveParams, SectorLabel, basis_states, label_for_shape, shape_of

from conftest import WORKED_B


def random_z(rng, scale=0.8):
    return scale * (rng.normal(size=4) + 1j * rng.normal(size=4))


class TestZeta:
    def test_unit_state(self):
        assert coherent.zeta_of((1, 1, 1, 1)) == pytest.approx(1.0)

    def test_reduced_coordinates(self):
        assert coherent.zeta_of_reduced(ReducedCoords(1.0, 0.0, WORKED_B)) == pytest.approx(1.0)

    def test_reduced_matches_full(self, rng):
        for _ in range(10):
            z = random_z(rng)
            rc = classical.to_action_angle(z).reduced
            assert coherent.zeta_of_reduced(rc) == pytest.approx(coherent.zeta_of(z), rel=1e-10)

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            coherent.zeta_of((1, 0, 1, 1))

    def test_out_of_interval(self):
        with pytest.raises(OutOfInterval):
            coherent.zeta_of_reduced(ReducedCoords(2.0, 0.0, WORKED_B))


class TestStandardCoherent:
    def test_vacuum(self):
        table = coherent.coherent_coeffs(np.zeros(4), 1.0, 3)
        expected = np.zeros(table.space.dim)
        expected[0] = 1.0
        np.testing.assert_allclose(table.coefficients, expected)
        assert table.tail == 0.0

    def test_eigenvector_of_annihilation(self, rng):
        table = coherent.coherent_coeffs(random_z(rng, 0.4), 0.7, 8)
        for mode in range(4):
            assert table.annihilation_residual(mode, 0.7) < 1e-12

    def test_tail_is_small(self):
        table = coherent.coherent_coeffs(0.3 * np.ones(4), 1.0, 10)
        assert table.tail < 1e-8 * table.full_norm_sq


class TestProjection:
    @pytest.mark.parametrize("label", [(2, 3, 0), (4, 1, -1), (3, 2, 2), (5, 1, 1), (0, 0, 0)])
    def test_sector_part_is_reduced_state(self, rng, label):
        z = random_z(rng, 0.7)
        assert coherent.projection_deviation(z, label, 0.9) < 1e-12

    def test_vacuum_sector_without_zeta(self):
        alpha, reduced = coherent.project_coherent((0.5, 0, 0.3, 0), (0, 0, 0), 1.0)
        assert alpha == 1.0
        np.testing.assert_allclose(reduced.coefficients, [1.0])

    def test_weights(self):
        shape = shape_of(label_for_shape(2, 1, 1))
        assert [coherent.reduced_weight(n, shape) for n in range(3)] == [12, 4, 12]


class TestReproducingKernel:
    def test_matches_series(self, rng):
        for c in ((2, 3, 0), (5, 1, 1), (3, 2, 2)):
            shape = shape_of(c)
            zeta, w = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            series = sum((np.conj(zeta) * w) ** n / coherent.reduced_weight(n, shape)
                         for n in range(shape.dim))
            assert coherent.reproducing_kernel(zeta, w, c) == pytest.approx(series, rel=1e-12)

    def test_is_inner_product_of_states(self):
        c = SectorLabel(4, 3, 1)
        zeta, w = 0.3 + 0.8j, -1.1 + 0.2j
        inner = np.vdot(coherent.reduced_state(zeta, c).coefficients,
                        coherent.reduced_state(w, c).coefficients)
        assert coherent.reproducing_kernel(zeta, w, c) == pytest.approx(inner, rel=1e-12)

    def test_at_origin(self):
        c = label_for_shape(2, 1, 3)
        assert coherent.reproducing_kernel(0, 0.5, c) == \
            pytest.approx(1 / (math.factorial(2) * math.factorial(1) * math.factorial(5)))


class TestMeasure:
    @pytest.mark.parametrize("N, gamma, delta", [(0, 0, 0), (1, 0, 0), (2, 1, 1), (3, 0, 2)])
    def test_moments_are_weights(self, N, gamma, delta):
        c = label_for_shape(N, gamma, delta)
        shape = shape_of(c)
        for n in range(shape.dim):
            assert coherent.radial_moment(n, c) == pytest.approx(coherent.reduced_weight(n, shape), rel=1e-4)

    def test_density_is_continuous_at_one(self):
        c = label_for_shape(2, 1, 1)
        assert coherent.measure_density(1 - 1e-9, c) == pytest.approx(coherent.measure_density(1 + 1e-9, c),
                                                                       rel=1e-6)


def test_holomorphic_representation():
    for c in (label_for_shape(3, 1, 2), SectorLabel(5, 1, 1), SectorLabel(4, 1, -1)):
        shape = shape_of(c)
        W = np.diag(coherent.holomorphic_weights(c))
        W_inv = np.diag(1.0 / np.diag(W))
        A0, A, As = (op.matrix.real for op in quantum.sector_ops(c))
        A0 = A0 - shape.base_offset * np.eye(shape.dim)
        for sector_op, holomorphic in zip((A0, A, As), coherent.holomorphic_ops(c)):
            np.testing.assert_allclose(W @ sector_op @ W_inv, holomorphic, atol=1e-10)


class TestAmplitudes:
    def test_vacuum(self, resonant_params):
        amplitude = coherent.fock_coherent_amplitude(np.zeros(4), (0, 0, 0, 0), 0.0, resonant_params)
        assert amplitude == pytest.approx(1.0)

    def test_direct_and_reduced_agree(self, rng, resonant_params):
        for _ in range(10):
            z = random_z(rng)
            state = tuple(int(v) for v in rng.integers(0, 3, size=4))
            t = float(rng.uniform(0, 5))
            direct = coherent.fock_coherent_amplitude(z, state, t, resonant_params)
            reduced = coherent.fock_coherent_amplitude_reduced(z, state, t, resonant_params)
            assert reduced == pytest.approx(direct, rel=1e-10, abs=1e-14)

    def test_modulus_at_start(self, rng, resonant_params):
        z = random_z(rng)
        state = (1, 0, 2, 1)
        h = resonant_params.hbar
        expected = abs(coherent.fock_coefficient(z, state, h)) * math.exp(-np.sum(np.abs(z) ** 2) / (2 * h))
        assert abs(coherent.fock_coherent_amplitude(z, state, 0.0, resonant_params)) == pytest.approx(expected)

    def test_requires_resonance(self):
        with pytest.raises(NotResonant):
            coherent.fock_coherent_amplitude(np.ones(4), (1, 1, 1, 1), 1.0, FourWaveParams(1.0, 1.0, 1.0, 0.5))

    @pytest.mark.parametrize("label", [(2, 3, 0), (4, 1, -1), (3, 2, 2), (5, 1, 1)])
    def test_decay_factor(self, rng, label):
        b = (3.0, 2.5, 0.3)
        lo, hi = classical.interval(b)
        I0 = 0.5 * (lo + hi)
        hbar = 0.8
        z = classical.from_action_angle(classical.ActionAngle((I0, *b), (0.4, 1.0, 2.0, 3.0))).array
        expected = abs(coherent.alpha_factor(z / math.sqrt(hbar), label)) * \
            math.exp(-np.sum(np.abs(z) ** 2) / (2 * hbar))
        assert coherent.amplitude_decay_factor(b, I0, label, hbar) == pytest.approx(expected, rel=1e-10)


def test_pullback_density_is_positive():
    rows = coherent.tabulate_pullback_density(SectorLabel(3, 3, 0), WORKED_B, n_points=20)
    assert rows.shape == (20, 2)
    assert np.all(np.isfinite(rows[:, 1]))
    assert np.all(rows[:, 1] > 0)
    assert np.all(np.diff(rows[:, 0]) > 0)


def test_sector_states_are_the_projection_support():
    assert len(basis_states((2, 3, 0))) == shape_of((2, 3, 0)).dim


def test_correspondence_api_is_reachable_from_coherent():
    from fourwave import symbols
    for name in ("NormalOrderedObservable", "hamiltonian_observable", "kummer_generators",
                 "poisson_bracket", "star_bracket", "star_product", "covariant_symbol"):
        assert getattr(coherent, name) is getattr(symbols, name)
