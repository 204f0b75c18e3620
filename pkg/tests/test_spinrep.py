import numpy as np
import pytest

from fourwave import classical, spinrep
from fourwave.quantum import build_full_hamiltonian
from fourwave.sector import FourWaveParams


@pytest.fixture(scope="module")
def ops():
    return spinrep.build_spin_ops(5, 0.9)


def test_so4_relations(ops):
    audit = spinrep.commutator_audit(ops)
    assert len(audit) == 2 * 7 + 6 + 9
    worst = max(audit, key=lambda row: row["deviation"])
    assert worst["deviation"] < 1e-12, worst["relation"]


def test_raising_operator_moves_a_quantum(ops):
    space = ops.space
    start = space.index[(1, 0, 0, 0)]
    target = space.index[(0, 1, 0, 0)]
    column = ops.Mplus[:, start].toarray().ravel()
    assert column[target] == pytest.approx(0.9)
    assert np.count_nonzero(column) == 1


def test_spin_lengths_on_fock_state(ops):
    index = ops.space.index[(2, 1, 0, 2)]
    assert ops.L[index, index] == pytest.approx(0.9 * 1.5)
    assert ops.M3[index, index] == pytest.approx(-0.9 * 0.5)
    assert ops.R[index, index] == pytest.approx(0.9 * 1.0)
    assert ops.S3[index, index] == pytest.approx(-0.9 * 1.0)


@pytest.mark.parametrize("params", [
    FourWaveParams(1.0, 1.0, 1.0, 1.0, g=1.0, hbar=1.0),
    FourWaveParams(1.3, 0.7, 0.9, 1.5, g=0.8, hbar=0.6),
    FourWaveParams(0.6, 1.7, 1.1, 0.4, g=1.9, hbar=1.2),
])
def test_hamiltonian_forms_agree(params):
    scale = float(np.max(np.abs(build_full_hamiltonian(5, params).data)))
    for row in spinrep.conserved_audit(params, 5):
        assert row["deviation"] <= 1e-12 * scale, row["relation"]


def test_dicke_form_is_hermitian(resonant_params):
    H = spinrep.h_dicke(resonant_params, ops=spinrep.build_spin_ops(5, resonant_params.hbar))
    assert np.max(np.abs((H - H.conj().T).toarray())) < 1e-14


class TestClassicalSpins:
    def test_unit_state(self):
        s = spinrep.classical_spin_functions((1, 1, 1, 1))
        assert (s.L, s.M1, s.M2, s.M3) == pytest.approx((1.0, 1.0, 0.0, 0.0))
        assert (s.R, s.S1, s.S2, s.S3) == pytest.approx((1.0, 1.0, 0.0, 0.0))

    def test_lengths(self, rng):
        for _ in range(20):
            s = spinrep.classical_spin_functions(rng.normal(size=4) + 1j * rng.normal(size=4))
            assert s.M1 ** 2 + s.M2 ** 2 + s.M3 ** 2 == pytest.approx(s.L ** 2, rel=1e-12)
            assert s.S1 ** 2 + s.S2 ** 2 + s.S3 ** 2 == pytest.approx(s.R ** 2, rel=1e-12)

    def test_symbols_match_functions(self, rng):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        s = spinrep.classical_spin_functions(z)
        for name, symbol in spinrep.spin_symbols().items():
            assert symbol.evaluate(z) == pytest.approx(getattr(s, name), abs=1e-12)

    def test_poisson_table(self):
        table = spinrep.poisson_table()
        assert len(table) == 6
        assert all(row["deviation"] < 1e-14 for row in table)


class TestClassicalSpinHamiltonians:
    def test_unit_state(self, unit_params):
        assert spinrep.classical_h_dicke((1, 1, 1, 1), unit_params) == pytest.approx(8.0)
        assert spinrep.classical_h_ms((1, 1, 1, 1), unit_params) == pytest.approx(8.0)

    @pytest.mark.parametrize("params", [
        FourWaveParams(1.0, 1.0, 1.0, 1.0, g=1.0),
        FourWaveParams(1.3, 0.7, 0.9, 1.5, g=0.8, hbar=0.6),
        FourWaveParams(0.6, 1.7, 1.1, 0.4, g=1.9),
    ])
    def test_forms_reproduce_mode_hamiltonian(self, rng, params):
        for _ in range(25):
            z = rng.normal(size=4) + 1j * rng.normal(size=4)
            energy = classical.hamiltonian(z, params)
            assert spinrep.classical_h_dicke(z, params) == pytest.approx(energy, rel=1e-12, abs=1e-12)
            assert spinrep.classical_h_ms(z, params) == pytest.approx(energy, rel=1e-12, abs=1e-12)

    def test_coupling_vanishes_without_g(self, rng):
        p = FourWaveParams(0.6, 1.7, 1.1, 0.4, g=0.0)
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        free = float(np.dot(p.omegas, np.abs(z) ** 2))
        assert spinrep.classical_h_ms(z, p) == pytest.approx(free, rel=1e-12)
        assert spinrep.classical_h_dicke(z, p) == pytest.approx(free, rel=1e-12)
