"""Invariant suite behind `fwm verify`.

Every check returns a single deviation that is compared against its tolerance.
Checks seed their own random generators, so the report does not depend on the
order in which the worker threads finish.
"""
from __future__ import annotations

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import classical, coherent, dualhahn, kummer, quantum, spinrep, symbols
from .config import worker_count
from .fock import TruncatedFockSpace
from .sector import (FourWaveParams, SectorLabel, applicable_subcases, basis_states, label_for_shape,
                     lambda0_for_subcase, sector_of_fock, sectors_up_to, shape_of)

logger = logging.getLogger(__name__)

WORKED_B = (2.0, 2.0, 0.0)
WORKED_START = classical.ReducedCoords(1.0, math.pi / 2, WORKED_B)


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[], float]
    tolerance: float


def _resonant_params(rng, g: float = 1.0, hbar: float = 1.0) -> FourWaveParams:
    w0, w1, w2 = rng.uniform(0.5, 2.0, size=3)
    return FourWaveParams(w0, w1, w2, w0 - w1 + w2, g=g, hbar=hbar)


def _relative(found, expected) -> float:
    found, expected = np.asarray(found), np.asarray(expected)
    return float(np.max(np.abs(found - expected)) / max(1.0, float(np.max(np.abs(expected)))))


# sector

def check_sector_cone() -> float:
    """Shape formulas, bases and the Fock-to-sector map over T=8"""
    mismatches = 0
    for c in sectors_up_to(8):
        shape = shape_of(c)
        expected_N = min(c.c1, c.c2 + c.c3) - max(0, c.c3)
        states = basis_states(c)
        mismatches += shape.N != expected_N
        mismatches += shape.gamma < 0 or shape.delta < 0
        mismatches += len(states) != shape.dim
        for local, state in enumerate(states):
            label, index = sector_of_fock(*state)
            mismatches += label != c or index != local
    return float(mismatches)


def check_lambda0_overlaps() -> float:
    """Overlapping subcases give the same lambda0"""
    rng = np.random.default_rng(11)
    worst = 0.0
    for c in sectors_up_to(10):
        cases = applicable_subcases(c)
        if len(cases) < 2:
            continue
        p = _resonant_params(rng)
        values = [lambda0_for_subcase(c, p, s) for s in cases]
        worst = max(worst, _relative(values, values[0]))
    return worst


# dual Hahn

def _random_dual_hahn(rng, max_N: int, count: int):
    for _ in range(count):
        yield dualhahn.DualHahnParams(int(rng.integers(0, 11)), int(rng.integers(0, 11)),
                                      int(rng.integers(0, max_N + 1)))


def check_dual_hahn_spectrum() -> float:
    rng = np.random.default_rng(1)
    worst = 0.0
    for dh in _random_dual_hahn(rng, 40, 200):
        shape = _shape_like(dh)
        found, _ = quantum.oracle_diagonalize(quantum.tridiagonal_h0(shape))
        expected = dualhahn.eigenvalues(dh).astype(float)
        worst = max(worst, float(np.max(np.abs(found - expected) / np.maximum(1.0, expected))))
    return worst


def _shape_like(dh: dualhahn.DualHahnParams):
    return shape_of(label_for_shape(dh.N, dh.gamma, dh.delta))


def _orthogonality(max_N: int, count: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for dh in _random_dual_hahn(rng, max_N, count):
        R = dualhahn.transition_matrix(dh).R
        worst = max(worst, float(np.max(np.abs(R @ R.T - np.eye(dh.N + 1)))))
    return worst


def check_orthogonality_small() -> float:
    return _orthogonality(40, 200, 2)


def check_orthogonality_large() -> float:
    return _orthogonality(80, 30, 3)


def check_dual_hahn_eigenvectors() -> float:
    """R diagonalizes H0 with the dual Hahn eigenvalues"""
    rng = np.random.default_rng(4)
    worst = 0.0
    for dh in _random_dual_hahn(rng, 30, 40):
        table = dualhahn.transition_matrix(dh)
        H0 = quantum.tridiagonal_h0(_shape_like(dh))
        residual = H0 @ table.R - table.R * table.lambdas
        worst = max(worst, _relative(residual, 0.0) / max(1.0, float(table.lambdas[-1])))
    return worst


def check_hypergeometric_vs_recurrence() -> float:
    rng = np.random.default_rng(5)
    worst = 0.0
    for dh in _random_dual_hahn(rng, 12, 30):
        for n in range(dh.N + 1):
            for k in range(dh.N + 1):
                exact = dualhahn.polynomial_value(n, k, dh)
                found = dualhahn.polynomial_value_recurrence(n, k, dh)
                worst = max(worst, abs(found - exact) / max(1.0, abs(exact)))
    return worst


# quantum

def check_sector_commutators() -> float:
    return max(quantum.commutator_check(c) for c in sectors_up_to(8))


def check_block_diagonal() -> float:
    rng = np.random.default_rng(6)
    p = _resonant_params(rng)
    space = TruncatedFockSpace(8)
    return quantum.off_block_norm(quantum.build_full_hamiltonian(8, p), space)


def check_block_spectra() -> float:
    rng = np.random.default_rng(7)
    p = _resonant_params(rng, g=float(rng.uniform(0.5, 1.5)))
    return max(row["deviation"] for row in quantum.block_spectra(8, p))


def check_two_level_equal_weights() -> float:
    """gamma = delta = 0 flips with probability sin^2(g hbar t)"""
    p = FourWaveParams(g=0.7, hbar=1.3)
    worst = 0.0
    for t in np.linspace(0.0, 20.0, 1000):
        _, _, p_flip = quantum.two_level_closed_form(0, 0, p, float(t))
        worst = max(worst, abs(p_flip - math.sin(p.g * p.hbar * t) ** 2))
    return worst


def check_two_level_propagator() -> float:
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(20):
        gamma, delta = int(rng.integers(0, 7)), int(rng.integers(0, 7))
        p = _resonant_params(rng, g=float(rng.uniform(0.2, 2.0)), hbar=float(rng.uniform(0.5, 1.5)))
        c = label_for_shape(1, gamma, delta)
        t = float(rng.uniform(0.0, 10.0))
        U, _, p_flip = quantum.two_level_closed_form(gamma, delta, p, t, quantum.lambda0(c, p))
        worst = max(worst, float(np.max(np.abs(U - quantum.propagator(c, p, t).matrix))),
                    abs(p_flip - quantum.transition_probability(c, 1, 0, t, p)))
    return worst


def check_two_level_probability_sum() -> float:
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(200):
        gamma, delta = int(rng.integers(0, 7)), int(rng.integers(0, 7))
        _, p_stay, p_flip = quantum.two_level_closed_form(gamma, delta, FourWaveParams(),
                                                          float(rng.uniform(0, 50)))
        worst = max(worst, abs(p_stay + p_flip - 1.0))
    return worst


def check_two_level_lambda0() -> float:
    rng = np.random.default_rng(10)
    worst = 0.0
    for c in sectors_up_to(12):
        shape = shape_of(c)
        if shape.N != 1:
            continue
        p = _resonant_params(rng)
        worst = max(worst, _relative(quantum.two_level_lambda0(shape, p), quantum.lambda0(c, p)))
    return worst


def check_propagator_unitary() -> float:
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(20):
        c = label_for_shape(int(rng.integers(0, 15)), int(rng.integers(0, 6)), int(rng.integers(0, 6)))
        U = quantum.propagator(c, _resonant_params(rng), float(rng.uniform(0, 10))).matrix
        worst = max(worst, float(np.max(np.abs(U @ U.conj().T - np.eye(len(U))))))
    return worst


def check_heisenberg_derivative() -> float:
    """dF/dt = i [H_c, F(t)] by central differences"""
    c = SectorLabel(4, 3, 1)
    p = FourWaveParams(1.0, 1.2, 0.9, 0.7, g=0.8)
    A0, A, _ = quantum.sector_ops(c)
    H = quantum.reduced_hamiltonian(c, p).matrix
    t, h = 0.9, 1e-5
    worst = 0.0
    for F in (A0, A):
        ahead = quantum.heisenberg_evolve(F, c, p, t + h).matrix
        behind = quantum.heisenberg_evolve(F, c, p, t - h).matrix
        now = quantum.heisenberg_evolve(F, c, p, t).matrix
        derivative = (ahead - behind) / (2 * h)
        worst = max(worst, _relative(derivative, 1j * (H @ now - now @ H)))
    return worst


# classical

def _worked_params() -> FourWaveParams:
    return FourWaveParams(1.0, 1.0, 1.0, 1.0, g=1.0)


def check_worked_closed_form() -> float:
    times = np.linspace(0.0, 10.0, 1001)
    traj = classical.closed_form(WORKED_START, _worked_params()).sample(times)
    expected = 1 + math.sqrt(2) / 2 * np.sin(2 * math.sqrt(2) * times)
    return float(np.max(np.abs(traj.I0 - expected)))


def check_worked_against_rk4() -> float:
    times = np.linspace(0.0, 10.0, 10001)
    p = _worked_params()
    exact = classical.closed_form(WORKED_START, p).sample(times)
    numeric = classical.rk4_reduced(WORKED_START, p, times)
    return float(np.max(np.abs(exact.I0 - numeric.I0)))


def _worked_state() -> classical.ModeState:
    b1, b2, b3 = WORKED_B
    return classical.from_action_angle(classical.ActionAngle((1.0, b1, b2, b3),
                                                             (math.pi / 2, 0.0, 0.0, 0.0)))


def check_full_rk4_drift() -> float:
    run = classical.rk4_full(_worked_state(), _worked_params(), 10.0, 1e-3)
    return max(run.drift.values())


PHASE_CASES = (
    (WORKED_START, FourWaveParams(1.0, 1.0, 1.0, 1.0, g=1.0)),
    (classical.ReducedCoords(1.2, 1.0, (3.0, 2.0, 0.5)), FourWaveParams(1.3, 0.8, 0.6, 1.1, g=0.7)),
    (classical.ReducedCoords(1.0, 1.0, (2.5, 3.0, -0.5)), FourWaveParams(0.9, 1.4, 1.5, 1.0, g=1.2)),
)


def check_phase_contract() -> float:
    """|exp(i psi0)| = 1, H_red = E and the quadratic law along closed-form runs"""
    times = np.linspace(0.0, 10.0, 2001)
    worst = 0.0
    for rc0, p in PHASE_CASES:
        run = classical.closed_form(rc0, p)
        phase = run.phase(times)
        I0, dI0 = run.I0(times), run.dI0(times)
        energies = [classical.reduced_hamiltonian(classical.ReducedCoords(i, s, rc0.b), p)
                    for i, s in zip(I0, np.angle(phase))]
        worst = max(worst,
                    float(np.max(np.abs(np.abs(phase) - 1.0))),
                    _relative(energies, run.energy),
                    _relative(dI0 ** 2, run.coeffs(I0)))
    return worst


def check_outer_phase_forms() -> float:
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(100):
        b = (float(rng.uniform(1, 3)), float(rng.uniform(1, 3)), float(rng.uniform(-0.5, 0.5)))
        lo, hi = classical.interval(b)
        I0 = float(rng.uniform(lo, hi))
        p = _resonant_params(rng)
        psi0 = float(rng.uniform(0, 2 * math.pi))
        worst = max(worst, _relative(classical.printed_outer_phase_rates(I0, psi0, b, p),
                                     classical.outer_phase_rates(I0, psi0, b, p)))
    return worst


def check_state_reconstruction() -> float:
    """Closed form plus outer-phase quadrature against the four-mode integrator"""
    p = _worked_params()
    times = np.linspace(0.0, 10.0, 10001)
    traj = classical.closed_form(WORKED_START, p).sample(times)
    states = classical.reconstruct_states(traj, classical.integrate_outer_phases(traj, p))
    reference = classical.rk4_full(_worked_state(), p, 10.0, 1e-3)
    return float(np.max(np.abs(states - reference.states)))


# Kummer shape

def check_shape_trajectory() -> float:
    times = np.linspace(0.0, 10.0, 2001)
    worst = 0.0
    for rc0, p in PHASE_CASES:
        report = kummer.trajectory_on_shape(classical.closed_form(rc0, p).sample(times), p)
        worst = max(worst, report["max_casimir"], report["max_energy_error"])
    return worst


def check_nambu_generators() -> float:
    """{I0, x} = -y, {I0, y} = x, {x, y} = G0'/2 on the shape"""
    pt = kummer.phi_map(classical.ReducedCoords(1.0, 0.7, WORKED_B))

    def I0(x, y, i):
        return i

    def X(x, y, i):
        return x

    def Y(x, y, i):
        return y

    found = [kummer.nambu_bracket(I0, X, pt), kummer.nambu_bracket(I0, Y, pt),
             kummer.nambu_bracket(X, Y, pt)]
    expected = [-pt.y, pt.x, 0.5 * classical.g0_prime(pt.I0, pt.b)]
    return _relative(found, expected)


def check_nambu_order() -> float:
    """Central differences converge at second order: error ratio 4 under halving"""
    pt = kummer.phi_map(classical.ReducedCoords(1.0, 0.7, WORKED_B))

    def cube_I0(x, y, i):
        return i ** 3

    def cube_x(x, y, i):
        return x ** 3

    exact = -9 * pt.I0 ** 2 * pt.x ** 2 * pt.y
    coarse = abs(kummer.nambu_bracket(cube_I0, cube_x, pt, h=1e-2) - exact)
    fine = abs(kummer.nambu_bracket(cube_I0, cube_x, pt, h=5e-3) - exact)
    return abs(coarse / fine - 4.0)


# correspondence and reduced coherent states

def _random_z(rng, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.normal(size=4) + 1j * rng.normal(size=4))


def check_hamiltonian_symbol() -> float:
    """<H>(z) = H(z) + hbar g (|z0|^2 + |z1|^2)"""
    rng = np.random.default_rng(14)
    worst = 0.0
    for _ in range(100):
        p = FourWaveParams(*rng.uniform(0.5, 2.0, size=4), g=float(rng.uniform(0.2, 2.0)),
                           hbar=float(rng.uniform(0.1, 1.0)))
        z = _random_z(rng)
        symbol = symbols.covariant_symbol(symbols.hamiltonian_observable(p), z)
        expected = classical.hamiltonian(z, p) + p.hbar * p.g * (abs(z[0]) ** 2 + abs(z[1]) ** 2)
        worst = max(worst, abs(symbol - expected) / max(1.0, abs(expected)))
    return worst


def check_hamiltonian_matrix() -> float:
    p = FourWaveParams(1.1, 0.9, 1.3, 1.5, g=0.6, hbar=0.8)
    space = TruncatedFockSpace(6)
    difference = symbols.hamiltonian_observable(p).to_matrix(space, p.hbar) - \
        quantum.build_full_hamiltonian(6, p)
    return float(np.max(np.abs(difference.toarray()), initial=0.0))


def check_star_limit() -> float:
    """star bracket at hbar = 0 equals the Poisson bracket for every generator pair"""
    generators = symbols.kummer_generators()
    worst = 0.0
    for a, f in generators.items():
        for b, g in generators.items():
            residual = symbols.star_bracket(f, g, 0.0) - symbols.poisson_bracket(f, g)
            worst = max(worst, max((abs(v) for v in residual.terms.values()), default=0.0))
    return worst


def check_poisson_table() -> float:
    rng = np.random.default_rng(15)
    gen = symbols.kummer_generators()
    pb = symbols.poisson_bracket
    worst = 0.0
    for _ in range(50):
        z = _random_z(rng)
        moduli = np.abs(z) ** 2
        I0 = moduli[0]
        b = (moduli[0] + moduli[1], moduli[2] + moduli[3], moduli[0] - moduli[2])
        found = [pb(gen["I0"], gen["x"]).evaluate(z), pb(gen["I0"], gen["y"]).evaluate(z),
                 pb(gen["x"], gen["y"]).evaluate(z)]
        expected = [-gen["y"].evaluate(z), gen["x"].evaluate(z), 0.5 * classical.g0_prime(I0, b)]
        worst = max(worst, _relative(found, expected))
        for name in ("I1", "I2", "I3"):
            for other in ("I0", "x", "y"):
                worst = max(worst, abs(pb(gen[name], gen[other]).evaluate(z)))
    return worst


def check_projection() -> float:
    rng = np.random.default_rng(16)
    worst = 0.0
    for c in sectors_up_to(6):
        z = _random_z(rng, 0.7)
        hbar = float(rng.uniform(0.5, 1.5))
        direct = max(abs(coherent.fock_coefficient(z, s, hbar)) for s in basis_states(c))
        worst = max(worst, coherent.projection_deviation(z, c, hbar) / max(1.0, direct))
    return worst


def check_measure_moments() -> float:
    worst = 0.0
    for N in range(4):
        for gamma in range(3):
            for delta in range(3):
                c = label_for_shape(N, gamma, delta)
                shape = shape_of(c)
                for n in range(shape.dim):
                    moment = coherent.radial_moment(n, c)
                    worst = max(worst, abs(moment / coherent.reduced_weight(n, shape) - 1.0))
    return worst


def check_reproducing_kernel() -> float:
    rng = np.random.default_rng(17)
    worst = 0.0
    for c in sectors_up_to(6):
        shape = shape_of(c)
        zeta, w = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        series = sum((np.conj(zeta) * w) ** n / coherent.reduced_weight(n, shape)
                     for n in range(shape.dim))
        worst = max(worst, abs(coherent.reproducing_kernel(zeta, w, c) - series) / max(1.0, abs(series)))
    return worst


def check_holomorphic_representation() -> float:
    worst = 0.0
    for c in sectors_up_to(8):
        shape = shape_of(c)
        W = np.diag(coherent.holomorphic_weights(c))
        W_inv = np.diag(1.0 / np.diag(W))
        A0, A, As = (op.matrix.real for op in quantum.sector_ops(c))
        A0 = A0 - shape.base_offset * np.eye(shape.dim)
        H0, H, Hs = coherent.holomorphic_ops(c)
        for sector_op, holomorphic in ((A0, H0), (A, H), (As, Hs)):
            worst = max(worst, _relative(W @ sector_op @ W_inv, holomorphic))
    return worst


def check_coherent_amplitudes() -> float:
    rng = np.random.default_rng(18)
    worst = 0.0
    for _ in range(30):
        p = _resonant_params(rng, hbar=float(rng.uniform(0.5, 1.5)))
        z = _random_z(rng, 0.8)
        state = tuple(int(v) for v in rng.integers(0, 3, size=4))
        t = float(rng.uniform(0, 5))
        direct = coherent.fock_coherent_amplitude(z, state, t, p)
        reduced = coherent.fock_coherent_amplitude_reduced(z, state, t, p)
        worst = max(worst, abs(direct - reduced) / max(1.0, abs(direct)))
    return worst


def check_amplitude_decay() -> float:
    """Decay factor on a level set equals |alpha(z / sqrt(hbar))| exp(-|z|^2 / 2 hbar)"""
    rng = np.random.default_rng(19)
    worst = 0.0
    for c in (SectorLabel(2, 3, 0), SectorLabel(4, 1, -1), SectorLabel(3, 2, 2), SectorLabel(5, 1, 1)):
        for _ in range(5):
            b = (float(rng.uniform(2, 4)), float(rng.uniform(2, 4)), float(rng.uniform(-0.5, 0.5)))
            lo, hi = classical.interval(b)
            I0 = float(rng.uniform(lo, hi))
            hbar = float(rng.uniform(0.5, 1.5))
            aa = classical.ActionAngle((I0, *b), tuple(rng.uniform(0, 2 * math.pi, size=4)))
            z = classical.from_action_angle(aa).array
            expected = abs(coherent.alpha_factor(z / math.sqrt(hbar), c)) * \
                math.exp(-float(np.sum(np.abs(z) ** 2)) / (2 * hbar))
            found = coherent.amplitude_decay_factor(b, I0, c, hbar)
            worst = max(worst, abs(found - expected) / max(expected, 1e-300))
    return worst


def check_pullback_density() -> float:
    """Tabulated density is finite and positive inside the interval"""
    rows = coherent.tabulate_pullback_density(SectorLabel(3, 3, 0), WORKED_B)
    bad = ~np.isfinite(rows[:, 1]) | (rows[:, 1] <= 0)
    return float(np.count_nonzero(bad))


# spin rewriting

def check_so4_table() -> float:
    ops = spinrep.build_spin_ops(6, 0.9)
    return max(row["deviation"] for row in spinrep.commutator_audit(ops))


def check_spin_hamiltonians() -> float:
    rng = np.random.default_rng(20)
    p = FourWaveParams(*rng.uniform(0.5, 2.0, size=4), g=float(rng.uniform(0.2, 2.0)),
                       hbar=float(rng.uniform(0.5, 1.5)))
    scale = float(np.max(np.abs(quantum.build_full_hamiltonian(6, p).data)))
    return max(row["deviation"] for row in spinrep.conserved_audit(p, 6)) / max(1.0, scale)


def check_classical_spins() -> float:
    rng = np.random.default_rng(21)
    worst = max(row["deviation"] for row in spinrep.poisson_table())
    for _ in range(100):
        s = spinrep.classical_spin_functions(_random_z(rng))
        worst = max(worst,
                    abs(s.M1 ** 2 + s.M2 ** 2 + s.M3 ** 2 - s.L ** 2) / max(1.0, s.L ** 2),
                    abs(s.S1 ** 2 + s.S2 ** 2 + s.S3 ** 2 - s.R ** 2) / max(1.0, s.R ** 2))
    return worst


def check_classical_spin_hamiltonians() -> float:
    """Dicke and two-spin phase-space forms against the mode Hamiltonian"""
    rng = np.random.default_rng(22)
    worst = 0.0
    for _ in range(100):
        p = FourWaveParams(*rng.uniform(0.5, 2.0, size=4), g=float(rng.uniform(0.2, 2.0)))
        z = _random_z(rng)
        energy = classical.hamiltonian(z, p)
        scale = max(1.0, abs(energy))
        worst = max(worst,
                    abs(spinrep.classical_h_dicke(z, p) - energy) / scale,
                    abs(spinrep.classical_h_ms(z, p) - energy) / scale)
    return worst


CHECKS = (
    Check("sector.cone", check_sector_cone, 0.0),
    Check("sector.lambda0_overlaps", check_lambda0_overlaps, 1e-12),
    Check("dualhahn.spectrum", check_dual_hahn_spectrum, 1e-8),
    Check("dualhahn.orthogonality_N40", check_orthogonality_small, 1e-10),
    Check("dualhahn.orthogonality_N80", check_orthogonality_large, 1e-8),
    Check("dualhahn.eigenvectors", check_dual_hahn_eigenvectors, 1e-10),
    Check("dualhahn.recurrence", check_hypergeometric_vs_recurrence, 1e-9),
    Check("quantum.commutators", check_sector_commutators, 1e-12),
    Check("quantum.block_diagonal", check_block_diagonal, 0.0),
    Check("quantum.block_spectra", check_block_spectra, 1e-8),
    Check("quantum.two_level_sin2", check_two_level_equal_weights, 1e-12),
    Check("quantum.two_level_propagator", check_two_level_propagator, 1e-10),
    Check("quantum.two_level_probability_sum", check_two_level_probability_sum, 1e-14),
    Check("quantum.two_level_lambda0", check_two_level_lambda0, 1e-12),
    Check("quantum.propagator_unitary", check_propagator_unitary, 1e-10),
    Check("quantum.heisenberg", check_heisenberg_derivative, 1e-6),
    Check("classical.worked_closed_form", check_worked_closed_form, 1e-12),
    Check("classical.worked_rk4", check_worked_against_rk4, 1e-6),
    Check("classical.full_rk4_drift", check_full_rk4_drift, 1e-8),
    Check("classical.phase_contract", check_phase_contract, 1e-8),
    Check("classical.outer_phase_forms", check_outer_phase_forms, 1e-10),
    Check("classical.state_reconstruction", check_state_reconstruction, 1e-5),
    Check("kummer.trajectory", check_shape_trajectory, 1e-8),
    Check("kummer.nambu_generators", check_nambu_generators, 1e-9),
    Check("kummer.nambu_order", check_nambu_order, 0.5),
    Check("coherent.hamiltonian_symbol", check_hamiltonian_symbol, 1e-12),
    Check("coherent.hamiltonian_matrix", check_hamiltonian_matrix, 1e-12),
    Check("coherent.star_limit", check_star_limit, 1e-12),
    Check("coherent.poisson_table", check_poisson_table, 1e-12),
    Check("coherent.projection", check_projection, 1e-12),
    Check("coherent.measure_moments", check_measure_moments, 1e-4),
    Check("coherent.reproducing_kernel", check_reproducing_kernel, 1e-12),
    Check("coherent.holomorphic", check_holomorphic_representation, 1e-12),
    Check("coherent.fock_amplitude", check_coherent_amplitudes, 1e-12),
    Check("coherent.amplitude_decay", check_amplitude_decay, 1e-10),
    Check("coherent.pullback_density", check_pullback_density, 0.0),
    Check("spinrep.so4", check_so4_table, 1e-12),
    Check("spinrep.hamiltonians", check_spin_hamiltonians, 1e-12),
    Check("spinrep.classical", check_classical_spins, 1e-12),
    Check("spinrep.classical_hamiltonians", check_classical_spin_hamiltonians, 1e-12),
)


class VerificationRun:
    """Runs the checks on a thread pool and collects one status entry per check"""

    def __init__(self, checks=CHECKS, max_workers: int | None = None):
        self.checks = tuple(checks)
        self.max_workers = max_workers or worker_count()
        self.status = {'status': 'pending', 'progress': 0, 'message': 'Waiting to start'}
        self.results = {}
        self._lock = threading.Lock()

    def _run_one(self, check: Check) -> dict:
        try:
            deviation = float(check.run())
            passed = bool(np.isfinite(deviation) and deviation <= check.tolerance)
            entry = {'status': 'passed' if passed else 'failed', 'deviation': deviation}
        except Exception as e:
            logger.error("check %s raised %s: %s", check.name, type(e).__name__, e)
            entry = {'status': 'error', 'deviation': None, 'error': f"{type(e).__name__}: {e}"}
        entry['tolerance'] = check.tolerance
        with self._lock:
            self.results[check.name] = entry
            done = len(self.results)
            self.status['progress'] = int(100 * done / len(self.checks))
            self.status['message'] = f"Step {done}/{len(self.checks)}: {check.name} {entry['status']}"
            logger.info(self.status['message'])
        return entry

    def run(self) -> dict:
        self.status.update(status='running', message='Running checks')
        logger.info("running %d checks on %d worker(s)", len(self.checks), self.max_workers)
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            list(pool.map(self._run_one, self.checks))
        self.status['status'] = 'failed' if self.failures else 'passed'
        self.status['message'] = f"{len(self.failures)} of {len(self.checks)} checks failed"
        return self.report()

    @property
    def failures(self) -> list[str]:
        return sorted(name for name, entry in self.results.items() if entry['status'] != 'passed')

    def report(self) -> dict:
        return {
            'status': self.status['status'],
            'checks': {name: self.results[name] for name in sorted(self.results)},
            'failures': [{'name': name, 'deviation': self.results[name]['deviation']}
                         for name in self.failures],
        }
