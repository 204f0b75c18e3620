"""Sector operators, reduced Hamiltonians, propagators and the full-space oracle."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg, sparse

from . import dualhahn
from .errors import (IndexOutOfRange, NoConvergence, NotResonant, ShapeMismatch,
                     TruncationTooLarge)
from .fock import MAX_TRUNCATION, TruncatedFockSpace
from .sector import (FourWaveParams, SectorLabel, basis_states, lambda0, sectors_up_to,
                     shape_of)

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SectorOperator:
    """Observable restricted to one sector, in the basis ordered by local index n"""
    sector: SectorLabel
    matrix: np.ndarray

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if rows != cols or rows != shape_of(self.sector).dim:
            raise ShapeMismatch(f"{rows}x{cols} matrix does not fit sector {self.sector.as_tuple()}")


def _label(c) -> SectorLabel:
    return c if isinstance(c, SectorLabel) else SectorLabel.from_tuple(c)


def factor_function(n, shape) -> np.ndarray:
    """G(n) = n(N-n+1)(gamma+n)(N-n+delta+1)"""
    n = np.asarray(n, dtype=float)
    N, g, d = shape.N, shape.gamma, shape.delta
    return n * (N - n + 1) * (g + n) * (N - n + d + 1)


def sector_ops(c) -> tuple[SectorOperator, SectorOperator, SectorOperator]:
    """(A0, A, A*) on the sector; A has its entries on the superdiagonal"""
    c = _label(c)
    shape = shape_of(c)
    n = np.arange(1, shape.dim)
    A = np.diag(np.sqrt(factor_function(n, shape)), k=1) if shape.N else np.zeros((1, 1))
    A0 = np.diag(np.arange(shape.dim, dtype=float) + shape.base_offset)
    return (SectorOperator(c, A0.astype(complex)),
            SectorOperator(c, A.astype(complex)),
            SectorOperator(c, A.T.astype(complex)))


def commutator_check(c) -> float:
    """Largest entry error of the three defining commutation relations"""
    c = _label(c)
    shape = shape_of(c)
    A0, A, As = (op.matrix for op in sector_ops(c))
    n = np.arange(shape.dim)
    expected = np.diag(factor_function(n + 1, shape) - factor_function(n, shape))
    errors = [
        A0 @ A - A @ A0 + A,
        A0 @ As - As @ A0 - As,
        A @ As - As @ A - expected,
    ]
    return float(max(np.max(np.abs(e)) for e in errors))


def tridiagonal_h0(shape) -> np.ndarray:
    """Interaction part H0 of the sector Hamiltonian (dimensionless)"""
    N, g, d = shape.N, shape.gamma, shape.delta
    n = np.arange(shape.dim, dtype=float)
    diagonal = n * (N - n + d + 1) + (N - n) * (g + n + 1)
    m = n[:-1]
    off = np.sqrt((m + 1) * (N - m) * (g + m + 1) * (N - m + d))
    return np.diag(diagonal) + np.diag(off, 1) + np.diag(off, -1)


def reduced_hamiltonian(c, p: FourWaveParams) -> SectorOperator:
    """H_c = detuning * A0 + g hbar H0 + lambda0 I, in 1/time"""
    c = _label(c)
    shape = shape_of(c)
    A0 = np.diag(np.arange(shape.dim, dtype=float) + shape.base_offset)
    H = p.detuning * A0 + p.g * p.hbar * tridiagonal_h0(shape) + lambda0(c, p) * np.eye(shape.dim)
    return SectorOperator(c, H.astype(complex))


def oracle_diagonalize(M) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric tridiagonal eigensolver used as an independent check"""
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.max(np.abs(M.imag), initial=0.0) > SYMMETRY_TOL:
            raise ShapeMismatch("oracle expects a real matrix")
        M = M.real
    M = M.astype(float)
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
    if np.max(np.abs(M - M.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise ShapeMismatch("matrix is not symmetric")
    if np.max(np.abs(np.triu(M, 2)), initial=0.0) > 0.0:
        raise ShapeMismatch("matrix is not tridiagonal")

    diagonal = np.diag(M).copy()
    off = np.diag(M, 1).copy() if len(diagonal) > 1 else np.zeros(0)
    try:
        values, vectors = linalg.eigh_tridiagonal(diagonal, off, lapack_driver="stev")
    except linalg.LinAlgError as e:
        raise NoConvergence(f"tridiagonal eigensolver failed: {e}") from e

    residual = np.max(np.abs(M @ vectors - vectors * values), initial=0.0)
    if residual > RESIDUAL_TOL * max(1.0, np.linalg.norm(M, 2)):
        raise NoConvergence(f"residual {residual:.3e} above tolerance")
    return values, vectors


def _require_resonance(p: FourWaveParams):
    if not p.is_resonant():
        raise NotResonant(f"detuning {p.detuning!r} is not zero")


def spectral_decomposition(c, p: FourWaveParams) -> tuple[np.ndarray, dualhahn.SpectralTable]:
    """Sector energies g hbar lambda_k + lambda0 and the dual Hahn transition matrix"""
    _require_resonance(p)
    c = _label(c)
    table = dualhahn.transition_matrix(dualhahn.DualHahnParams.from_shape(shape_of(c)))
    energies = p.g * p.hbar * table.lambdas + lambda0(c, p)
    return energies, table


def propagator(c, p: FourWaveParams, t: float, allow_fallback: bool = False) -> SectorOperator:
    """U(t) = exp(i t H_c)"""
    c = _label(c)
    if p.is_resonant():
        energies, table = spectral_decomposition(c, p)
        R = table.R
    elif allow_fallback:
        energies, R = oracle_diagonalize(reduced_hamiltonian(c, p).matrix)
    else:
        raise NotResonant(f"detuning {p.detuning!r} is not zero; pass allow_fallback=True")
    U = (R * np.exp(1j * t * energies)) @ R.T
    return SectorOperator(c, U)


def transition_probability(c, m: int, n: int, t: float, p: FourWaveParams,
                           allow_fallback: bool = False) -> float:
    """|<m| exp(i t H_c) |n>|^2 between local basis indices"""
    c = _label(c)
    N = shape_of(c).N
    for name, idx in (("m", m), ("n", n)):
        if not 0 <= idx <= N:
            raise IndexOutOfRange(f"{name}={idx} outside 0..{N}")
    U = propagator(c, p, t, allow_fallback).matrix
    return float(abs(U[m, n]) ** 2)


def two_level_lambda0(shape, p: FourWaveParams) -> float:
    """lambda0 of an N=1 sector written through gamma and delta"""
    _, w1, w2, w3 = p.omegas
    g, d = shape.gamma, shape.delta
    gh = p.g * p.hbar
    if shape.subcase == "i":
        return w1 + w3 + w2 * g + w3 * d
    if shape.subcase == "ii":
        return w1 + w3 + w2 * g + w1 * d + gh * d * (g + 1)
    if shape.subcase == "iii":
        return w1 + w3 + (w1 - w2 + w3) * g + w3 * d + gh * g * (d + 1)
    return w1 + w3 + (w1 - w2 + w3) * g + w1 * d + gh * (g + d)


def two_level_closed_form(gamma: int, delta: int, p: FourWaveParams, t: float,
                          lambda0_value: float = 0.0) -> tuple[np.ndarray, float, float]:
    """Propagator, stay and flip probabilities of an N=1 sector"""
    _require_resonance(p)
    level = gamma + delta + 2
    kappa = (gamma + 1) / (delta + 1)
    phase = p.g * p.hbar * level * t
    e = np.exp(1j * phase)
    mix = np.sqrt((gamma + 1) * (delta + 1))
    U = np.exp(1j * t * lambda0_value) / level * np.array([
        [(delta + 1) + (gamma + 1) * e, mix * (e - 1)],
        [mix * (e - 1), (gamma + 1) + (delta + 1) * e],
    ])
    amplitude = 2 * kappa / (1 + kappa) ** 2
    p_flip = amplitude * (1 - np.cos(phase))
    p_stay = (1 + kappa ** 2) / (1 + kappa) ** 2 + amplitude * np.cos(phase)
    return U, float(p_stay), float(p_flip)


def heisenberg_evolve(F: SectorOperator, c, p: FourWaveParams, t: float,
                      allow_fallback: bool = False) -> SectorOperator:
    """F(t) = U(t) F U(t)^dagger, so dF/dt = (i/hbar)[H, F]"""
    c = _label(c)
    if F.sector != c:
        raise ShapeMismatch(f"operator lives on {F.sector.as_tuple()}, not {c.as_tuple()}")
    U = propagator(c, p, t, allow_fallback).matrix
    return SectorOperator(c, U @ F.matrix @ U.conj().T)


def build_full_hamiltonian(T: int, p: FourWaveParams) -> sparse.csr_matrix:
    """H on the truncated Fock space, in action/time"""
    if T > MAX_TRUNCATION:
        raise TruncationTooLarge(f"T={T} above the supported maximum {MAX_TRUNCATION}")
    space = TruncatedFockSpace(T)
    h = p.hbar
    rows, cols, vals = [], [], []
    for col, (n0, n1, n2, n3) in enumerate(space.basis):
        free = h * (p.omega0 * n0 + p.omega1 * n1 + p.omega2 * n2 + p.omega3 * n3)
        interaction = p.g * h * h * (n0 * (n3 + 1) + n1 * (n2 + 1))
        rows.append(col)
        cols.append(col)
        vals.append(free + interaction)
        # a1* a3* a0 a2 and its adjoint
        if n0 > 0 and n2 > 0:
            row = space.index[(n0 - 1, n1 + 1, n2 - 1, n3 + 1)]
            value = p.g * h * h * np.sqrt(n0 * (n1 + 1) * n2 * (n3 + 1))
            rows += [row, col]
            cols += [col, row]
            vals += [value, value]
    H = sparse.csr_matrix((vals, (rows, cols)), shape=(space.dim, space.dim))
    logger.debug("full Hamiltonian T=%d, nnz %d", T, H.nnz)
    return H


def sector_block(H, space: TruncatedFockSpace, c) -> np.ndarray:
    idx = space.indices_of(basis_states(c))
    return H[idx][:, idx].toarray()


def off_block_norm(H, space: TruncatedFockSpace) -> float:
    """Largest matrix element joining two different sectors"""
    coo = sparse.coo_matrix(H)
    largest = 0.0
    for i, j, v in zip(coo.row, coo.col, coo.data):
        a, b = space.basis[i], space.basis[j]
        if (a[0] + a[1], a[2] + a[3], a[0] - a[2]) != (b[0] + b[1], b[2] + b[3], b[0] - b[2]):
            largest = max(largest, abs(v))
    return largest


def block_spectra(T: int, p: FourWaveParams) -> list[dict]:
    """Per-sector eigenvalues of the full matrix against hbar^2 g lambda_k + hbar lambda0"""
    _require_resonance(p)
    space = TruncatedFockSpace(T)
    H = build_full_hamiltonian(T, p)
    report = []
    for c in sectors_up_to(T):
        block = sector_block(H, space, c)
        found = np.linalg.eigvalsh(block)
        shape = shape_of(c)
        lambdas = dualhahn.eigenvalues(dualhahn.DualHahnParams.from_shape(shape))
        expected = p.hbar ** 2 * p.g * lambdas + p.hbar * lambda0(c, p)
        report.append({
            "sector": c.as_tuple(),
            "deviation": float(np.max(np.abs(np.sort(found) - np.sort(expected)))),
        })
    return report


def spectrum_rows(c, p: FourWaveParams) -> list[dict]:
    energies, table = spectral_decomposition(c, p)
    return [{"k": k, "lambda": int(lam), "energy": float(e)}
            for k, (lam, e) in enumerate(zip(table.lambdas, energies))]
