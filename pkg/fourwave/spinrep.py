"""Two angular momenta built from the four modes and the spin forms of the Hamiltonian."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .classical import ModeState
from .fock import TruncatedFockSpace
from .quantum import build_full_hamiltonian
from .sector import FourWaveParams
from .symbols import NormalOrderedObservable, number_symbol, poisson_bracket

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 6


@dataclass
class SpinOperators:
    """L, M and R, S on a truncated Fock space, in action units"""
    space: TruncatedFockSpace
    hbar: float
    numbers: tuple
    L: sparse.csr_matrix
    M1: sparse.csr_matrix
    M2: sparse.csr_matrix
    M3: sparse.csr_matrix
    Mplus: sparse.csr_matrix
    Mminus: sparse.csr_matrix
    R: sparse.csr_matrix
    S1: sparse.csr_matrix
    S2: sparse.csr_matrix
    S3: sparse.csr_matrix
    Splus: sparse.csr_matrix
    Sminus: sparse.csr_matrix


@dataclass(frozen=True)
class ClassicalSpin:
    L: float
    M1: float
    M2: float
    M3: float
    R: float
    S1: float
    S2: float
    S3: float


def build_spin_ops(T: int = DEFAULT_TRUNCATION, hbar: float = 1.0) -> SpinOperators:
    space = TruncatedFockSpace(T)
    N0, N1, N2, N3 = (space.number(k, hbar) for k in range(4))
    Mplus = space.monomial((0, 1, 0, 0), (1, 0, 0, 0), hbar)    # a0 a1*
    Mminus = space.monomial((1, 0, 0, 0), (0, 1, 0, 0), hbar)   # a0* a1
    Splus = space.monomial((0, 0, 1, 0), (0, 0, 0, 1), hbar)    # a2* a3
    Sminus = space.monomial((0, 0, 0, 1), (0, 0, 1, 0), hbar)   # a2 a3*
    ops = SpinOperators(
        space=space,
        hbar=hbar,
        numbers=(N0, N1, N2, N3),
        L=0.5 * (N0 + N1),
        M1=0.5 * (Mplus + Mminus),
        M2=-0.5j * (Mplus - Mminus),
        M3=0.5 * (N1 - N0),
        Mplus=Mplus,
        Mminus=Mminus,
        R=0.5 * (N2 + N3),
        S1=0.5 * (Splus + Sminus),
        S2=-0.5j * (Splus - Sminus),
        S3=0.5 * (N2 - N3),
        Splus=Splus,
        Sminus=Sminus,
    )
    logger.debug("spin operators on T=%d (dimension %d)", T, space.dim)
    return ops


def _max_abs(matrix) -> float:
    matrix = sparse.csr_matrix(matrix)
    return float(np.max(np.abs(matrix.data), initial=0.0))


def _commutator(a, b):
    return a @ b - b @ a


def h_dicke(p: FourWaveParams, T: int = DEFAULT_TRUNCATION, ops: SpinOperators | None = None):
    """Hamiltonian as a spin L coupled to modes 2 and 3"""
    ops = ops or build_spin_ops(T, p.hbar)
    _, _, N2, N3 = ops.numbers
    gh = p.g * p.hbar
    # a2 a3* and a2* a3
    lower = ops.space.monomial((0, 0, 0, 1), (0, 0, 1, 0), p.hbar)
    upper = ops.space.monomial((0, 0, 1, 0), (0, 0, 0, 1), p.hbar)
    return ((p.omega0 + p.omega1 + 2 * gh) * ops.L + (p.omega1 - p.omega0) * ops.M3
            + p.omega2 * N2 + p.omega3 * N3
            + p.g * ((N2 + N3) @ ops.L + (N2 - N3) @ ops.M3
                     + lower @ ops.Mplus + upper @ ops.Mminus))


def h_ms(p: FourWaveParams, T: int = DEFAULT_TRUNCATION, ops: SpinOperators | None = None):
    """Hamiltonian as two coupled angular momenta"""
    ops = ops or build_spin_ops(T, p.hbar)
    gh = p.g * p.hbar
    return ((p.omega0 + p.omega1 + 2 * gh) * ops.L + (p.omega1 - p.omega0) * ops.M3
            + (p.omega2 + p.omega3) * ops.R + (p.omega2 - p.omega3) * ops.S3
            + p.g * (2 * ops.L @ ops.R + 2 * ops.M3 @ ops.S3
                     + ops.Mplus @ ops.Sminus + ops.Mminus @ ops.Splus))


def commutator_audit(ops: SpinOperators) -> list[dict]:
    """Deviation of every so(4) relation and both Casimir identities"""
    h = ops.hbar
    M = {"M1": ops.M1, "M2": ops.M2, "M3": ops.M3}
    S = {"S1": ops.S1, "S2": ops.S2, "S3": ops.S3}
    checks = []
    for spin, (x, y, z), total in (("M", (ops.M1, ops.M2, ops.M3), ops.L),
                                   ("S", (ops.S1, ops.S2, ops.S3), ops.R)):
        checks += [
            (f"[{spin}1,{spin}2] = i hbar {spin}3", _commutator(x, y) - 1j * h * z),
            (f"[{spin}2,{spin}3] = i hbar {spin}1", _commutator(y, z) - 1j * h * x),
            (f"[{spin}3,{spin}1] = i hbar {spin}2", _commutator(z, x) - 1j * h * y),
            (f"{spin}^2 = J(J + hbar)", x @ x + y @ y + z @ z - total @ total - h * total),
        ]
        for name, op in zip(("1", "2", "3"), (x, y, z)):
            checks.append((f"[{spin}{name}, {'L' if spin == 'M' else 'R'}] = 0", _commutator(op, total)))
    checks += [
        ("[M3,M+] = hbar M+", _commutator(ops.M3, ops.Mplus) - h * ops.Mplus),
        ("[M3,M-] = -hbar M-", _commutator(ops.M3, ops.Mminus) + h * ops.Mminus),
        ("[M+,M-] = 2 hbar M3", _commutator(ops.Mplus, ops.Mminus) - 2 * h * ops.M3),
        ("[S3,S+] = hbar S+", _commutator(ops.S3, ops.Splus) - h * ops.Splus),
        ("[S3,S-] = -hbar S-", _commutator(ops.S3, ops.Sminus) + h * ops.Sminus),
        ("[S+,S-] = 2 hbar S3", _commutator(ops.Splus, ops.Sminus) - 2 * h * ops.S3),
    ]
    for m_name, m_op in M.items():
        for s_name, s_op in S.items():
            checks.append((f"[{m_name},{s_name}] = 0", _commutator(m_op, s_op)))
    return [{"relation": name, "deviation": _max_abs(matrix)} for name, matrix in checks]


def conserved_audit(p: FourWaveParams, T: int = DEFAULT_TRUNCATION) -> list[dict]:
    """Operator identities between the three forms of H and its integrals of motion"""
    ops = build_spin_ops(T, p.hbar)
    H = build_full_hamiltonian(T, p)
    HD = h_dicke(p, T, ops)
    HMS = h_ms(p, T, ops)
    checks = [
        ("H = H_D", H - HD),
        ("H_D = H_MS", HD - HMS),
        ("[H_MS, L] = 0", _commutator(HMS, ops.L)),
        ("[H_MS, R] = 0", _commutator(HMS, ops.R)),
        ("[H_MS, M3 + S3] = 0", _commutator(HMS, ops.M3 + ops.S3)),
    ]
    return [{"relation": name, "deviation": _max_abs(matrix)} for name, matrix in checks]


def _amplitudes(z) -> np.ndarray:
    return z.array if isinstance(z, ModeState) else np.asarray(z, dtype=complex)


def classical_spin_functions(z) -> ClassicalSpin:
    z0, z1, z2, z3 = _amplitudes(z)
    w = z0 * np.conj(z1)
    v = np.conj(z2) * z3
    a0, a1, a2, a3 = abs(z0) ** 2, abs(z1) ** 2, abs(z2) ** 2, abs(z3) ** 2
    return ClassicalSpin(
        L=0.5 * (a0 + a1), M1=float(w.real), M2=float(w.imag), M3=0.5 * (a1 - a0),
        R=0.5 * (a2 + a3), S1=float(v.real), S2=float(v.imag), S3=0.5 * (a2 - a3),
    )


def classical_h_dicke(z, p: FourWaveParams) -> float:
    """Phase-space Dicke form: spin L from modes 0, 1 coupled to the amplitudes of modes 2, 3"""
    _, _, z2, z3 = _amplitudes(z)
    s = classical_spin_functions(z)
    a2, a3 = abs(z2) ** 2, abs(z3) ** 2
    m_plus = complex(s.M1, s.M2)
    free = ((p.omega0 + p.omega1) * s.L + (p.omega1 - p.omega0) * s.M3
            + p.omega2 * a2 + p.omega3 * a3)
    coupling = (a2 + a3) * s.L + (a2 - a3) * s.M3 + 2 * (z2 * np.conj(z3) * m_plus).real
    return float(free + p.g * coupling)


def classical_h_ms(z, p: FourWaveParams) -> float:
    """Phase-space form of two coupled spins, coupling 2(L R + M.S)"""
    s = classical_spin_functions(z)
    free = ((p.omega0 + p.omega1) * s.L + (p.omega1 - p.omega0) * s.M3
            + (p.omega2 + p.omega3) * s.R + (p.omega2 - p.omega3) * s.S3)
    coupling = 2 * (s.L * s.R + s.M1 * s.S1 + s.M2 * s.S2 + s.M3 * s.S3)
    return float(free + p.g * coupling)


def spin_symbols() -> dict[str, NormalOrderedObservable]:
    """Polynomial symbols of the classical spin functions"""
    n0, n1, n2, n3 = (number_symbol(k) for k in range(4))
    w = NormalOrderedObservable.monomial((0, 1, 0, 0), (1, 0, 0, 0))   # z0 zbar1
    v = NormalOrderedObservable.monomial((0, 0, 1, 0), (0, 0, 0, 1))   # zbar2 z3
    return {
        "L": (n0 + n1).scaled(0.5),
        "M1": (w + w.conjugate()).scaled(0.5),
        "M2": (w - w.conjugate()).scaled(-0.5j),
        "M3": (n1 - n0).scaled(0.5),
        "R": (n2 + n3).scaled(0.5),
        "S1": (v + v.conjugate()).scaled(0.5),
        "S2": (v - v.conjugate()).scaled(-0.5j),
        "S3": (n2 - n3).scaled(0.5),
    }


def poisson_table() -> list[dict]:
    """Largest coefficient of {J_k, J_l} - eps_klm J_m for both classical spins"""
    symbols = spin_symbols()
    rows = []
    for spin in ("M", "S"):
        names = [f"{spin}1", f"{spin}2", f"{spin}3"]
        for k in range(3):
            a, b, c = names[k], names[(k + 1) % 3], names[(k + 2) % 3]
            residual = poisson_bracket(symbols[a], symbols[b]) - symbols[c]
            rows.append({"relation": f"{{{a},{b}}} = {c}",
                         "deviation": max((abs(v) for v in residual.terms.values()), default=0.0)})
    return rows
