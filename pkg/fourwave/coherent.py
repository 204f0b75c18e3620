"""Standard and reduced coherent states, reproducing kernel and measure.

The reduced coherent state of a sector c is sum_n zeta^n / sqrt(w_n) |n>, with
w_n = n! (N-n)! (n+gamma)! (N+delta-n)!; its holomorphic picture turns the
sector ladder operators into first and second order differential operators.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .classical import ModeState, ReducedCoords, interval
from .errors import DivisionByZero, NotResonant, OutOfInterval
from .fock import TruncatedFockSpace
from .quantum import propagator
from .sector import FourWaveParams, SectorLabel, basis_states, shape_of
from .symbols import (  # noqa: F401
    NormalOrderedObservable, covariant_symbol, hamiltonian_observable,
    kummer_generators, poisson_bracket, star_bracket, star_product,
)

logger = logging.getLogger(__name__)

TAIL_CUTOFF = 1e-16


@dataclass
class CoherentTable:
    """Truncated coefficients of |z> on a Fock space"""
    space: TruncatedFockSpace
    coefficients: np.ndarray
    full_norm_sq: float
    z: np.ndarray

    @property
    def tail(self) -> float:
        """Squared norm lost to the truncation"""
        return max(0.0, self.full_norm_sq - float(np.sum(np.abs(self.coefficients) ** 2)))

    def annihilation_residual(self, mode: int, hbar: float) -> float:
        """max |(a_k - z_k)|z>| over states strictly below the truncation"""
        lowered = self.space.annihilation(mode, hbar) @ self.coefficients
        z_k = self.z[mode]
        inner = [i for i, s in enumerate(self.space.basis) if sum(s) < self.space.max_total_quanta]
        return float(np.max(np.abs(lowered[inner] - z_k * self.coefficients[inner]), initial=0.0))


@dataclass(frozen=True)
class ReducedCoherent:
    zeta: complex
    sector: SectorLabel
    coefficients: np.ndarray


def _state(z) -> np.ndarray:
    return z.array if isinstance(z, ModeState) else np.asarray(z, dtype=complex)


def _label(c) -> SectorLabel:
    return c if isinstance(c, SectorLabel) else SectorLabel.from_tuple(c)


def fock_coefficient(z, state, hbar: float) -> complex:
    """prod_k z_k^n_k / sqrt(n_k! hbar^n_k)"""
    z = _state(z)
    value = 1.0 + 0j
    for zk, nk in zip(z, state):
        if nk:
            value *= zk ** nk / math.sqrt(math.factorial(nk) * hbar ** nk)
    return value


def coherent_coeffs(z, hbar: float, T: int) -> CoherentTable:
    space = TruncatedFockSpace(T)
    z = _state(z)
    coefficients = np.array([fock_coefficient(z, s, hbar) for s in space.basis])
    table = CoherentTable(space, coefficients, float(np.exp(np.sum(np.abs(z) ** 2) / hbar)), z)
    if table.tail > TAIL_CUTOFF * table.full_norm_sq:
        logger.debug("coherent state truncated at T=%d, tail %.3e", T, table.tail)
    return table


def zeta_of(z) -> complex:
    z0, z1, z2, z3 = _state(z)
    if z1 == 0 or z3 == 0:
        raise DivisionByZero("zeta needs z1 and z3 nonzero")
    return complex(z0 * z2 / (z1 * z3))


def zeta_of_reduced(rc: ReducedCoords) -> complex:
    lo, hi = interval(rc.b)
    if not lo < rc.I0 < hi:
        raise OutOfInterval(f"I0={rc.I0} outside ]{lo}, {hi}[")
    b1, b2, b3 = rc.b
    I0 = rc.I0
    modulus = math.sqrt(I0 * (I0 - b3) / ((b1 - I0) * (b2 + b3 - I0)))
    return complex(modulus * np.exp(1j * rc.psi0))


def reduced_weight(n: int, shape) -> int:
    """n! (N-n)! (n+gamma)! (N+delta-n)!"""
    N, g, d = shape.N, shape.gamma, shape.delta
    return (math.factorial(n) * math.factorial(N - n)
            * math.factorial(n + g) * math.factorial(N + d - n))


def reduced_state(zeta: complex, c) -> ReducedCoherent:
    c = _label(c)
    shape = shape_of(c)
    coefficients = np.array([zeta ** n / math.sqrt(reduced_weight(n, shape)) for n in range(shape.dim)],
                            dtype=complex)
    return ReducedCoherent(complex(zeta), c, coefficients)


def alpha_factor(z, c) -> complex:
    """Prefactor of the sector projection, one monomial per subcase"""
    z0, z1, z2, z3 = _state(z)
    shape = shape_of(c)
    N, g, d = shape.N, shape.gamma, shape.delta
    if shape.subcase == "i":
        return z1 ** N * z2 ** g * z3 ** (N + d)
    if shape.subcase == "ii":
        return z1 ** (N + d) * z2 ** g * z3 ** N
    if shape.subcase == "iii":
        return z0 ** g * z1 ** N * z3 ** (N + d)
    return z0 ** g * z1 ** (N + d) * z3 ** N


def project_coherent(z, c, hbar: float) -> tuple[complex, ReducedCoherent]:
    """P_c|z> = alpha hbar^-(2N+gamma+delta)/2 |zeta; c>"""
    c = _label(c)
    shape = shape_of(c)
    if shape.N == 0:
        # the sector is a single Fock state; zeta plays no role
        zeta = zeta_of(z) if _state(z)[1] != 0 and _state(z)[3] != 0 else 0j
    else:
        zeta = zeta_of(z)
    return complex(alpha_factor(z, c)), reduced_state(zeta, c)


def projection_scale(c, hbar: float) -> float:
    shape = shape_of(c)
    return hbar ** (-(2 * shape.N + shape.gamma + shape.delta) / 2)


def projection_deviation(z, c, hbar: float) -> float:
    """Largest gap between the sector part of |z> and its reduced form"""
    alpha, reduced = project_coherent(z, c, hbar)
    direct = np.array([fock_coefficient(z, s, hbar) for s in basis_states(c)])
    return float(np.max(np.abs(direct - alpha * projection_scale(c, hbar) * reduced.coefficients)))


def reproducing_kernel(zeta: complex, w: complex, c) -> complex:
    """<zeta; c | w; c> = 2F1(-N, -(N+delta); gamma+1; conj(zeta) w) / (N! gamma! (N+delta)!)"""
    shape = shape_of(_label(c))
    N, g, d = shape.N, shape.gamma, shape.delta
    x = np.conj(zeta) * w
    # terminating series, summed term by term
    total = 0j
    term = 1.0 + 0j
    for n in range(N + 1):
        total += term
        term *= (-N + n) * (-(N + d) + n) / ((g + 1 + n) * (n + 1)) * x
    return complex(total / (math.factorial(N) * math.factorial(g) * math.factorial(N + d)))


def _log_measure_prefactor(shape) -> float:
    N, g, d = shape.N, shape.gamma, shape.delta
    return (special.gammaln(N + 2) + special.gammaln(N + g + 2) + special.gammaln(N + d + 2)
            + special.gammaln(N + d + g + 2) - special.gammaln(2 * N + d + g + 4)
            - math.log(2 * math.pi))


def measure_density(s: float, c) -> float:
    """Radial density of the reproducing measure in s = |zeta|^2"""
    shape = shape_of(_label(c))
    N, g, d = shape.N, shape.gamma, shape.delta
    a, b, cc = N + d + 2, N + 2, 2 * N + d + g + 4
    if s <= 1.0:
        value = special.hyp2f1(a, b, cc, 1.0 - s)
    else:
        # Pfaff: 2F1(a, b; c; x) = (1 - x)^-a 2F1(a, c - b; c; x / (x - 1)), here x = 1 - s
        value = s ** (-a) * special.hyp2f1(a, cc - b, cc, (s - 1.0) / s)
    return float(math.exp(_log_measure_prefactor(shape)) * value)


def radial_moment(n: int, c) -> float:
    """2 pi int_0^inf s^n density(s) ds, equal to the reduced weight w_n"""
    def integrand(s):
        return s ** n * measure_density(s, c)

    inner, _ = integrate.quad(integrand, 0.0, 1.0, limit=200)
    outer, _ = integrate.quad(integrand, 1.0, np.inf, limit=400)
    return 2 * math.pi * (inner + outer)


def holomorphic_ops(c) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """zeta d/dzeta, d/dzeta(gamma + zeta d/dzeta), zeta(N - zeta d/dzeta)(N + delta - zeta d/dzeta)"""
    shape = shape_of(_label(c))
    N, g, d = shape.N, shape.gamma, shape.delta
    dim = shape.dim
    A0 = np.diag(np.arange(dim, dtype=float))
    A = np.zeros((dim, dim))
    As = np.zeros((dim, dim))
    for n in range(1, dim):
        A[n - 1, n] = n * (g + n)
    for n in range(dim - 1):
        As[n + 1, n] = (N - n) * (N + d - n)
    return A0, A, As


def holomorphic_weights(c) -> np.ndarray:
    shape = shape_of(_label(c))
    return np.array([1.0 / math.sqrt(reduced_weight(n, shape)) for n in range(shape.dim)])


def fock_coherent_amplitude(z, fock_state, t: float, p: FourWaveParams) -> complex:
    """<z| exp(i t H / hbar) |n> / ||z|| through the sector propagator"""
    if not p.is_resonant():
        raise NotResonant(f"detuning {p.detuning!r} is not zero")
    z = _state(z)
    n0, n1, n2, n3 = fock_state
    c = SectorLabel(n0 + n1, n2 + n3, n0 - n2)
    shape = shape_of(c)
    local = n0 - shape.base_offset
    coefficients = np.array([fock_coefficient(z, s, p.hbar) for s in basis_states(c)])
    U = propagator(c, p, t).matrix
    norm = math.exp(float(np.sum(np.abs(z) ** 2)) / (2 * p.hbar))
    return complex(np.vdot(coefficients, U[:, local]) / norm)


def fock_coherent_amplitude_reduced(z, fock_state, t: float, p: FourWaveParams) -> complex:
    """Same amplitude assembled from alpha, the hbar power and |zeta; c>"""
    if not p.is_resonant():
        raise NotResonant(f"detuning {p.detuning!r} is not zero")
    z = _state(z)
    n0, n1, n2, n3 = fock_state
    c = SectorLabel(n0 + n1, n2 + n3, n0 - n2)
    local = n0 - shape_of(c).base_offset
    alpha, reduced = project_coherent(z, c, p.hbar)
    U = propagator(c, p, t).matrix
    gaussian = math.exp(-float(np.sum(np.abs(z) ** 2)) / (2 * p.hbar))
    return complex(np.conj(alpha) * projection_scale(c, p.hbar) * gaussian
                   * np.vdot(reduced.coefficients, U[:, local]))


def amplitude_decay_factor(b, I0: float, c, hbar: float) -> float:
    """|alpha(z / sqrt(hbar))| exp(-|z|^2 / 2 hbar) on the level set of b"""
    c = _label(c)
    b1, b2, b3 = b
    shape = shape_of(c)
    if shape.subcase in ("i", "ii"):
        log_value = (c.c1 / 2 * math.log((b1 - I0) / hbar)
                     + (-c.c3) / 2 * math.log((I0 - b3) / hbar)
                     + (c.c2 + c.c3) / 2 * math.log((b2 + b3 - I0) / hbar))
    else:
        log_value = (c.c3 / 2 * math.log(I0 / hbar)
                     + (c.c1 - c.c3) / 2 * math.log((b1 - I0) / hbar)
                     + c.c2 / 2 * math.log((b2 + b3 - I0) / hbar))
    return math.exp(log_value - (b1 + b2) / (2 * hbar))


def tabulate_pullback_density(c, b, hbar: float = 1.0, n_points: int = 50) -> np.ndarray:
    """Rows (I0, rho) with K*omega_FS = rho(I0) dI0 ^ dpsi0 for the reduced coherent map"""
    c = _label(c)
    shape = shape_of(c)
    lo, hi = interval(b)
    b1, b2, b3 = b
    weights = np.array([float(reduced_weight(n, shape)) for n in range(shape.dim)])
    levels = np.arange(shape.dim, dtype=float)
    rows = []
    for I0 in np.linspace(lo, hi, n_points + 2)[1:-1]:
        s = I0 * (I0 - b3) / ((b1 - I0) * (b2 + b3 - I0))
        # distribution of n in |zeta; c>, computed in log space
        logs = levels * math.log(s) - np.log(weights)
        probs = np.exp(logs - logs.max())
        probs /= probs.sum()
        mean = float(probs @ levels)
        variance = float(probs @ (levels - mean) ** 2)
        dlog_s = 1 / I0 + 1 / (I0 - b3) + 1 / (b1 - I0) + 1 / (b2 + b3 - I0)
        rows.append((float(I0), hbar * variance * dlog_s))
    return np.array(rows)
