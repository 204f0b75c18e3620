"""Classical four-mode dynamics: Hamiltonian, action-angle variables, reduced flow.

Under the frequency resonance the reduced motion of I0 obeys
(dI0/dt)^2 = p I0^2 + q I0 + r and is solved in closed form; every other
sign pattern of (p, Delta) is integrated numerically on the reduced phase space.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import (ConfigError, NotResonant, OnBoundary, OutOfInterval, SingularPoint,
                     UnsupportedRegime, ZeroCoupling)
from .sector import FourWaveParams

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
SINGULAR_TOL = 1e-14
DISCRIMINANT_RTOL = 1e-10


@dataclass(frozen=True)
class ModeState:
    z0: complex
    z1: complex
    z2: complex
    z3: complex

    @classmethod
    def from_array(cls, values) -> "ModeState":
        return cls(*(complex(v) for v in values))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.z0, self.z1, self.z2, self.z3], dtype=complex)

    @property
    def on_boundary(self) -> bool:
        return bool(np.any(np.abs(self.array) == 0.0))


@dataclass(frozen=True)
class ActionAngle:
    I: tuple[float, float, float, float]
    psi: tuple[float, float, float, float]

    @property
    def b(self) -> tuple[float, float, float]:
        return (self.I[1], self.I[2], self.I[3])

    @property
    def reduced(self) -> "ReducedCoords":
        return ReducedCoords(self.I[0], self.psi[0], self.b)


@dataclass(frozen=True)
class ReducedCoords:
    I0: float
    psi0: float
    b: tuple[float, float, float]


@dataclass(frozen=True)
class QuadraticCoeffs:
    p: float
    q: float
    r: float
    delta: float
    regime: str

    def __call__(self, I0):
        return self.p * I0 ** 2 + self.q * I0 + self.r


@dataclass
class ReducedTrajectory:
    """(I0, psi0) sampled on a time grid; psi0 is kept unwrapped"""
    times: np.ndarray
    I0: np.ndarray
    psi0: np.ndarray
    b: tuple[float, float, float]
    energy: float
    method: str


@dataclass
class FullTrajectory:
    times: np.ndarray
    states: np.ndarray
    drift: dict = field(default_factory=dict)


def _as_array(z) -> np.ndarray:
    return z.array if isinstance(z, ModeState) else np.asarray(z, dtype=complex)


def hamiltonian(z, p: FourWaveParams) -> float:
    z0, z1, z2, z3 = _as_array(z)
    a0, a1, a2, a3 = abs(z0) ** 2, abs(z1) ** 2, abs(z2) ** 2, abs(z3) ** 2
    free = p.omega0 * a0 + p.omega1 * a1 + p.omega2 * a2 + p.omega3 * a3
    coupling = a0 * a3 + a1 * a2 + 2 * (z0 * z1.conjugate() * z2 * z3.conjugate()).real
    return float(free + p.g * coupling)


def equations_of_motion(z, p: FourWaveParams) -> np.ndarray:
    """dz_k/dt = i dH/dz_k-bar"""
    z0, z1, z2, z3 = _as_array(z)
    w0, w1, w2, w3 = p.omegas
    g = p.g
    return 1j * np.array([
        w0 * z0 + g * (z0 * abs(z3) ** 2 + z1 * z2.conjugate() * z3),
        w1 * z1 + g * (z1 * abs(z2) ** 2 + z0 * z2 * z3.conjugate()),
        w2 * z2 + g * (z2 * abs(z1) ** 2 + z0.conjugate() * z1 * z3),
        w3 * z3 + g * (z3 * abs(z0) ** 2 + z0 * z1.conjugate() * z2),
    ])


def to_action_angle(z) -> ActionAngle:
    state = _as_array(z)
    if np.any(np.abs(state) == 0.0):
        raise OnBoundary(f"angles undefined for {state}")
    moduli = np.abs(state) ** 2
    phi = np.angle(state)
    I = (moduli[0], moduli[0] + moduli[1], moduli[2] + moduli[3], moduli[0] - moduli[2])
    psi = (phi[0] - phi[1] + phi[2] - phi[3], phi[1], phi[3], phi[3] - phi[2])
    return ActionAngle(tuple(float(v) for v in I), tuple(float(np.mod(v, TWO_PI)) for v in psi))


def from_action_angle(aa: ActionAngle) -> ModeState:
    I0, I1, I2, I3 = aa.I
    psi0, psi1, psi2, psi3 = aa.psi
    return ModeState(
        math.sqrt(I0) * np.exp(1j * (psi0 + psi1 + psi3)),
        math.sqrt(I1 - I0) * np.exp(1j * psi1),
        math.sqrt(I0 - I3) * np.exp(1j * (psi2 - psi3)),
        math.sqrt(I2 + I3 - I0) * np.exp(1j * psi2),
    )


def interval(b) -> tuple[float, float]:
    """Admissible open interval ]a, b[ of I0"""
    b1, b2, b3 = b
    return max(0.0, b3), min(b1, b2 + b3)


def _require_interior(I0, b):
    lo, hi = interval(b)
    if not lo < I0 < hi:
        raise OutOfInterval(f"I0={I0} outside ]{lo}, {hi}[")


def g0(I0, b):
    b1, b2, b3 = b
    return I0 * (b1 - I0) * (I0 - b3) * (b2 + b3 - I0)


def g0_prime(I0, b):
    b1, b2, b3 = b
    return ((b1 - I0) * (I0 - b3) * (b2 + b3 - I0)
            - I0 * (I0 - b3) * (b2 + b3 - I0)
            + I0 * (b1 - I0) * (b2 + b3 - I0)
            - I0 * (b1 - I0) * (I0 - b3))


def quadratic_part(I0, b):
    b1, b2, b3 = b
    return I0 * (b2 + b3 - I0) + (b1 - I0) * (I0 - b3)


def frozen_energy(b, p: FourWaveParams) -> float:
    """omega1 b1 + omega3 b2 + (omega3 - omega2) b3"""
    b1, b2, b3 = b
    return p.omega1 * b1 + p.omega3 * b2 + (p.omega3 - p.omega2) * b3


def reduced_hamiltonian(rc: ReducedCoords, p: FourWaveParams) -> float:
    _require_interior(rc.I0, rc.b)
    I0 = rc.I0
    return (p.detuning * I0 + frozen_energy(rc.b, p)
            + p.g * (quadratic_part(I0, rc.b) + 2 * math.sqrt(g0(I0, rc.b)) * math.cos(rc.psi0)))


def reduced_rhs(I0, psi0, b, p: FourWaveParams):
    """(dI0/dt, dpsi0/dt) on the reduced phase space"""
    b1, b2, b3 = b
    root = np.sqrt(g0(I0, b))
    dI0 = 2 * p.g * root * np.sin(psi0)
    dpsi0 = p.detuning + p.g * (-4 * I0 + b1 + b2 + 2 * b3 + g0_prime(I0, b) / root * np.cos(psi0))
    return dI0, dpsi0


def pqr(E: float, b, p: FourWaveParams) -> QuadraticCoeffs:
    if not p.is_resonant():
        raise NotResonant(f"detuning {p.detuning!r} is not zero")
    if p.g == 0:
        raise ZeroCoupling("p, q, r are defined for g != 0")
    b1, b2, b3 = b
    g = p.g
    K = E - frozen_energy(b, p)
    pc = -g ** 2 * (b1 - b2) ** 2 - 4 * g * K
    qc = 2 * g ** 2 * b1 * b3 * (b1 - b2) + 2 * g * (b1 + b2 + 2 * b3) * K
    rc = -(K + g * b1 * b3) ** 2
    disc = qc ** 2 - 4 * pc * rc
    return QuadraticCoeffs(pc, qc, rc, disc, classify(pc, disc, qc ** 2 + abs(4 * pc * rc)))


def classify(pc: float, disc: float, scale: float = 1.0) -> str:
    zero = abs(disc) <= DISCRIMINANT_RTOL * max(scale, 1e-300)
    if pc < 0 and disc > 0 and not zero:
        return "a"
    if pc > 0 and zero:
        return "b"
    if pc > 0 and disc < 0 and not zero:
        return "c"
    if pc < 0 and zero:
        return "stationary"
    return "fallback"


def quadratic_motion(coeffs: QuadraticCoeffs, t0: float, I0_start: float,
                     dI0_start: float) -> tuple[Callable, Callable]:
    """I0(t) and dI0/dt solving (dI0/dt)^2 = p I0^2 + q I0 + r through the given data"""
    pc, qc, disc = coeffs.p, coeffs.q, coeffs.delta
    if coeffs.regime == "stationary":
        return (lambda t: np.full_like(np.asarray(t, dtype=float), I0_start),
                lambda t: np.zeros_like(np.asarray(t, dtype=float)))

    centre = -qc / (2 * pc)
    u0 = I0_start - centre

    if coeffs.regime == "a":
        omega = math.sqrt(-pc)
        amplitude = math.sqrt(disc) / (-2 * pc)
        phase = math.atan2(omega * u0, dI0_start)
        return (lambda t: centre + amplitude * np.sin(omega * (np.asarray(t) - t0) + phase),
                lambda t: amplitude * omega * np.cos(omega * (np.asarray(t) - t0) + phase))

    rate = math.sqrt(pc)
    if coeffs.regime == "b":
        s = 1.0 if dI0_start * u0 >= 0 else -1.0
        return (lambda t: centre + u0 * np.exp(s * rate * (np.asarray(t) - t0)),
                lambda t: s * rate * u0 * np.exp(s * rate * (np.asarray(t) - t0)))

    if coeffs.regime == "c":
        scale = math.sqrt(-disc) / (2 * pc)
        s = 1.0 if dI0_start >= 0 else -1.0
        offset = math.asinh((2 * pc * I0_start + qc) / math.sqrt(-disc))
        return (lambda t: centre + scale * np.sinh(s * rate * (np.asarray(t) - t0) + offset),
                lambda t: s * rate * scale * np.cosh(s * rate * (np.asarray(t) - t0) + offset))

    raise UnsupportedRegime(f"no closed form for p={pc}, Delta={disc}")


class ClosedFormTrajectory:
    """Resonant closed-form solution through a reduced initial point"""

    def __init__(self, rc0: ReducedCoords, p: FourWaveParams, t0: float = 0.0):
        _require_interior(rc0.I0, rc0.b)
        self.b = rc0.b
        self.params = p
        self.t0 = t0
        self.psi_start = rc0.psi0
        self.energy = reduced_hamiltonian(rc0, p)

        if p.g == 0:
            # free motion: I0 frozen, psi0 drifts with the detuning
            self.coeffs = None
            self.regime = "free"
            self._I0 = lambda t: np.full_like(np.asarray(t, dtype=float), rc0.I0)
            self._dI0 = lambda t: np.zeros_like(np.asarray(t, dtype=float))
            return

        self.coeffs = pqr(self.energy, rc0.b, p)
        self.regime = self.coeffs.regime
        if self.regime == "fallback":
            self._I0 = self._dI0 = None
            return
        dI0_start, _ = reduced_rhs(rc0.I0, rc0.psi0, rc0.b, p)
        self._I0, self._dI0 = quadratic_motion(self.coeffs, t0, rc0.I0, float(dI0_start))
        logger.debug("closed form regime %s, p=%g q=%g r=%g", self.regime,
                     self.coeffs.p, self.coeffs.q, self.coeffs.r)

    def I0(self, t):
        return self._I0(t)

    def dI0(self, t):
        return self._dI0(t)

    def phase(self, t) -> np.ndarray:
        """exp(i psi0(t))"""
        t = np.asarray(t, dtype=float)
        if self.regime == "free":
            return np.exp(1j * (self.psi_start + self.params.detuning * (t - self.t0)))
        I0 = self.I0(t)
        root = np.sqrt(g0(I0, self.b))
        if np.any(root <= SINGULAR_TOL):
            raise SingularPoint("trajectory reaches a zero of G0")
        K = self.energy - frozen_energy(self.b, self.params)
        g = self.params.g
        return (K - g * quadratic_part(I0, self.b) + 1j * self.dI0(t)) / (2 * g * root)

    def psi0(self, times) -> np.ndarray:
        """Continuous psi0 on an increasing grid starting at t0"""
        angles = np.unwrap(np.angle(self.phase(times)))
        shift = self.psi_start - angles[0]
        return angles + TWO_PI * round(shift / TWO_PI)

    def sample(self, times) -> ReducedTrajectory:
        times = np.asarray(times, dtype=float)
        return ReducedTrajectory(times, self.I0(times), self.psi0(times), self.b,
                                 self.energy, f"closed:{self.regime}")


def closed_form(rc0: ReducedCoords, p: FourWaveParams, t0: float = 0.0) -> ClosedFormTrajectory:
    traj = ClosedFormTrajectory(rc0, p, t0)
    if traj.regime == "fallback":
        raise UnsupportedRegime(f"no closed form for p={traj.coeffs.p}, Delta={traj.coeffs.delta}")
    return traj


def rk4_reduced(rc0: ReducedCoords, p: FourWaveParams, times) -> ReducedTrajectory:
    """Fixed-step RK4 of the reduced equations on the given grid"""
    _require_interior(rc0.I0, rc0.b)
    times = np.asarray(times, dtype=float)
    y = np.array([rc0.I0, rc0.psi0])
    out = np.zeros((len(times), 2))
    out[0] = y

    def f(state):
        return np.array(reduced_rhs(state[0], state[1], rc0.b, p))

    for i in range(1, len(times)):
        h = times[i] - times[i - 1]
        k1 = f(y)
        k2 = f(y + h / 2 * k1)
        k3 = f(y + h / 2 * k2)
        k4 = f(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i] = y
    return ReducedTrajectory(times, out[:, 0], out[:, 1], rc0.b,
                             reduced_hamiltonian(rc0, p), "rk4")


def trajectory(rc0: ReducedCoords, p: FourWaveParams, times) -> ReducedTrajectory:
    """Closed form when one exists, RK4 on the reduced equations otherwise"""
    times = np.asarray(times, dtype=float)
    if p.g == 0 or p.is_resonant():
        traj = ClosedFormTrajectory(rc0, p, float(times[0]))
        if traj.regime != "fallback":
            return traj.sample(times)
        logger.info("regime without closed form, integrating the reduced equations")
    return rk4_reduced(rc0, p, times)


def outer_phase_rates(I0, psi0, b, p: FourWaveParams) -> np.ndarray:
    """dH/dI_k for k = 1, 2, 3 along (I0, psi0)"""
    b1, b2, b3 = b
    g = p.g
    cosine = np.cos(psi0) / np.sqrt(g0(I0, b))
    return np.array([
        p.omega1 + g * (I0 - b3) + g * cosine * I0 * (I0 - b3) * (b2 + b3 - I0),
        p.omega3 + g * I0 + g * cosine * I0 * (b1 - I0) * (I0 - b3),
        p.omega3 - p.omega2 + g * (2 * I0 - b1) + g * cosine * I0 * (b1 - I0) * (2 * I0 - b2 - 2 * b3),
    ])


def printed_outer_phase_rates(I0, psi0, b, p: FourWaveParams) -> np.ndarray:
    """Same rates with the numerators written as expanded cubics"""
    b1, b2, b3 = b
    g = p.g
    cosine = np.cos(psi0) / np.sqrt(g0(I0, b))
    return np.array([
        g * (I0 - b3) + p.omega1
        + g * (-I0 ** 3 + (2 * b3 + b2) * I0 ** 2 - (b2 + b3) * b3 * I0) * cosine,
        g * I0 + p.omega3
        + g * (-I0 ** 3 + (b1 + b3) * I0 ** 2 - b1 * b3 * I0) * cosine,
        2 * g * I0 - g * b1 + p.omega3 - p.omega2
        + g * (-2 * I0 ** 3 + (2 * b1 + b2 + 2 * b3) * I0 ** 2 - (b1 * b2 + 2 * b1 * b3) * I0) * cosine,
    ])


def integrate_outer_phases(traj: ReducedTrajectory, p: FourWaveParams,
                           start=(0.0, 0.0, 0.0)) -> np.ndarray:
    """psi1, psi2, psi3 on the trajectory grid by cumulative Simpson quadrature"""
    if p.g != 0 and np.any(g0(traj.I0, traj.b) <= SINGULAR_TOL):
        raise SingularPoint("G0 vanishes on the grid")
    if p.g == 0:
        rates = np.tile(np.array([[p.omega1], [p.omega3], [p.omega3 - p.omega2]]),
                        (1, len(traj.times)))
    else:
        rates = outer_phase_rates(traj.I0, traj.psi0, traj.b, p)
    if len(traj.times) < 3:
        increments = np.zeros_like(rates)
        if len(traj.times) == 2:
            increments[:, 1] = 0.5 * (rates[:, 0] + rates[:, 1]) * (traj.times[1] - traj.times[0])
    else:
        increments = cumulative_simpson(rates, x=traj.times, axis=-1, initial=0)
    return increments + np.asarray(start, dtype=float)[:, None]


def reconstruct_states(traj: ReducedTrajectory, phases: np.ndarray) -> np.ndarray:
    """Mode amplitudes along the trajectory from (I0, psi0) and the outer phases"""
    b1, b2, b3 = traj.b
    states = np.zeros((len(traj.times), 4), dtype=complex)
    for i in range(len(traj.times)):
        aa = ActionAngle((traj.I0[i], b1, b2, b3),
                         (traj.psi0[i], phases[0, i], phases[1, i], phases[2, i]))
        states[i] = from_action_angle(aa).array
    return states


def rk4_full(state, p: FourWaveParams, t1: float, dt: float, t0: float = 0.0) -> FullTrajectory:
    """Classic RK4 of the four-mode equations with conservation report"""
    if dt <= 0:
        raise ConfigError(f"dt must be positive, got {dt}")
    steps = max(1, int(round((t1 - t0) / dt)))
    h = (t1 - t0) / steps
    # Butcher tableau of the classic scheme
    a = np.array([[0, 0, 0, 0], [0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 1.0, 0]])
    weights = np.array([1, 2, 2, 1]) / 6.0

    y = _as_array(state).copy()
    states = np.zeros((steps + 1, 4), dtype=complex)
    states[0] = y
    k = np.zeros((4, 4), dtype=complex)
    for n in range(steps):
        for i in range(4):
            k[i] = equations_of_motion(y + h * (a[i, :i] @ k[:i]), p)
        y = y + h * (weights @ k)
        states[n + 1] = y

    times = t0 + h * np.arange(steps + 1)
    moduli = np.abs(states) ** 2
    invariants = {
        "H": np.array([hamiltonian(s, p) for s in states]),
        "I1": moduli[:, 0] + moduli[:, 1],
        "I2": moduli[:, 2] + moduli[:, 3],
        "I3": moduli[:, 0] - moduli[:, 2],
    }
    drift = {name: float(np.max(np.abs(v - v[0]))) for name, v in invariants.items()}
    logger.debug("rk4 drift %s", drift)
    return FullTrajectory(times, states, drift)
