"""Dual Hahn polynomials on the finite lattice lambda_k = k(k + gamma + delta + 1).

Values, recurrences and norms are carried in exact integer/rational arithmetic and
only converted to floating point at the end, through logarithms, so the binomial
weights never overflow a double.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import IndexOutOfRange, NumericalInstability

logger = logging.getLogger(__name__)

MAX_DEGREE = 120
ORTHOGONALITY_TOL = 1e-6


@dataclass(frozen=True)
class DualHahnParams:
    gamma: int
    delta: int
    N: int

    def __post_init__(self):
        if self.gamma < 0 or self.delta < 0 or self.N < 0:
            raise IndexOutOfRange(f"gamma, delta, N must be nonnegative, got {self}")

    @classmethod
    def from_shape(cls, shape) -> "DualHahnParams":
        return cls(shape.gamma, shape.delta, shape.N)


@dataclass(frozen=True)
class SpectralTable:
    """Eigenvalues, norms and the orthogonal transition matrix of one sector"""
    params: DualHahnParams
    lambdas: np.ndarray
    norms: np.ndarray
    R: np.ndarray
    signed: bool = True

    def rows(self):
        for k, (lam, nrm) in enumerate(zip(self.lambdas, self.norms)):
            yield {"k": k, "lambda": int(lam), "norm": float(nrm)}


def _check_index(index: int, p: DualHahnParams, name: str):
    if not 0 <= index <= p.N:
        raise IndexOutOfRange(f"{name}={index} outside 0..{p.N}")


def _rising(a: int, j: int) -> int:
    """Pochhammer symbol (a)_j for integer a"""
    out = 1
    for i in range(j):
        out *= a + i
    return out


def _log_abs(x) -> float:
    if isinstance(x, Fraction):
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    return math.log(abs(x))


def _signed_exp(sign: int, log_mag: float) -> float:
    return sign * math.exp(log_mag) if sign else 0.0


def eigenvalue(k: int, p: DualHahnParams) -> int:
    return k * (k + p.gamma + p.delta + 1)


def eigenvalues(p: DualHahnParams) -> np.ndarray:
    return np.array([eigenvalue(k, p) for k in range(p.N + 1)], dtype=float)


def weight(n: int, p: DualHahnParams) -> int:
    """binom(gamma+n, n) * binom(delta+N-n, N-n)"""
    return math.comb(p.gamma + n, n) * math.comb(p.delta + p.N - n, p.N - n)


def recurrence_coefficients(n: int, p: DualHahnParams) -> tuple[int, int, int]:
    """(A_n, a_n, C_n) with lambda P_n = A_n P_{n+1} + a_n P_n + C_n P_{n-1}"""
    g, d, N = p.gamma, p.delta, p.N
    upper = (n + g + 1) * (n - N)
    lower = n * (n - d - N - 1)
    diagonal = n * (N - n + d + 1) + (N - n) * (g + n + 1)
    return upper, diagonal, lower


def hypergeometric_exact(n: int, k: int, p: DualHahnParams) -> Fraction:
    """Terminating 3F2(-n, -k, k+gamma+delta+1; gamma+1, -N; 1)"""
    total = Fraction(0)
    for j in range(min(n, k) + 1):
        num = _rising(-n, j) * _rising(-k, j) * _rising(k + p.gamma + p.delta + 1, j)
        den = _rising(p.gamma + 1, j) * _rising(-p.N, j) * math.factorial(j)
        total += Fraction(num, den)
    return total


def polynomial_value(n: int, k: int, p: DualHahnParams) -> float:
    """R_n(lambda_k) from the hypergeometric sum times sqrt of the weight"""
    _check_index(n, p, "n")
    _check_index(k, p, "k")
    value = hypergeometric_exact(n, k, p)
    if value == 0:
        return 0.0
    sign = 1 if value > 0 else -1
    return _signed_exp(sign, 0.5 * math.log(weight(n, p)) + _log_abs(value))


def _scaled_column(k: int, p: DualHahnParams) -> list[int]:
    """Integers Q_n = P_n(lambda_k) * prod_{j<n} A_j for n = 0..N"""
    lam = eigenvalue(k, p)
    column = [1]
    if p.N == 0:
        return column
    previous, current = 0, 1
    prev_upper = 1
    for n in range(p.N):
        upper, diagonal, lower = recurrence_coefficients(n, p)
        nxt = (lam - diagonal) * current - lower * prev_upper * previous
        column.append(nxt)
        previous, current = current, nxt
        prev_upper = upper
    return column


def _log_abs_product_upper(n: int, p: DualHahnParams) -> float:
    """log |prod_{j<n} A_j| = log((gamma+1)_n N!/(N-n)!)"""
    return math.log(_rising(p.gamma + 1, n)) + math.log(math.factorial(p.N) // math.factorial(p.N - n))


def polynomial_value_recurrence(n: int, k: int, p: DualHahnParams) -> float:
    """R_n(lambda_k) by the three-term recurrence seeded at n = 0"""
    _check_index(n, p, "n")
    _check_index(k, p, "k")
    q = _scaled_column(k, p)[n]
    if q == 0:
        return 0.0
    # prod A_j carries the sign (-1)^n
    sign = (1 if q > 0 else -1) * (-1) ** n
    log_mag = 0.5 * math.log(weight(n, p)) + _log_abs(q) - _log_abs_product_upper(n, p)
    return _signed_exp(sign, log_mag)


def norm_exact(k: int, p: DualHahnParams) -> Fraction:
    _check_index(k, p, "k")
    g, d, N = p.gamma, p.delta, p.N
    num = (math.factorial(k) * _rising(d + 1, k) * _rising(k + g + d + 1, N + 1)
           * math.factorial(N - k))
    den = math.factorial(N) ** 2 * _rising(g + 1, k) * (2 * k + g + d + 1)
    return Fraction(num, den)


def norm(k: int, p: DualHahnParams) -> float:
    """Squared length sum_n R_n(lambda_k)^2, strictly positive"""
    return math.exp(_log_abs(norm_exact(k, p)))


def edge_values(k: int, p: DualHahnParams) -> tuple[float, float]:
    """R_0(lambda_k) and R_N(lambda_k) in closed form"""
    _check_index(k, p, "k")
    first = math.exp(0.5 * math.log(math.comb(p.delta + p.N, p.N)))
    # Chu-Vandermonde: P_N(lambda_k) = (-1)^k (delta+1)_k / (gamma+1)_k
    log_last = (0.5 * math.log(math.comb(p.gamma + p.N, p.N))
                + math.log(_rising(p.delta + 1, k)) - math.log(_rising(p.gamma + 1, k)))
    return first, (-1) ** k * math.exp(log_last)


def transition_matrix(p: DualHahnParams) -> SpectralTable:
    """Orthogonal R with R[n][k] = (-1)^n R_n(lambda_k) / sqrt(norm_k)"""
    if p.N > MAX_DEGREE:
        raise NumericalInstability(f"N={p.N} above the supported maximum {MAX_DEGREE}")

    size = p.N + 1
    R = np.zeros((size, size))
    log_weight = [0.5 * math.log(weight(n, p)) for n in range(size)]
    log_upper = [_log_abs_product_upper(n, p) for n in range(size)]
    norms = np.zeros(size)
    edge_deviation = 0.0

    for k in range(size):
        exact = norm_exact(k, p)
        log_norm = _log_abs(exact)
        norms[k] = math.exp(log_norm)
        first, last = edge_values(k, p)
        R[0, k] = math.exp(math.log(first) - 0.5 * log_norm)
        for n, q in enumerate(_scaled_column(k, p)[1:], start=1):
            if q == 0:
                continue
            # the (-1)^n gauge cancels the sign of prod A_j
            sign = 1 if q > 0 else -1
            R[n, k] = _signed_exp(sign, log_weight[n] + _log_abs(q) - log_upper[n] - 0.5 * log_norm)
        # R_N(lambda_k) = (-1)^N R[N, k] sqrt(norm_k)
        end = (-1) ** p.N * R[p.N, k]
        if end == 0:
            continue
        if (end > 0) != (last > 0):
            raise NumericalInstability(f"sign of R_N(lambda_{k}) disagrees with the closed form for {p}")
        edge_deviation = max(edge_deviation,
                             abs(_log_abs(end) + 0.5 * log_norm - _log_abs(last)))

    if edge_deviation > ORTHOGONALITY_TOL:
        raise NumericalInstability(f"last row off the closed form by {edge_deviation:.3e} (log) for {p}")
    deviation = float(np.max(np.abs(np.sum(R * R, axis=0) - 1.0)))
    if deviation > ORTHOGONALITY_TOL:
        raise NumericalInstability(f"column norms off by {deviation:.3e} for {p}")
    logger.debug("transition matrix for %s, column deviation %.2e", p, deviation)

    return SpectralTable(params=p, lambdas=eigenvalues(p), norms=norms, R=R)
