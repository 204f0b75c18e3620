"""Sector bookkeeping: conserved-charge labels, shapes, constants and bases."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import ConfigError, InvalidLabel

logger = logging.getLogger(__name__)

SUBCASES = ("i", "ii", "iii", "iv")


@dataclass(frozen=True)
class SectorLabel:
    """Eigenvalues (c1, c2, c3) of the conserved operators, in units of hbar"""
    c1: int
    c2: int
    c3: int

    @classmethod
    def from_tuple(cls, values) -> "SectorLabel":
        c1, c2, c3 = (int(v) for v in values)
        return cls(c1, c2, c3)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.c1, self.c2, self.c3)


@dataclass(frozen=True)
class SectorShape:
    N: int
    gamma: int
    delta: int
    subcase: str
    base_offset: int

    @property
    def dim(self) -> int:
        return self.N + 1


@dataclass(frozen=True)
class FourWaveParams:
    """Frequencies omega0..omega3, coupling g and the action unit hbar"""
    omega0: float = 1.0
    omega1: float = 1.0
    omega2: float = 1.0
    omega3: float = 1.0
    g: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ConfigError(f"hbar must be positive, got {self.hbar}")

    @property
    def omegas(self) -> tuple[float, float, float, float]:
        return (self.omega0, self.omega1, self.omega2, self.omega3)

    @property
    def detuning(self) -> float:
        return self.omega0 - self.omega1 + self.omega2 - self.omega3

    def is_resonant(self, rtol: float = 1e-12) -> bool:
        scale = max(1.0, sum(abs(w) for w in self.omegas))
        return abs(self.detuning) <= rtol * scale


def _as_label(c) -> SectorLabel:
    if isinstance(c, SectorLabel):
        return c
    return SectorLabel.from_tuple(c)


def validate_label(c) -> bool:
    """True iff the label lies in the cone c1, c2, c1-c3, c2+c3 >= 0"""
    c = _as_label(c)
    return c.c1 >= 0 and c.c2 >= 0 and c.c1 - c.c3 >= 0 and c.c2 + c.c3 >= 0


def _require(c) -> SectorLabel:
    c = _as_label(c)
    if not validate_label(c):
        raise InvalidLabel(f"label {c.as_tuple()} is outside the admissible cone")
    return c


def applicable_subcases(c) -> list[str]:
    """All subcases whose defining inequalities hold for c"""
    c = _require(c)
    found = []
    if c.c3 <= 0 and c.c1 <= c.c2 + c.c3:
        found.append("i")
    if c.c3 <= 0 and c.c2 + c.c3 <= c.c1:
        found.append("ii")
    if c.c3 >= 0 and c.c1 <= c.c2 + c.c3:
        found.append("iii")
    if c.c3 >= 0 and c.c2 + c.c3 <= c.c1:
        found.append("iv")
    return found


def shape_for_subcase(c, subcase: str) -> SectorShape:
    c = _require(c)
    if subcase not in applicable_subcases(c):
        raise InvalidLabel(f"subcase {subcase} does not apply to {c.as_tuple()}")
    c1, c2, c3 = c.as_tuple()
    if subcase == "i":
        return SectorShape(c1, -c3, c2 + c3 - c1, "i", 0)
    if subcase == "ii":
        return SectorShape(c2 + c3, -c3, c1 - c2 - c3, "ii", 0)
    if subcase == "iii":
        return SectorShape(c1 - c3, c3, c2 + c3 - c1, "iii", c3)
    return SectorShape(c2, c3, c1 - c2 - c3, "iv", c3)


def shape_of(c) -> SectorShape:
    """Shape of the sector; overlapping subcases resolve to the first in order i..iv"""
    subcase = applicable_subcases(c)[0]
    return shape_for_subcase(c, subcase)


def label_for_shape(N: int, gamma: int, delta: int) -> SectorLabel:
    """A subcase (i) label with the given N, gamma and delta"""
    if min(N, gamma, delta) < 0:
        raise InvalidLabel(f"N, gamma, delta must be nonnegative, got {(N, gamma, delta)}")
    return SectorLabel(N, N + gamma + delta, -gamma)


def lambda0_for_subcase(c, p: FourWaveParams, subcase: str) -> float:
    shape = shape_for_subcase(c, subcase)
    c = _as_label(c)
    gh = p.g * p.hbar
    base = p.omega1 * c.c1 + p.omega3 * c.c2 + (p.omega3 - p.omega2) * c.c3
    gamma, delta = shape.gamma, shape.delta
    if subcase == "i":
        return base
    if subcase == "ii":
        return base + gh * delta * (gamma + 1)
    if subcase == "iii":
        return base + gh * gamma * (delta + 1)
    return base + gh * (gamma + delta)


def lambda0(c, p: FourWaveParams) -> float:
    """Constant shift of the reduced Hamiltonian on the sector (1/time)"""
    return lambda0_for_subcase(c, p, shape_of(c).subcase)


def basis_states(c) -> list[tuple[int, int, int, int]]:
    """Fock tuples spanning the sector, ordered by the occupation of mode 0"""
    c = _require(c)
    c1, c2, c3 = c.as_tuple()
    return [(n, c1 - n, n - c3, c2 + c3 - n) for n in range(max(0, c3), min(c1, c2 + c3) + 1)]


def sector_of_fock(n0: int, n1: int, n2: int, n3: int) -> tuple[SectorLabel, int]:
    label = SectorLabel(n0 + n1, n2 + n3, n0 - n2)
    return label, n0 - shape_of(label).base_offset


def sectors_up_to(T: int) -> list[SectorLabel]:
    """Every sector whose states carry at most T quanta in total"""
    labels = []
    for total in range(T + 1):
        for c1 in range(total + 1):
            c2 = total - c1
            for c3 in range(-c2, c1 + 1):
                labels.append(SectorLabel(c1, c2, c3))
    return labels


def sector_report(c, p: FourWaveParams) -> dict:
    c = _require(c)
    shape = shape_of(c)
    logger.debug("sector %s -> subcase %s, N=%d", c.as_tuple(), shape.subcase, shape.N)
    return {
        "c1": c.c1,
        "c2": c.c2,
        "c3": c.c3,
        "subcase": shape.subcase,
        "N": shape.N,
        "gamma": shape.gamma,
        "delta": shape.delta,
        "lambda0": lambda0(c, p),
    }
