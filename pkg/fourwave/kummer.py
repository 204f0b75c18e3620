"""Kummer shape: the reduced phase space as a surface of revolution in (x, y, I0)."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import (ReducedCoords, ReducedTrajectory, frozen_energy, g0, g0_prime, interval,
                        quadratic_part)
from .errors import OutOfInterval
from .sector import FourWaveParams

logger = logging.getLogger(__name__)

MESH_I0 = 200
MESH_PSI = 100
FD_STEP = 1e-5


@dataclass(frozen=True)
class ShapePoint:
    x: float
    y: float
    I0: float
    b: tuple[float, float, float]

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.x, self.y, self.I0])


def phi_map(rc: ReducedCoords) -> ShapePoint:
    lo, hi = interval(rc.b)
    if not lo < rc.I0 < hi:
        raise OutOfInterval(f"I0={rc.I0} outside ]{lo}, {hi}[")
    radius = np.sqrt(g0(rc.I0, rc.b))
    return ShapePoint(float(radius * np.cos(rc.psi0)), float(radius * np.sin(rc.psi0)), rc.I0, rc.b)


def casimir(pt: ShapePoint) -> float:
    return 0.5 * (g0(pt.I0, pt.b) - pt.x ** 2 - pt.y ** 2)


def casimir_gradient(pt: ShapePoint) -> np.ndarray:
    return np.array([-pt.x, -pt.y, 0.5 * g0_prime(pt.I0, pt.b)])


def _gradient(f: Callable, point: np.ndarray, h: float | None) -> np.ndarray:
    grad = np.zeros(3)
    for i in range(3):
        step = h if h is not None else FD_STEP * max(1.0, abs(point[i]))
        shift = np.zeros(3)
        shift[i] = step
        grad[i] = (f(*(point + shift)) - f(*(point - shift))) / (2 * step)
    return grad


def nambu_bracket(f: Callable, g: Callable, pt: ShapePoint, h: float | None = None) -> float:
    """det[grad C, grad f, grad g] at pt; f and g take (x, y, I0)"""
    point = pt.coords
    rows = np.vstack([casimir_gradient(pt), _gradient(f, point, h), _gradient(g, point, h)])
    return float(np.linalg.det(rows))


def shape_energy(x, I0, b, p: FourWaveParams):
    """Reduced Hamiltonian written on the shape: linear in x"""
    return p.detuning * I0 + frozen_energy(b, p) + p.g * (quadratic_part(I0, b) + 2 * x)


def trajectory_on_shape(traj: ReducedTrajectory, p: FourWaveParams) -> dict:
    """Casimir and energy residuals of a sampled trajectory, plus its polyline"""
    radius = np.sqrt(g0(traj.I0, traj.b))
    x = radius * np.cos(traj.psi0)
    y = radius * np.sin(traj.psi0)
    casimirs = 0.5 * (g0(traj.I0, traj.b) - x ** 2 - y ** 2)
    energies = shape_energy(x, traj.I0, traj.b, p)
    polyline = np.column_stack([traj.times, x, y, traj.I0])
    report = {
        "max_casimir": float(np.max(np.abs(casimirs))),
        "max_energy_error": float(np.max(np.abs(energies - traj.energy))),
        "polyline": polyline,
    }
    logger.debug("trajectory on shape: |C| <= %.2e, |H-E| <= %.2e",
                 report["max_casimir"], report["max_energy_error"])
    return report


def level_set(b, lam: float = 0.0, n_I0: int = MESH_I0, n_psi: int = MESH_PSI) -> np.ndarray:
    """Rows (I0, psi0, x, y) on the surface C = lam; interval endpoints are excluded"""
    lo, hi = interval(b)
    I0 = np.linspace(lo, hi, n_I0 + 2)[1:-1]
    psi = np.linspace(0.0, 2 * np.pi, n_psi, endpoint=False)
    rows = []
    for value in I0:
        radius_sq = g0(value, b) - 2 * lam
        if radius_sq < 0:
            continue
        radius = np.sqrt(radius_sq)
        for angle in psi:
            rows.append((value, angle, radius * np.cos(angle), radius * np.sin(angle)))
    return np.array(rows).reshape(-1, 4)


def shape_mesh(b, n_I0: int = MESH_I0, n_psi: int = MESH_PSI) -> np.ndarray:
    return level_set(b, 0.0, n_I0, n_psi)
