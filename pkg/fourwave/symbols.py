"""Normal-ordered observables and their polynomial covariant symbols."""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from itertools import product

from scipy import sparse

from .sector import FourWaveParams

logger = logging.getLogger(__name__)

ZERO = (0, 0, 0, 0)
COEFF_TOL = 1e-15


def _unit(mode: int) -> tuple[int, int, int, int]:
    index = [0, 0, 0, 0]
    index[mode] = 1
    return tuple(index)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class NormalOrderedObservable:
    """sum f[m, n] a*^m a^n, with covariant symbol sum f[m, n] zbar^m z^n"""

    def __init__(self, terms=None):
        self.terms = {}
        for (m, n), coeff in (terms or {}).items():
            if coeff != 0:
                self.terms[(tuple(m), tuple(n))] = complex(coeff)

    @classmethod
    def monomial(cls, m, n, coeff: complex = 1.0) -> "NormalOrderedObservable":
        return cls({(tuple(m), tuple(n)): coeff})

    @classmethod
    def mode(cls, k: int) -> "NormalOrderedObservable":
        """z_k, i.e. the annihilation operator a_k"""
        return cls.monomial(ZERO, _unit(k))

    @classmethod
    def mode_conj(cls, k: int) -> "NormalOrderedObservable":
        return cls.monomial(_unit(k), ZERO)

    def __repr__(self):
        return f"NormalOrderedObservable({self.terms!r})"

    def __add__(self, other):
        out = defaultdict(complex, self.terms)
        for key, coeff in other.terms.items():
            out[key] += coeff
        return NormalOrderedObservable(out)

    def __neg__(self):
        return self.scaled(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, factor: complex) -> "NormalOrderedObservable":
        return NormalOrderedObservable({k: factor * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NormalOrderedObservable):
            return self.pointwise(other)
        return self.scaled(other)

    __rmul__ = scaled

    def pointwise(self, other: "NormalOrderedObservable") -> "NormalOrderedObservable":
        """Product of symbols (not of operators)"""
        out = defaultdict(complex)
        for (m1, n1), c1 in self.terms.items():
            for (m2, n2), c2 in other.terms.items():
                out[(_add(m1, m2), _add(n1, n2))] += c1 * c2
        return NormalOrderedObservable(out)

    def conjugate(self) -> "NormalOrderedObservable":
        return NormalOrderedObservable({(n, m): v.conjugate() for (m, n), v in self.terms.items()})

    def derivative(self, j, conjugate: bool = False) -> "NormalOrderedObservable":
        """d^j/dz^j, or d^j/dzbar^j, for a multi-index j"""
        out = {}
        for (m, n), coeff in self.terms.items():
            powers = m if conjugate else n
            if any(p < k for p, k in zip(powers, j)):
                continue
            factor = math.prod(math.perm(p, k) for p, k in zip(powers, j))
            lowered = tuple(p - k for p, k in zip(powers, j))
            key = (lowered, n) if conjugate else (m, lowered)
            out[key] = out.get(key, 0) + coeff * factor
        return NormalOrderedObservable(out)

    def max_power(self) -> int:
        return max((max(m + n) for m, n in self.terms), default=0)

    def is_zero(self, tol: float = COEFF_TOL) -> bool:
        return all(abs(v) <= tol for v in self.terms.values())

    def evaluate(self, z) -> complex:
        z = [complex(v) for v in getattr(z, "array", z)]
        zbar = [v.conjugate() for v in z]
        total = 0j
        for (m, n), coeff in self.terms.items():
            total += (coeff * math.prod(zbar[k] ** m[k] for k in range(4) if m[k])
                      * math.prod(z[k] ** n[k] for k in range(4) if n[k]))
        return total

    def to_matrix(self, space, hbar: float = 1.0) -> sparse.csr_matrix:
        matrix = sparse.csr_matrix((space.dim, space.dim), dtype=complex)
        for (m, n), coeff in self.terms.items():
            matrix = matrix + coeff * space.monomial(m, n, hbar)
        return matrix


def covariant_symbol(F: NormalOrderedObservable, z) -> complex:
    return F.evaluate(z)


def _multi_indices(order: int):
    return product(range(order + 1), repeat=4)


def _order_for(f, g, order):
    return order if order is not None else max(f.max_power(), g.max_power())


def star_product(f: NormalOrderedObservable, g: NormalOrderedObservable, hbar: float,
                 order: int | None = None) -> NormalOrderedObservable:
    """sum_j hbar^|j| / j! d_z^j f * d_zbar^j g, each j_k <= order"""
    out = NormalOrderedObservable()
    for j in _multi_indices(_order_for(f, g, order)):
        weight = hbar ** sum(j) / math.prod(math.factorial(k) for k in j)
        out = out + (f.derivative(j) * g.derivative(j, conjugate=True)).scaled(weight)
    return out


def star_bracket(f: NormalOrderedObservable, g: NormalOrderedObservable,
                 hbar: float) -> NormalOrderedObservable:
    """(-i/hbar)(f*g - g*f) with the 1/hbar cancelled, so hbar = 0 is allowed"""
    out = NormalOrderedObservable()
    for j in _multi_indices(_order_for(f, g, None)):
        size = sum(j)
        if size == 0:
            continue
        weight = hbar ** (size - 1) / math.prod(math.factorial(k) for k in j)
        term = (f.derivative(j) * g.derivative(j, conjugate=True)
                - g.derivative(j) * f.derivative(j, conjugate=True))
        out = out + term.scaled(-1j * weight)
    return out


def poisson_bracket(f: NormalOrderedObservable, g: NormalOrderedObservable) -> NormalOrderedObservable:
    """{f, g} = i sum_k (df/dzbar_k dg/dz_k - df/dz_k dg/dzbar_k)"""
    out = NormalOrderedObservable()
    for k in range(4):
        e = _unit(k)
        out = out + (f.derivative(e, conjugate=True) * g.derivative(e)
                     - f.derivative(e) * g.derivative(e, conjugate=True)).scaled(1j)
    return out


def number_symbol(k: int) -> NormalOrderedObservable:
    return NormalOrderedObservable.monomial(_unit(k), _unit(k))


def hamiltonian_observable(p: FourWaveParams) -> NormalOrderedObservable:
    """The four-wave Hamiltonian rewritten in normal order"""
    gh = p.g * p.hbar
    return NormalOrderedObservable({
        ((1, 0, 0, 0), (1, 0, 0, 0)): p.omega0 + gh,
        ((0, 1, 0, 0), (0, 1, 0, 0)): p.omega1 + gh,
        ((0, 0, 1, 0), (0, 0, 1, 0)): p.omega2,
        ((0, 0, 0, 1), (0, 0, 0, 1)): p.omega3,
        ((1, 0, 0, 1), (1, 0, 0, 1)): p.g,
        ((0, 1, 1, 0), (0, 1, 1, 0)): p.g,
        ((0, 1, 0, 1), (1, 0, 1, 0)): p.g,
        ((1, 0, 1, 0), (0, 1, 0, 1)): p.g,
    })


def kummer_generators() -> dict[str, NormalOrderedObservable]:
    """I0..I3 and x + iy = z0 zbar1 z2 zbar3 as polynomial symbols"""
    n0, n1, n2, n3 = (number_symbol(k) for k in range(4))
    z = NormalOrderedObservable.monomial((0, 1, 0, 1), (1, 0, 1, 0))
    zbar = z.conjugate()
    return {
        "I0": n0,
        "I1": n0 + n1,
        "I2": n2 + n3,
        "I3": n0 - n2,
        "x": (z + zbar).scaled(0.5),
        "y": (z - zbar).scaled(-0.5j),
    }
