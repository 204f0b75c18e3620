"""Truncated four-mode Fock space and normal-ordered ladder monomials."""
from __future__ import annotations

import logging
import math
from itertools import product

from scipy import sparse

from .errors import TruncationTooLarge

logger = logging.getLogger(__name__)

MAX_TRUNCATION = 12
DEFAULT_TRUNCATION = 8


class TruncatedFockSpace:
    """All occupation tuples (n0, n1, n2, n3) with n0+n1+n2+n3 <= T"""

    def __init__(self, max_total_quanta: int = DEFAULT_TRUNCATION):
        if max_total_quanta > MAX_TRUNCATION:
            raise TruncationTooLarge(f"T={max_total_quanta} above the supported maximum {MAX_TRUNCATION}")
        if max_total_quanta < 0:
            raise TruncationTooLarge(f"T must be nonnegative, got {max_total_quanta}")
        self.max_total_quanta = max_total_quanta
        self.basis = [
            state for state in product(range(max_total_quanta + 1), repeat=4)
            if sum(state) <= max_total_quanta
        ]
        self.basis.sort(key=lambda state: (sum(state), state))
        self.index = {state: i for i, state in enumerate(self.basis)}
        logger.debug("Fock space T=%d, dimension %d", max_total_quanta, self.dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def monomial(self, creators, annihilators, hbar: float = 1.0) -> sparse.csr_matrix:
        """Matrix of a*^m a^n; images leaving the truncation are dropped"""
        rows, cols, vals = [], [], []
        for col, state in enumerate(self.basis):
            amplitude = 1.0
            target = []
            for occupation, m, n in zip(state, creators, annihilators):
                if occupation < n:
                    amplitude = 0.0
                    break
                lowered = occupation - n
                raised = lowered + m
                # sqrt(hbar^(m+n) occupation!/lowered! * raised!/lowered!)
                amplitude *= math.sqrt(
                    hbar ** (m + n)
                    * math.perm(occupation, n)
                    * math.perm(raised, m)
                )
                target.append(raised)
            if amplitude == 0.0:
                continue
            row = self.index.get(tuple(target))
            if row is None:
                continue
            rows.append(row)
            cols.append(col)
            vals.append(amplitude)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(self.dim, self.dim))

    def number(self, mode: int, hbar: float = 1.0) -> sparse.csr_matrix:
        """N_k = a_k* a_k"""
        unit = [0, 0, 0, 0]
        unit[mode] = 1
        return self.monomial(unit, unit, hbar)

    def annihilation(self, mode: int, hbar: float = 1.0) -> sparse.csr_matrix:
        unit = [0, 0, 0, 0]
        unit[mode] = 1
        return self.monomial([0, 0, 0, 0], unit, hbar)

    def indices_of(self, states) -> list[int]:
        return [self.index[tuple(s)] for s in states]
