import math

import numpy as np
import pytest

from fourwave.errors import TruncationTooLarge
from fourwave.fock import MAX_TRUNCATION, TruncatedFockSpace


def test_dimension_and_ordering():
    space = TruncatedFockSpace(3)
    assert space.dim == math.comb(3 + 4, 4)
    assert space.basis[0] == (0, 0, 0, 0)
    totals = [sum(state) for state in space.basis]
    assert totals == sorted(totals)


def test_indices_of():
    space = TruncatedFockSpace(2)
    states = [(0, 0, 0, 0), (1, 0, 0, 1), (0, 2, 0, 0)]
    assert [space.basis[i] for i in space.indices_of(states)] == states


def test_number_operator_is_diagonal():
    space = TruncatedFockSpace(4)
    N2 = space.number(2, hbar=0.5).toarray()
    np.testing.assert_allclose(np.diag(N2), [0.5 * state[2] for state in space.basis])
    assert np.count_nonzero(N2 - np.diag(np.diag(N2))) == 0


def test_annihilation_amplitude():
    space = TruncatedFockSpace(4)
    a1 = space.annihilation(1, hbar=2.0)
    column = a1[:, space.index[(0, 3, 1, 0)]].toarray().ravel()
    assert column[space.index[(0, 2, 1, 0)]] == pytest.approx(math.sqrt(2.0 * 3))
    assert np.count_nonzero(column) == 1


def test_monomial_drops_states_above_truncation():
    space = TruncatedFockSpace(2)
    raise_two = space.monomial((1, 1, 0, 0), (0, 0, 0, 0))
    top = space.index[(0, 0, 2, 0)]
    assert raise_two[:, top].nnz == 0


@pytest.mark.parametrize("T", [-1, MAX_TRUNCATION + 1])
def test_truncation_limits(T):
    with pytest.raises(TruncationTooLarge):
        TruncatedFockSpace(T)
