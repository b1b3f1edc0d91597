import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import sparse

from app.linalg import (
    RowSpace,
    inverse_mod_p,
    is_invertible_mod_p,
    is_zero_mod,
    kernel_of,
    nullspace_mod_p,
    rank_mod_p,
    row_reduce,
    row_space_of,
)

matrices = st.integers(min_value=1, max_value=6).flatmap(
    lambda m: st.integers(min_value=1, max_value=6).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(0, 4), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


@pytest.mark.main
def test_row_reduce():
    R, pivots = row_reduce([[2, 4], [1, 2]], 5)
    assert pivots == [0]
    assert R.tolist() == [[1, 2]]


@pytest.mark.main
def test_rank_depends_on_p():
    A = [[1, 1], [1, 3]]
    assert rank_mod_p(A, 2) == 1
    assert rank_mod_p(A, 3) == 2
    assert rank_mod_p(np.zeros((0, 3)), 3) == 0


@pytest.mark.main
def test_inverse_mod_p():
    A = np.array([[1, 2], [3, 4]])
    B = inverse_mod_p(A, 5)
    assert (A @ B % 5).tolist() == [[1, 0], [0, 1]]
    assert is_invertible_mod_p(A, 5)
    assert not is_invertible_mod_p(A, 2)
    with pytest.raises(ValueError):
        inverse_mod_p([[1, 1], [1, 1]], 3)


@pytest.mark.main
@settings(max_examples=50, deadline=None)
@given(matrices)
def test_nullspace_is_annihilated(rows):
    A = np.array(rows, dtype=np.int64)
    K = nullspace_mod_p(A, 5)
    assert not np.any(A @ K % 5)
    assert K.shape[1] + rank_mod_p(A, 5) == A.shape[1]


@pytest.mark.main
@settings(max_examples=50, deadline=None)
@given(matrices)
def test_blocked_elimination_agrees_with_dense(rows):
    A = np.array(rows, dtype=np.int64)
    space = row_space_of(sparse.csr_matrix(A), 5, block_rows=2)
    assert space.rank == rank_mod_p(A, 5)
    K = kernel_of(sparse.csr_matrix(A), 5, block_rows=1)
    assert K.shape[1] == A.shape[1] - space.rank
    assert is_zero_mod(A @ K, 5)


@pytest.mark.main
def test_row_space_membership():
    space = RowSpace(3, 3)
    assert space.extend([[1, 2, 0], [2, 1, 0]]) == 1
    assert space.contains([2, 1, 0])
    assert not space.contains([0, 0, 1])
    assert space.extend([[0, 0, 2]]) == 1
    assert space.rank == 2
    assert space.kernel().shape == (3, 1)
