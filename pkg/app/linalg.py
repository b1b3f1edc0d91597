"""Exact linear algebra over F_p.

Dense work is done with numpy integer arrays reduced into 0..p-1. Large
eliminations run through ``RowSpace``, which multiplies blocks in float64:
every entry is below p and row lengths stay far below 2**53 / p**2, so the
products are exact integers.
"""
import numpy as np
from scipy import sparse

from app.config import config
from app.logging import get_logger

logger = get_logger()


def mod_p(A, p: int) -> np.ndarray:
    return np.mod(np.asarray(A, dtype=np.int64), p)


def row_reduce(A, p: int):
    """Reduced row echelon form of A over F_p.

    Returns the nonzero rows and the list of pivot columns.
    """
    A = mod_p(np.array(A, dtype=np.int64, ndmin=2), p)
    m = A.shape[0]
    pivots = []
    r = 0
    if m == 0:
        return A, pivots
    for col in np.flatnonzero(A.any(axis=0)):
        if r == m:
            break
        candidates = np.flatnonzero(A[r:, col])
        if candidates.size == 0:
            continue
        i = r + int(candidates[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, col]), -1, p) % p
        factors = A[:, col].copy()
        factors[r] = 0
        rows = np.flatnonzero(factors)
        if rows.size:
            A[rows] = (A[rows] - np.outer(factors[rows], A[r])) % p
        pivots.append(int(col))
        r += 1
    return A[:r], pivots


def rank_mod_p(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(row_reduce(A, p)[1])


def nullspace_mod_p(A, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} as the columns of the returned matrix."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = row_reduce(A, p)
    return _kernel_from_rref(R, pivots, n, p)


def _kernel_from_rref(R, pivots, n, p):
    free = np.setdiff1d(np.arange(n), np.asarray(pivots, dtype=np.int64))
    K = np.zeros((n, len(free)), dtype=np.int64)
    K[free, np.arange(len(free))] = 1
    if len(pivots):
        K[np.asarray(pivots)] = mod_p(-np.asarray(R)[:, free], p)
    return K


def inverse_mod_p(A, p: int) -> np.ndarray:
    A = mod_p(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("only square matrices are invertible")
    R, pivots = row_reduce(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix is singular mod p")
    return R[:n, n:]


def is_invertible_mod_p(A, p: int) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank_mod_p(A, p) == A.shape[0]


def sparse_mod(M, p: int):
    M = sparse.csr_matrix(M, dtype=np.int64)
    M.data %= p
    M.eliminate_zeros()
    return M


def is_zero_mod(M, p: int) -> bool:
    if sparse.issparse(M):
        return sparse_mod(M, p).nnz == 0
    return not np.any(mod_p(M, p))


class RowSpace:
    """The span of row vectors over F_p, kept in reduced row echelon form."""

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows = np.zeros((0, ncols), dtype=np.float64)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, X) -> np.ndarray:
        """Residues of the rows of X modulo the span (zero iff inside)."""
        X = np.mod(np.array(X, dtype=np.float64, ndmin=2), self.p)
        if self.rank:
            X = np.mod(X - X[:, self.pivots] @ self.rows, self.p)
        return X

    def extend(self, X) -> int:
        """Add the rows of X to the span; returns the number of new pivots."""
        X = self.reduce(X)
        Y, new = row_reduce(X.astype(np.int64), self.p)
        if not new:
            return 0
        Y = Y.astype(np.float64)
        if self.rank:
            self.rows = np.mod(self.rows - self.rows[:, new] @ Y, self.p)
        self.rows = np.vstack([self.rows, Y])
        self.pivots = np.concatenate([self.pivots, np.asarray(new)])
        return len(new)

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v))

    def basis(self) -> np.ndarray:
        return self.rows.astype(np.int64)

    def kernel(self) -> np.ndarray:
        """Basis (as columns) of the vectors orthogonal to every row."""
        return _kernel_from_rref(
            self.rows.astype(np.int64), self.pivots, self.ncols, self.p
        )


def row_space_of(M, p: int, block_rows: int = None) -> RowSpace:
    """Row space of a (possibly sparse) matrix, fed in row blocks."""
    if block_rows is None:
        block_rows = config.getint('block_rows', 512)
    M = sparse.csr_matrix(M)
    space = RowSpace(M.shape[1], p)
    for start in range(0, M.shape[0], block_rows):
        if space.rank == space.ncols:
            break
        space.extend(M[start:start + block_rows].toarray())
    return space


def kernel_of(M, p: int, block_rows: int = None) -> np.ndarray:
    """Basis of ker M as columns.

    Rows are absorbed block by block. Whenever a block brings no new pivot
    the candidate kernel is tested against all of M, and elimination stops
    as soon as M annihilates it.
    """
    if block_rows is None:
        block_rows = config.getint('block_rows', 512)
    M = sparse.csr_matrix(M)
    nrows, ncols = M.shape
    space = RowSpace(ncols, p)
    stale, next_check = 0, 1
    for start in range(0, nrows, block_rows):
        if space.rank == ncols:
            break
        if space.extend(M[start:start + block_rows].toarray()):
            stale = 0
            continue
        stale += 1
        if stale == next_check:
            candidate = space.kernel()
            if is_zero_mod(M @ sparse.csr_matrix(candidate), p):
                logger.debug(
                    f"Kernel settled after {start + block_rows} of "
                    f"{nrows} rows"
                )
                return candidate
            next_check *= 2
    return space.kernel()
