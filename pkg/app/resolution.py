"""Projective resolutions of the constant functor over a category algebra.

A free module is a sum of representables F_p[Hom(c_j, -)]; its value at x
has the basis of pairs (j, f) with f: c_j -> x. Kernels are covered
greedily by generators in canonical order, which gives a (non-minimal)
projective resolution P_* of the constant functor. Then

    H^n(C; M) = H^n(Hom(P_*, M)),  Hom(P_n, M) = ⊕_j M(c_j)

by the Yoneda lemma. This is independent of the nerve cochain engine and
is used as its oracle.
"""
import numpy as np

from app.linalg import RowSpace, nullspace_mod_p, rank_mod_p
from app.logging import get_logger

logger = get_logger()


class FreeModule:
    def __init__(self, category, tops):
        self.category = category
        self.tops = tuple(int(c) for c in tops)
        C = category
        self.basis = [[] for _ in range(C.n_objects)]
        for j, c in enumerate(self.tops):
            for f in np.flatnonzero(C.source == c):
                self.basis[int(C.target[f])].append((j, int(f)))
        self.position = [
            {pair: k for k, pair in enumerate(basis)} for basis in self.basis
        ]

    @property
    def rank(self) -> int:
        return len(self.tops)

    def dim(self, x: int) -> int:
        return len(self.basis[x])

    def act(self, f: int, v, y: int) -> np.ndarray:
        """f·v for v in P(y) and f: y -> z."""
        C = self.category
        z = int(C.target[f])
        out = np.zeros(self.dim(z), dtype=np.int64)
        for k in np.flatnonzero(v):
            j, g = self.basis[y][k]
            out[self.position[z][(j, int(C.table[f, g]))]] += v[k]
        return out


class Resolution:
    """P_0 <- P_1 <- ... with ``images[n][j]`` the boundary of generator j
    of P_n, a vector of P_(n-1)(c_j)."""

    def __init__(self, category, p: int, length: int):
        self.category = category
        self.p = p
        C = category
        covered = [False] * C.n_objects
        tops = []
        for x in range(C.n_objects):
            if not covered[x]:
                tops.append(x)
                for f in np.flatnonzero(C.source == x):
                    covered[int(C.target[f])] = True
        self.modules = [FreeModule(C, tops)]
        self.images = [None]
        kernels = [
            nullspace_mod_p(np.ones((1, self.modules[0].dim(x)), dtype=np.int64), p)
            for x in range(C.n_objects)
        ]
        for n in range(1, length + 1):
            module, images = self._cover(self.modules[-1], kernels)
            self.modules.append(module)
            self.images.append(images)
            logger.debug(f"P_{n} has rank {module.rank}")
            if n < length:
                kernels = self._kernels(module, self.modules[-2], images)

    def _kernels(self, P, Q, images):
        p = self.p
        kernels = []
        for x in range(self.category.n_objects):
            D = np.zeros((Q.dim(x), P.dim(x)), dtype=np.int64)
            for k, (j, f) in enumerate(P.basis[x]):
                D[:, k] = Q.act(f, images[j], P.tops[j])
            if P.dim(x) == 0:
                kernels.append(np.zeros((0, 0), dtype=np.int64))
            elif Q.dim(x) == 0:
                kernels.append(np.eye(P.dim(x), dtype=np.int64))
            else:
                kernels.append(nullspace_mod_p(D % p, p))
        return kernels

    def _cover(self, Q, kernels):
        """Generators covering the submodule of Q with the given kernels."""
        C, p = self.category, self.p
        spans = [RowSpace(Q.dim(x), p) for x in range(C.n_objects)]
        tops, images = [], []
        for x in range(C.n_objects):
            K = kernels[x]
            for k in range(K.shape[1]):
                v = K[:, k] % p
                if spans[x].contains(v):
                    continue
                tops.append(x)
                images.append(v)
                by_target = {}
                for f in np.flatnonzero(C.source == x):
                    z = int(C.target[f])
                    by_target.setdefault(z, []).append(Q.act(int(f), v, x) % p)
                for z, vectors in by_target.items():
                    spans[z].extend(np.vstack(vectors))
        return FreeModule(C, tops), images

    def coboundary(self, M, n: int) -> np.ndarray:
        """Hom(P_n, M) -> Hom(P_(n+1), M) in the Yoneda bases."""
        P, Q = self.modules[n + 1], self.modules[n]
        rows = [M.dims[c] for c in P.tops]
        cols = [M.dims[c] for c in Q.tops]
        r_off = np.concatenate([[0], np.cumsum(rows, dtype=np.int64)])
        c_off = np.concatenate([[0], np.cumsum(cols, dtype=np.int64)])
        D = np.zeros((r_off[-1], c_off[-1]), dtype=np.int64)
        for j, v in enumerate(self.images[n + 1]):
            c = P.tops[j]
            for k in np.flatnonzero(v):
                i, g = Q.basis[c][k]
                D[r_off[j]:r_off[j + 1], c_off[i]:c_off[i + 1]] += v[k] * M.mats[g]
        return D % self.p


def resolution_dims(category, M, maxdeg: int) -> list:
    """dim H^n(C; M) for n <= maxdeg."""
    p = M.p
    R = Resolution(category, p, maxdeg + 1)
    widths = [sum(M.dims[c] for c in R.modules[n].tops) for n in range(maxdeg + 2)]
    ranks = []
    for n in range(maxdeg + 1):
        D = R.coboundary(M, n)
        ranks.append(rank_mod_p(D, p) if D.size else 0)
    dims = []
    for n in range(maxdeg + 1):
        previous = ranks[n - 1] if n else 0
        dims.append(widths[n] - ranks[n] - previous)
    logger.info(f"Resolution dimensions over {category.name!r}: {dims}")
    return dims
