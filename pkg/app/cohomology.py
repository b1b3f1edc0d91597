"""Higher limits over finite categories through normalized nerve cochains.

An n-chain is c0 -> c1 -> ... -> cn with no identity arrow; degree 0
chains are the objects. A cochain takes a value in M(cn) at each chain, so
C^n(C; M) is the direct sum of M(last object) over the n-chains.
The coboundary is

    (d phi)(l) = sum_{i=0..n} (-1)^i phi(face_i l)
                 + (-1)^(n+1) M(m_{n+1}) phi(face_{n+1} l)

where faces hitting an identity contribute nothing.
"""
import numpy as np
from scipy import sparse

from app.coefficients import restrict_system
from app.config import config
from app.errors import (
    ConjugacyConditionViolated,
    DegreeCapExceeded,
    InputError,
    NotAnAlgebra,
    NotASubgroupChain,
    SectionMismatch,
)
from app.gamma import GammaData, Section, SectionFrame, element_frame
from app.linalg import (
    RowSpace,
    is_zero_mod,
    kernel_of,
    nullspace_mod_p,
    rank_mod_p,
    row_reduce,
    row_space_of,
    sparse_mod,
)
from app.logging import get_logger
from app.types import DegreeDict

logger = get_logger()


class ChainBasis:
    """The n-chains of a category in lexicographic order of
    (c0, m1, ..., mn)."""

    def __init__(self, category, n: int, previous=None, cap: int = None):
        if cap is None:
            cap = config.getint('chain_cap', 1000000)
        count = chain_count(category, n)
        if count > cap:
            raise DegreeCapExceeded(
                f"{count} chains of degree {n} in {category.name!r} exceed "
                f"the cap of {cap}"
            )
        self.category = category
        self.n = n
        C = category
        if n == 0:
            chains = [(a,) for a in range(C.n_objects)]
        elif n == 1:
            chains = [(m,) for a in range(C.n_objects) for m in C.out_morphisms[a]]
        else:
            if previous is None or previous.n != n - 1:
                previous = ChainBasis(category, n - 1, cap=cap)
            out = C.out_morphisms
            target = C.target
            chains = [
                chain + (m,)
                for chain in previous.chains
                for m in out[int(target[chain[-1]])]
            ]
        self.chains = chains
        self.position = {chain: k for k, chain in enumerate(chains)}
        logger.debug(f"{len(chains)} chains of degree {n} in {C.name!r}")

    def __len__(self):
        return len(self.chains)

    def objects(self, chain) -> list:
        """c0, ..., cn along a chain."""
        if self.n == 0:
            return [chain[0]]
        C = self.category
        return [int(C.source[chain[0]])] + [int(C.target[m]) for m in chain]

    def last(self, chain) -> int:
        if self.n == 0:
            return chain[0]
        return int(self.category.target[chain[-1]])


def chain_count(category, n: int) -> int:
    C = category
    if n == 0:
        return C.n_objects
    A = np.zeros((C.n_objects, C.n_objects), dtype=object)
    for a, out in enumerate(C.out_morphisms):
        for m in out:
            A[a, int(C.target[m])] += 1
    total = np.ones(C.n_objects, dtype=object)
    for _ in range(n):
        total = A @ total
    return int(sum(total))


class CochainComplex:
    """C^*(C; M) with chain bases built lazily and differentials cached."""

    def __init__(self, M, name=""):
        self.M = M
        self.category = M.category
        self.linking = M.linking
        self.p = M.p
        self.name = name or M.name
        self._bases = {}
        self._offsets = {}
        self._differentials = {}

    def __repr__(self):
        return f"CochainComplex({self.category.name!r}, {self.name!r})"

    def basis(self, n: int) -> ChainBasis:
        if n not in self._bases:
            previous = self._bases.get(n - 1)
            if n > 1 and previous is None:
                previous = self.basis(n - 1)
            self._bases[n] = ChainBasis(self.category, n, previous)
        return self._bases[n]

    def offsets(self, n: int) -> np.ndarray:
        if n not in self._offsets:
            basis = self.basis(n)
            dims = [self.M.dims[basis.last(chain)] for chain in basis.chains]
            self._offsets[n] = np.concatenate([[0], np.cumsum(dims, dtype=np.int64)])
        return self._offsets[n]

    def dim(self, n: int) -> int:
        return int(self.offsets(n)[-1])

    def value(self, n: int, cochain, chain) -> np.ndarray:
        k = self.basis(n).position[chain]
        offsets = self.offsets(n)
        return np.asarray(cochain)[offsets[k]:offsets[k + 1]]

    def differential(self, n: int):
        """d^n: C^n -> C^(n+1) as a sparse matrix."""
        if n not in self._differentials:
            self._differentials[n] = build_differential(self, n)
        return self._differentials[n]

    def random_cochain(self, n: int, rng) -> np.ndarray:
        return rng.integers(0, self.p, size=self.dim(n)).astype(np.int64)


class SparseBuilder:
    """COO triplets for an operator between cochain spaces."""

    def __init__(self, shape):
        self.shape = shape
        self.rows, self.cols, self.vals = [], [], []

    def block(self, row: int, col: int, A, sign: int = 1):
        A = np.asarray(A)
        r, c = np.nonzero(A)
        self.rows.extend((r + row).tolist())
        self.cols.extend((c + col).tolist())
        self.vals.extend((sign * A[r, c]).tolist())

    def identity(self, row: int, col: int, d: int, sign: int = 1):
        self.rows.extend(range(row, row + d))
        self.cols.extend(range(col, col + d))
        self.vals.extend([sign] * d)

    def build(self, p: int):
        M = sparse.coo_matrix(
            (self.vals, (self.rows, self.cols)), shape=self.shape, dtype=np.int64
        )
        return sparse_mod(M.tocsr(), p)


def build_differential(complex_: CochainComplex, n: int):
    C = complex_.category
    M = complex_.M
    source, target = complex_.basis(n), complex_.basis(n + 1)
    src_off, tgt_off = complex_.offsets(n), complex_.offsets(n + 1)
    builder = SparseBuilder((complex_.dim(n + 1), complex_.dim(n)))
    for k, chain in enumerate(target.chains):
        row = int(tgt_off[k])
        d = M.dims[target.last(chain)]
        first = (int(C.target[chain[0]]),) if n == 0 else chain[1:]
        j = source.position[first]
        builder.identity(row, int(src_off[j]), d)
        for i in range(1, n + 1):
            composite = int(C.table[chain[i], chain[i - 1]])
            if C.is_identity(composite):
                continue
            face = chain[:i - 1] + (composite,) + chain[i + 1:]
            j = source.position[face]
            builder.identity(row, int(src_off[j]), d, sign=(-1) ** i)
        last = (int(C.source[chain[0]]),) if n == 0 else chain[:-1]
        j = source.position[last]
        builder.block(row, int(src_off[j]), M.mats[chain[-1]], sign=(-1) ** (n + 1))
    D = builder.build(complex_.p)
    logger.debug(f"d^{n} of {complex_!r}: {D.shape[0]}x{D.shape[1]}, {D.nnz} entries")
    return D


def check_d_squared(complex_: CochainComplex, n: int) -> bool:
    return is_zero_mod(complex_.differential(n + 1) @ complex_.differential(n), complex_.p)


class CohomologyResult:
    """H^0..H^maxdeg with representative cocycles and coordinates.

    For each degree: ``representatives[n]`` holds cocycles (rows) whose
    classes form a basis, ``boundaries[n]`` is the row space of the
    coboundaries and ``pivots[n]`` the columns where the residues of the
    representatives modulo the coboundaries form an identity matrix.
    """

    def __init__(self, complex_: CochainComplex, maxdeg: int):
        self.complex = complex_
        self.p = complex_.p
        self.maxdeg = maxdeg
        self.dims = []
        self.representatives = []
        self.boundaries = []
        self.pivots = []
        self.residues = []

    def coordinates(self, n: int, z) -> np.ndarray:
        """Coordinates of the class of the cocycle z."""
        z = np.mod(np.asarray(z, dtype=np.int64), self.p)
        if np.any(self.complex.differential(n) @ z % self.p):
            raise InputError(f"cochain of degree {n} is not a cocycle")
        residue = self.boundaries[n].reduce(z)[0].astype(np.int64)
        coords = residue[self.pivots[n]] if self.dims[n] else np.zeros(0, dtype=np.int64)
        if np.any((residue - coords @ self.residues[n]) % self.p):
            raise AssertionError("residue outside the span of representatives")
        return coords

    def is_coboundary(self, n: int, z) -> bool:
        return self.boundaries[n].contains(z)

    def to_json(self) -> list[DegreeDict]:
        return [
            {
                "degree": n,
                "dim": self.dims[n],
                "representatives": self.representatives[n].tolist(),
            }
            for n in range(len(self.dims))
        ]


def cohomology(complex_: CochainComplex, maxdeg: int, column_cap: int = None) -> CohomologyResult:
    if column_cap is None:
        column_cap = config.getint('column_cap', 8000)
    p = complex_.p
    result = CohomologyResult(complex_, maxdeg)
    previous = None
    for n in range(maxdeg + 1):
        width = complex_.dim(n)
        if width > column_cap:
            raise DegreeCapExceeded(
                f"C^{n} of {complex_!r} has dimension {width}, above the "
                f"column cap of {column_cap}"
            )
        D = complex_.differential(n)
        if previous is not None and not is_zero_mod(D @ previous, p):
            raise AssertionError(f"d^{n}∘d^{n - 1} != 0 for {complex_!r}")
        Z = kernel_of(D, p).T
        if previous is None:
            B = RowSpace(width, p)
        else:
            B = row_space_of(previous.T, p)
        residues = B.reduce(Z).astype(np.int64) if len(Z) else np.zeros((0, width), dtype=np.int64)
        k = len(Z)
        augmented = np.hstack([residues, np.eye(k, dtype=np.int64)])
        R, pivots = row_reduce(augmented, p) if k else (augmented, [])
        rows = [i for i, c in enumerate(pivots) if c < width]
        combos = R[rows, width:]
        reps = combos @ Z % p if rows else np.zeros((0, width), dtype=np.int64)
        result.representatives.append(reps.astype(np.int64))
        result.boundaries.append(B)
        result.residues.append(R[rows, :width].astype(np.int64))
        result.pivots.append(np.asarray([pivots[i] for i in rows], dtype=np.int64))
        result.dims.append(len(rows))
        logger.info(f"H^{n}({complex_.category.name}; {complex_.name}) has dimension {len(rows)}")
        previous = D
    return result


def induced_map(op, source: CohomologyResult, target: CohomologyResult, n: int) -> np.ndarray:
    """Matrix of a cochain map on H^n in the two chosen bases."""
    p = source.p
    columns = [
        target.coordinates(n, op @ rep % p) for rep in source.representatives[n]
    ]
    if not columns:
        return np.zeros((target.dims[n], 0), dtype=np.int64)
    return np.stack(columns, axis=1).astype(np.int64) % p


def commutes_with_d(op_low, op_high, source: CochainComplex, target: CochainComplex, n: int) -> bool:
    """op^(n+1) ∘ d_source^n == d_target^n ∘ op^n."""
    left = op_high @ source.differential(n)
    right = target.differential(n) @ op_low
    return is_zero_mod(left - right, source.p)


# Cochain operators. Each returns a sparse matrix from the source cochain
# space to the target one in a fixed degree.


def functor_pullback(source: CochainComplex, target: CochainComplex, morphism_map, n: int):
    """F*: C^n(source) -> C^n(target) for a functor target -> source that
    sends non-identities to non-identities; ``morphism_map`` is indexed by
    target morphisms and for n = 0 ``morphism_map`` is the object map."""
    tb, sb = target.basis(n), source.basis(n)
    t_off, s_off = target.offsets(n), source.offsets(n)
    builder = SparseBuilder((target.dim(n), source.dim(n)))
    for k, chain in enumerate(tb.chains):
        image = tuple(int(morphism_map[m]) for m in chain)
        j = sb.position[image]
        builder.identity(int(t_off[k]), int(s_off[j]), int(t_off[k + 1] - t_off[k]))
    return builder.build(source.p)


def restriction(source: CochainComplex, target: CochainComplex, n: int):
    """Res: cochains on L_K -> cochains on a subsystem L_H."""
    L_K, L_H = source.linking, target.linking
    if n == 0:
        mapping = range(L_H.n_objects)
    else:
        mapping = [L_K.local_id(r) for r in L_H.embedding]
        if min(mapping, default=0) < 0:
            raise NotASubgroupChain("target subsystem is not contained in the source")
    return functor_pullback(source, target, mapping, n)


def conjugation(source: CochainComplex, target: CochainComplex, gamma: GammaData, alpha: int, M_root, n: int):
    """c_alpha: C^n(L_K) -> C^n(L_H), (c_alpha psi)(l) = M(alpha|) psi(l^alpha)
    where l^alpha has arrows alpha^-1| ∘ f ∘ alpha|."""
    L_K, L_H = source.linking, target.linking
    Gm = gamma.gamma
    root = gamma.L
    C = root.category
    x = int(gamma.theta_hat[alpha])
    H = {int(gamma.theta_hat[r]) for r in L_H.embedding}
    K = {int(gamma.theta_hat[r]) for r in L_K.embedding}
    if any(Gm.conj(Gm.inv(x), h) not in K for h in H):
        raise ConjugacyConditionViolated(
            "Theta-hat(alpha)^-1 H Theta-hat(alpha) is not contained in K",
            witness={"alpha": alpha, "theta": x},
        )
    moved, lift, drop = element_frame(root, alpha)
    tb, sb = target.basis(n), source.basis(n)
    t_off, s_off = target.offsets(n), source.offsets(n)
    builder = SparseBuilder((target.dim(n), source.dim(n)))
    for k, chain in enumerate(tb.chains):
        objects = tb.objects(chain)
        if n == 0:
            image = (moved[chain[0]],)
        else:
            twisted = []
            for i, m in enumerate(chain):
                r = int(L_H.embedding[m])
                t = C.compose(drop[objects[i + 1]], C.compose(r, lift[objects[i]]))
                twisted.append(L_K.local_id(t))
            image = tuple(twisted)
        j = sb.position[image]
        builder.block(int(t_off[k]), int(s_off[j]), M_root.mats[lift[objects[-1]]])
    return builder.build(source.p)


def transfer(source: CochainComplex, target: CochainComplex, gamma: GammaData, section: Section, M_root, n: int, frame=None):
    """Tr: C^n(L_H) -> C^n(L_K) for a section of K/H:
    Tr(psi)(l) = sum over cosets g of M(sigma_g|) psi(l^(g)).

    Walking back from the last object, g_(j-1) is the coset of
    Theta-hat(f_j)^-1 Theta-hat(sigma_(g_j)) and the j-th arrow of l^(g) is
    sigma_(g_j)^-1| ∘ f_j ∘ sigma_(g_(j-1))|. Twisted chains meeting an
    identity contribute nothing.
    """
    L_H, L_K = source.linking, target.linking
    if frame is None:
        frame = SectionFrame(gamma, section)
    if frame.section != section:
        raise SectionMismatch("frame belongs to another section")
    H = {int(gamma.theta_hat[r]) for r in L_H.embedding}
    K = {int(gamma.theta_hat[r]) for r in L_K.embedding}
    if H != set(section.H.members) or K != set(section.K.members):
        raise SectionMismatch("section does not match the subsystems")
    Gm = gamma.gamma
    C = gamma.L.category
    tb, sb = target.basis(n), source.basis(n)
    t_off, s_off = target.offsets(n), source.offsets(n)
    builder = SparseBuilder((target.dim(n), source.dim(n)))
    for k, chain in enumerate(tb.chains):
        objects = tb.objects(chain)
        roots = [int(L_K.embedding[m]) for m in chain] if n else []
        for top in range(frame.index):
            if n == 0:
                image = (frame.moved[top][chain[0]],)
            else:
                cosets = [0] * (n + 1)
                cosets[n] = top
                twisted = [0] * n
                for j in range(n, 0, -1):
                    r = roots[j - 1]
                    cosets[j - 1] = frame.coset_of(
                        Gm.mul(Gm.inv(int(gamma.theta_hat[r])), frame.theta[cosets[j]])
                    )
                    twisted[j - 1] = C.compose(
                        frame.drop[cosets[j]][objects[j]],
                        C.compose(r, frame.lift[cosets[j - 1]][objects[j - 1]]),
                    )
                if any(C.is_identity(t) for t in twisted):
                    continue
                image = tuple(L_H.local_id(t) for t in twisted)
            j = sb.position[image]
            builder.block(int(t_off[k]), int(s_off[j]), M_root.mats[frame.lift[top][objects[-1]]])
    return builder.build(source.p)


def pushforward(source: CochainComplex, target: CochainComplex, eta, n: int):
    """eta_*: C^n(C; M) -> C^n(C; N) for eta: M -> N."""
    basis = source.basis(n)
    s_off, t_off = source.offsets(n), target.offsets(n)
    builder = SparseBuilder((target.dim(n), source.dim(n)))
    for k, chain in enumerate(basis.chains):
        builder.block(int(t_off[k]), int(s_off[k]), eta.components[basis.last(chain)])
    return builder.build(source.p)


def cup(complex_: CochainComplex, phi, k: int, psi, l: int) -> np.ndarray:
    """(phi ∪ psi)(l) = A(m_(k+l)∘...∘m_(k+1)) phi(front_k) · psi(back_l)."""
    A = complex_.M
    if A.products is None:
        raise NotAnAlgebra(f"{A!r} carries no algebra structure")
    p = complex_.p
    C = complex_.category
    n = k + l
    basis = complex_.basis(n)
    front_basis, back_basis = complex_.basis(k), complex_.basis(l)
    front_off, back_off = complex_.offsets(k), complex_.offsets(l)
    out_off = complex_.offsets(n)
    result = np.zeros(complex_.dim(n), dtype=np.int64)
    for idx, chain in enumerate(basis.chains):
        objects = basis.objects(chain)
        front = (objects[0],) if k == 0 else chain[:k]
        back = (objects[-1],) if l == 0 else chain[k:]
        i = front_basis.position[front]
        j = back_basis.position[back]
        x = np.asarray(phi[front_off[i]:front_off[i + 1]], dtype=np.int64)
        for m in chain[k:] if n else ():
            x = A.mats[m] @ x % p
        y = np.asarray(psi[back_off[j]:back_off[j + 1]], dtype=np.int64)
        result[out_off[idx]:out_off[idx + 1]] = A.multiply(objects[-1], x, y)
    return result


def unit_cocycle(complex_: CochainComplex) -> np.ndarray:
    """The degree 0 cocycle equal to the unit 1 at every object of the
    constant algebra F_p^d."""
    M = complex_.M
    values = [np.ones(M.dims[a], dtype=np.int64) for a in range(complex_.category.n_objects)]
    return np.concatenate(values) if values else np.zeros(0, dtype=np.int64)


class SubsystemCohomology:
    """Cochain complexes and cohomology of iota*M over the subsystems L_K,
    K <= Gamma, for one coefficient system M on L, with operator caches."""

    def __init__(self, gamma: GammaData, M, maxdeg: int):
        self.gamma = gamma
        self.M = M
        self.p = M.p
        self.maxdeg = maxdeg
        self._complexes = {}
        self._results = {}
        self._operators = {}

    def linking(self, K):
        if K == self.gamma.whole:
            return self.gamma.L
        return self.gamma.subsystem(K)[1]

    def complex(self, K) -> CochainComplex:
        if K.members not in self._complexes:
            if K == self.gamma.whole:
                system = self.M
            else:
                system = restrict_system(self.M, self.linking(K))
            self._complexes[K.members] = CochainComplex(system)
        return self._complexes[K.members]

    def result(self, K) -> CohomologyResult:
        if K.members not in self._results:
            self._results[K.members] = cohomology(self.complex(K), self.maxdeg)
        return self._results[K.members]

    def _cached(self, key, build):
        if key not in self._operators:
            self._operators[key] = build()
        return self._operators[key]

    def res(self, H, K, n: int):
        """Res^K_H on n-cochains."""
        if not H <= K:
            raise NotASubgroupChain(f"{H} is not contained in {K}")
        return self._cached(
            ("res", H.members, K.members, n),
            lambda: restriction(self.complex(K), self.complex(H), n),
        )

    def conj(self, alpha: int, H, K, n: int):
        """c_alpha: n-cochains on L_K -> n-cochains on L_H."""
        return self._cached(
            ("conj", alpha, H.members, K.members, n),
            lambda: conjugation(
                self.complex(K), self.complex(H), self.gamma, alpha, self.M, n
            ),
        )

    def tr(self, section: Section, n: int, frame=None):
        """Tr for a section of K/H on n-cochains."""
        key = ("tr", section.H.members, section.K.members, section.elements, n)
        return self._cached(
            key,
            lambda: transfer(
                self.complex(section.H),
                self.complex(section.K),
                self.gamma,
                section,
                self.M,
                n,
                frame=frame,
            ),
        )

    def res_map(self, H, K, n: int) -> np.ndarray:
        return induced_map(self.res(H, K, n), self.result(K), self.result(H), n)

    def tr_map(self, section: Section, n: int) -> np.ndarray:
        return induced_map(
            self.tr(section, n), self.result(section.H), self.result(section.K), n
        )

    def conj_map(self, alpha: int, H, K, n: int) -> np.ndarray:
        return induced_map(
            self.conj(alpha, H, K, n), self.result(K), self.result(H), n
        )


def stable_elements(ctx: SubsystemCohomology, H, n: int) -> dict:
    """The stable subspace of H^n(L_H; iota*M) and the image of Res_H.

    x is stable when c_g Res^H_(g^-1 U g)(x) = Res^H_U(x) for every U <= H
    and g in Gamma with g^-1 U g <= H, c_g using the least element of
    Aut_L(S) over g.
    """
    gamma, p = ctx.gamma, ctx.p
    Gm = gamma.gamma
    dim = ctx.result(H).dims[n]
    conditions = []
    for U in gamma.subgroups():
        if not U <= H:
            continue
        for g in range(Gm.order):
            V = gamma.subgroup(Gm.conj(Gm.inv(g), u) for u in U.key)
            if not V <= H:
                continue
            alpha = gamma.lift(g)
            twisted = ctx.conj_map(alpha, U, V, n) @ ctx.res_map(V, H, n) % p
            conditions.append((twisted - ctx.res_map(U, H, n)) % p)
    if conditions and dim:
        stable = nullspace_mod_p(np.vstack(conditions), p)
    else:
        stable = np.eye(dim, dtype=np.int64)
    image = ctx.res_map(H, gamma.whole, n)
    stable_rank = rank_mod_p(stable, p) if stable.size else 0
    image_rank = rank_mod_p(image, p) if image.size else 0
    combined = np.hstack([stable, image]) if dim else np.zeros((0, 0), dtype=np.int64)
    combined_rank = rank_mod_p(combined, p) if combined.size else 0
    return {
        "degree": n,
        "stable_dim": stable_rank,
        "image_dim": image_rank,
        "equal": stable_rank == image_rank == combined_rank,
        "basis": stable.T.tolist(),
    }
