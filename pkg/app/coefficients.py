"""Coefficient systems over finite categories with values in F_p-vector
spaces, natural transformations between them, and the coset-indexed right
Kan extension along the inclusion of a subsystem of index prime to p."""
from functools import cached_property

import numpy as np

from app.errors import (
    AxiomViolation,
    InputError,
    InputNotExact,
    NotAnAlgebra,
    RestrictionUndefined,
    SectionMismatch,
)
from app.gamma import GammaData, Section, SectionFrame, parse_subgroup_spec
from app.linalg import inverse_mod_p, is_invertible_mod_p, mod_p, rank_mod_p
from app.logging import get_logger
from app.types import CoefficientSpec

logger = get_logger()


class CoefficientSystem:
    """A covariant functor from a finite category to F_p-vector spaces.

    ``mats[m]`` is the dim(target) x dim(source) matrix of morphism m.
    ``linking`` is the linking system (or subsystem) the category belongs
    to, when there is one. ``products[c]``, when given, is a d x d x d
    array of structure constants making M(c) an algebra.
    """

    def __init__(
        self,
        category,
        dims,
        mats,
        p: int,
        linking=None,
        products=None,
        name="",
        check=True,
    ):
        self.category = category
        self.dims = tuple(int(d) for d in dims)
        self.mats = tuple(mod_p(np.asarray(A).reshape(self.shape(m)), p) for m, A in enumerate(mats))
        self.p = p
        self.linking = linking
        self.products = products
        self.name = name
        self.section = None
        if check:
            failures = self.check_functoriality()
            if failures:
                raise AxiomViolation(
                    f"coefficient system {name!r} is not a functor",
                    witness=failures[0],
                )

    def __repr__(self):
        return f"CoefficientSystem({self.name!r}, dims={list(self.dims)})"

    def shape(self, m: int) -> tuple:
        C = self.category
        return (self.dims[int(C.target[m])], self.dims[int(C.source[m])])

    def mat(self, m: int) -> np.ndarray:
        return self.mats[m]

    def check_functoriality(self) -> list:
        failures = []
        C, p = self.category, self.p
        for a, i in enumerate(C.identities):
            if not np.array_equal(self.mats[i], np.eye(self.dims[a], dtype=np.int64)):
                failures.append({"property": "identity", "object": a})
        for f in range(C.n_morphisms):
            for g in np.flatnonzero(C.table[:, f] >= 0):
                gf = int(C.table[g, f])
                if not np.array_equal(
                    self.mats[gf], self.mats[g] @ self.mats[f] % p
                ):
                    failures.append(
                        {"property": "composition", "g": int(g), "f": f}
                    )
        return failures

    @cached_property
    def locally_constant(self) -> bool:
        return all(is_invertible_mod_p(A, self.p) for A in self.mats)

    def multiply(self, c: int, x, y) -> np.ndarray:
        """x·y in the algebra M(c)."""
        if self.products is None:
            raise NotAnAlgebra(f"{self!r} carries no algebra structure")
        return np.einsum("i,j,ijk->k", x, y, self.products[c]) % self.p

    def check_algebra(self) -> list:
        if self.products is None:
            raise NotAnAlgebra(f"{self!r} carries no algebra structure")
        failures = []
        C = self.category
        for m in range(C.n_morphisms):
            a, b = int(C.source[m]), int(C.target[m])
            A = self.mats[m]
            for i in range(self.dims[a]):
                for j in range(self.dims[a]):
                    x = np.eye(self.dims[a], dtype=np.int64)[i]
                    y = np.eye(self.dims[a], dtype=np.int64)[j]
                    left = A @ self.multiply(a, x, y) % self.p
                    right = self.multiply(b, A @ x % self.p, A @ y % self.p)
                    if not np.array_equal(left, right):
                        failures.append({"morphism": m, "i": i, "j": j})
        return failures

    def to_dict(self):
        return {
            "name": self.name,
            "dims": list(self.dims),
            "locally_constant": self.locally_constant,
        }


class NaturalTransformation:
    """Per-object matrices dim target(c) x dim source(c)."""

    def __init__(self, source: CoefficientSystem, target: CoefficientSystem, components, name="", check=True):
        if source.category is not target.category:
            raise InputError("natural transformations need a common category")
        self.source = source
        self.target = target
        self.p = source.p
        self.components = tuple(mod_p(np.asarray(A).reshape(target.dims[c], source.dims[c]), self.p) for c, A in enumerate(components))
        self.name = name
        if check:
            failures = self.check_naturality()
            if failures:
                raise AxiomViolation(
                    f"transformation {name!r} is not natural",
                    witness=failures[0],
                )

    def __repr__(self):
        return f"NaturalTransformation({self.name!r})"

    def check_naturality(self) -> list:
        failures = []
        C, p = self.source.category, self.p
        for m in range(C.n_morphisms):
            a, b = int(C.source[m]), int(C.target[m])
            left = self.target.mats[m] @ self.components[a] % p
            right = self.components[b] @ self.source.mats[m] % p
            if not np.array_equal(left, right):
                failures.append({"morphism": m, "source": a, "target": b})
        return failures

    def compose(self, other: "NaturalTransformation") -> "NaturalTransformation":
        """self ∘ other"""
        return NaturalTransformation(
            other.source,
            self.target,
            [A @ B % self.p for A, B in zip(self.components, other.components)],
            name=f"{self.name}∘{other.name}",
            check=False,
        )

    def equals(self, other: "NaturalTransformation") -> bool:
        return all(
            np.array_equal(A, B)
            for A, B in zip(self.components, other.components)
        )


def identity_transformation(M: CoefficientSystem, scalar: int = 1):
    return NaturalTransformation(
        M,
        M,
        [scalar * np.eye(d, dtype=np.int64) for d in M.dims],
        name=f"{scalar}·id" if scalar != 1 else "id",
        check=False,
    )


def theta_of(gamma: GammaData, L, m: int) -> int:
    return int(gamma.theta_hat[L.embedding[m]])


def constant_system(C, d: int, p: int, linking=None) -> CoefficientSystem:
    """The constant functor F_p^d, an algebra under coordinatewise product."""
    products = []
    for _ in C.objects:
        T = np.zeros((d, d, d), dtype=np.int64)
        for i in range(d):
            T[i, i, i] = 1
        products.append(T)
    return CoefficientSystem(
        C,
        [d] * C.n_objects,
        [np.eye(d, dtype=np.int64)] * C.n_morphisms,
        p,
        linking=linking,
        products=products,
        name=f"constant F_{p}^{d}",
        check=False,
    )


def permutation_system(L, gamma: GammaData, K, p: int) -> CoefficientSystem:
    """Basis Gamma/K; morphism f sends gK to Theta-hat(f)gK."""
    Gm = gamma.gamma
    cosets = gamma.cosets(K)
    n = len(cosets)
    mats = []
    for m in range(L.n_morphisms):
        t = theta_of(gamma, L, m)
        A = np.zeros((n, n), dtype=np.int64)
        for i, coset in enumerate(cosets):
            A[gamma.coset_of(K, Gm.mul(t, coset[0])), i] = 1
        mats.append(A)
    return CoefficientSystem(
        L.category,
        [n] * L.n_objects,
        mats,
        p,
        linking=L,
        name=f"F_{p}[Gamma/K], |K|={K.order}",
    )


def restrict_system(M: CoefficientSystem, L_sub) -> CoefficientSystem:
    """iota*M for a subsystem sharing the root's objects."""
    L = M.linking
    if L is None or L_sub.root is not L.root:
        raise InputError("restriction needs systems over one linking system")
    if L.is_root:
        picks = L_sub.embedding
    else:
        picks = [L.local_id(r) for r in L_sub.embedding]
        if min(picks, default=0) < 0:
            raise InputError("target subsystem is not contained in the source")
    restricted = CoefficientSystem(
        L_sub.category,
        M.dims,
        [M.mats[int(m)] for m in picks],
        M.p,
        linking=L_sub,
        products=M.products,
        name=f"res {M.name}",
        check=False,
    )
    return restricted


def pullback_system(M: CoefficientSystem, category, object_map, morphism_map, name=""):
    """F*M along a functor given by its object and morphism maps."""
    return CoefficientSystem(
        category,
        [M.dims[int(a)] for a in object_map],
        [M.mats[int(m)] for m in morphism_map],
        M.p,
        products=None if M.products is None else [M.products[int(a)] for a in object_map],
        name=name or f"pullback {M.name}",
        check=False,
    )


def target_linking(gamma: GammaData, section: Section):
    if section.K == gamma.whole:
        return gamma.L
    return gamma.subsystem(section.K)[1]


def block_offsets(M: CoefficientSystem, frame: SectionFrame, a: int):
    offsets = [0]
    for i in range(frame.index):
        offsets.append(offsets[-1] + M.dims[frame.moved[i][a]])
    return offsets


def right_kan_extension(M: CoefficientSystem, gamma: GammaData, section: Section) -> CoefficientSystem:
    """R(M)(P) = ⊕ over cosets i of M(P^(sigma_i^-1)); morphism phi has
    block (i, j) = M(sigma_i^-1| ∘ phi ∘ sigma_j|), where j is the coset
    of Theta-hat(phi)^-1·Theta-hat(sigma_i)."""
    L_H = M.linking
    if L_H is None:
        raise InputError("Kan extension needs a system over a linking system")
    frame = SectionFrame(gamma, section)
    L_K = target_linking(gamma, section)
    root = gamma.L
    C = root.category
    Gm, p = gamma.gamma, M.p
    offsets = [block_offsets(M, frame, a) for a in range(L_K.n_objects)]
    dims = [o[-1] for o in offsets]
    mats = []
    for m in range(L_K.n_morphisms):
        r = int(L_K.embedding[m])
        a, b = int(C.source[r]), int(C.target[r])
        t_inv = Gm.inv(int(gamma.theta_hat[r]))
        A = np.zeros((dims[b], dims[a]), dtype=np.int64)
        for i in range(frame.index):
            j = frame.coset_of(Gm.mul(t_inv, frame.theta[i]))
            composite = C.compose(frame.drop[i][b], C.compose(r, frame.lift[j][a]))
            local = L_H.local_id(composite)
            if local < 0:
                raise RestrictionUndefined(
                    "twisted morphism is not in the subsystem",
                    witness={"morphism": r, "coset": i},
                )
            A[offsets[b][i]:offsets[b][i + 1], offsets[a][j]:offsets[a][j + 1]] = M.mats[local]
        mats.append(A)
    R = CoefficientSystem(
        L_K.category,
        dims,
        mats,
        p,
        linking=L_K,
        name=f"R({M.name})",
    )
    R.section = section
    R.frame = frame
    R.offsets = offsets
    return R


def _check_section(R: CoefficientSystem, section: Section):
    if R.section is None or R.section != section:
        raise SectionMismatch("Kan extension was built with another section")


def pre_transfer(M: CoefficientSystem, gamma: GammaData, section: Section, R=None):
    """Pre-Tr: R(iota*M) -> M, (x_i) |-> sum_i M(sigma_i|)(x_i)."""
    L = M.linking
    if R is None:
        L_H = gamma.subsystem(section.H)[1]
        R = right_kan_extension(restrict_system(M, L_H), gamma, section)
    _check_section(R, section)
    frame = R.frame
    components = []
    for a in range(L.n_objects):
        blocks = [
            M.mats[L.local_id(frame.lift[i][a])] for i in range(frame.index)
        ]
        components.append(np.hstack(blocks))
    return NaturalTransformation(R, M, components, name="Pre-Tr")


def unit_delta(M: CoefficientSystem, gamma: GammaData, section: Section, R=None):
    """delta_M: M -> R(iota*M), x |-> (M(sigma_i|)^-1 x)_i."""
    L = M.linking
    if R is None:
        L_H = gamma.subsystem(section.H)[1]
        R = right_kan_extension(restrict_system(M, L_H), gamma, section)
    _check_section(R, section)
    frame = R.frame
    components = []
    for a in range(L.n_objects):
        blocks = [
            M.mats[L.local_id(frame.drop[i][a])] for i in range(frame.index)
        ]
        components.append(np.vstack(blocks))
    return NaturalTransformation(M, R, components, name="delta")


def change_of_section(R_sigma: CoefficientSystem, R_tau: CoefficientSystem, M_H: CoefficientSystem):
    """Phi: R^tau -> R^sigma, block diagonal M(sigma_i^-1| ∘ tau_i|)."""
    fs, ft = R_sigma.frame, R_tau.frame
    if fs.section.H != ft.section.H or fs.section.K != ft.section.K:
        raise SectionMismatch("sections are over different subgroups")
    L_H = M_H.linking
    C = fs.gamma.L.category
    components = []
    for a in range(R_sigma.category.n_objects):
        A = np.zeros((R_sigma.dims[a], R_tau.dims[a]), dtype=np.int64)
        for i in range(fs.index):
            m = C.compose(fs.drop[i][a], ft.lift[i][a])
            rows = slice(R_sigma.offsets[a][i], R_sigma.offsets[a][i + 1])
            cols = slice(R_tau.offsets[a][i], R_tau.offsets[a][i + 1])
            A[rows, cols] = M_H.mats[L_H.local_id(m)]
        components.append(A)
    return NaturalTransformation(R_tau, R_sigma, components, name="Phi")


def kan_transformation(eta: NaturalTransformation, R_source, R_target):
    """R(eta): block diagonal eta at P^(sigma_i^-1)."""
    frame = R_source.frame
    components = []
    for a in range(R_source.category.n_objects):
        blocks = [eta.components[frame.moved[i][a]] for i in range(frame.index)]
        A = np.zeros((R_target.dims[a], R_source.dims[a]), dtype=np.int64)
        r = c = 0
        for B in blocks:
            A[r:r + B.shape[0], c:c + B.shape[1]] = B
            r, c = r + B.shape[0], c + B.shape[1]
        components.append(A)
    return NaturalTransformation(R_source, R_target, components, name=f"R({eta.name})")


def short_exact_failures(f: NaturalTransformation, g: NaturalTransformation) -> list:
    """Objects where 0 -> A -f-> B -g-> C -> 0 is not exact."""
    failures = []
    p = f.p
    for c, (F, G) in enumerate(zip(f.components, g.components)):
        dim_a, dim_b, dim_c = F.shape[1], F.shape[0], G.shape[0]
        if (
            np.any(G @ F % p)
            or rank_mod_p(F, p) != dim_a
            or rank_mod_p(G, p) != dim_c
            or dim_b != dim_a + dim_c
        ):
            failures.append({"object": c, "dims": [dim_a, dim_b, dim_c]})
    return failures


def exactness_probe(f: NaturalTransformation, g: NaturalTransformation, gamma: GammaData, section: Section):
    """Apply R to a short exact sequence on L_H and check exactness."""
    failures = short_exact_failures(f, g)
    if failures:
        raise InputNotExact("input sequence is not exact", witness=failures[0])
    A, B, C = f.source, f.target, g.target
    RA, RB, RC = (right_kan_extension(X, gamma, section) for X in (A, B, C))
    Rf = kan_transformation(f, RA, RB)
    Rg = kan_transformation(g, RB, RC)
    failures = short_exact_failures(Rf, Rg)
    return {"exact": not failures, "failures": failures}


def direct_sum(M: CoefficientSystem, N: CoefficientSystem, name="") -> CoefficientSystem:
    mats = []
    for A, B in zip(M.mats, N.mats):
        D = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]), dtype=np.int64)
        D[:A.shape[0], :A.shape[1]] = A
        D[A.shape[0]:, A.shape[1]:] = B
        mats.append(D)
    return CoefficientSystem(
        M.category,
        [a + b for a, b in zip(M.dims, N.dims)],
        mats,
        M.p,
        linking=M.linking,
        name=name or f"{M.name} ⊕ {N.name}",
        check=False,
    )


def random_invertible(d: int, p: int, rng) -> np.ndarray:
    while True:
        T = rng.integers(0, p, size=(d, d))
        if is_invertible_mod_p(T, p):
            return T.astype(np.int64)


def random_short_exact_sequence(A: CoefficientSystem, C: CoefficientSystem, rng):
    """0 -> A -> B -> C -> 0 with B = A ⊕ C in a random basis per object."""
    p = A.p
    S = direct_sum(A, C)
    cat = S.category
    T = [random_invertible(d, p, rng) for d in S.dims]
    T_inv = [inverse_mod_p(X, p) for X in T]
    mats = [
        T[int(cat.target[m])] @ S.mats[m] @ T_inv[int(cat.source[m])] % p
        for m in range(cat.n_morphisms)
    ]
    B = CoefficientSystem(cat, S.dims, mats, p, linking=A.linking, name="random extension")
    f_components, g_components = [], []
    for c in range(cat.n_objects):
        da, dc = A.dims[c], C.dims[c]
        inclusion = np.vstack([np.eye(da, dtype=np.int64), np.zeros((dc, da), dtype=np.int64)])
        projection = np.hstack([np.zeros((dc, da), dtype=np.int64), np.eye(dc, dtype=np.int64)])
        f_components.append(T[c] @ inclusion % p)
        g_components.append(projection @ T_inv[c] % p)
    f = NaturalTransformation(A, B, f_components, name="f")
    g = NaturalTransformation(B, C, g_components, name="g")
    return f, g


def system_from_spec(spec: CoefficientSpec, L, gamma: GammaData, p: int) -> CoefficientSystem:
    """Coefficient system from its JSON spec on the linking system L."""
    kind = spec.get("type")
    if kind == "constant":
        return constant_system(L.category, int(spec.get("dim", 1)), p, linking=L)
    if kind == "permutation":
        K = parse_subgroup_spec(gamma, str(spec.get("subgroup", "trivial")))
        return permutation_system(L, gamma, K, p)
    if kind == "explicit":
        C = L.category
        try:
            dims = [int(spec["dims"][str(a)]) for a in range(C.n_objects)]
            matrices = spec.get("matrices", {})
            mats = []
            for m in range(C.n_morphisms):
                if str(m) in matrices:
                    mats.append(np.array(matrices[str(m)], dtype=np.int64))
                elif C.is_identity(m):
                    mats.append(np.eye(dims[int(C.source[m])], dtype=np.int64))
                else:
                    raise InputError(f"no matrix given for morphism {m}")
            M = CoefficientSystem(C, dims, mats, p, linking=L, name="explicit", check=False)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed explicit coefficient spec: {e}") from e
        failures = M.check_functoriality()
        if failures:
            raise InputError("coefficient spec is not a functor", witness=failures[0])
        return M
    raise InputError(f"unknown coefficient type {kind!r}")
