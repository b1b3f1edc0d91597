"""The covering category of a linking system attached to a subgroup H of
Gamma, the lift of L_H into it and the transfer built from it.

Objects of the covering are pairs (P, aH) numbered a*index + i, and a
morphism (P, aH) -> (Q, a'H) is a morphism phi of L with
a'H = Theta-hat(phi)aH, numbered phi*index + i.
"""
from collections import Counter

import networkx as nx
import numpy as np

from app.category import FiniteCategory
from app.coefficients import (
    CoefficientSystem,
    NaturalTransformation,
    pullback_system,
    restrict_system,
    right_kan_extension,
)
from app.cohomology import (
    CochainComplex,
    SparseBuilder,
    cohomology,
    functor_pullback,
    induced_map,
    pushforward,
)
from app.errors import AxiomViolation, InputError, NotLocallyConstant
from app.gamma import GammaData, make_section
from app.linalg import inverse_mod_p
from app.logging import get_logger
from app.resolution import resolution_dims

logger = get_logger()


class CoveringCategory:
    def __init__(self, gamma: GammaData, H, category, target_coset):
        self.gamma = gamma
        self.L = gamma.L
        self.H = H
        self.cosets = gamma.cosets(H)
        self.index = len(self.cosets)
        self.category = category
        self.target_coset = target_coset

    def __repr__(self):
        return (
            f"CoveringCategory(index={self.index}, "
            f"objects={self.category.n_objects}, "
            f"morphisms={self.category.n_morphisms})"
        )

    def object(self, a: int, i: int) -> int:
        return a * self.index + i

    def morphism(self, m: int, i: int) -> int:
        return m * self.index + i

    @property
    def object_projection(self) -> np.ndarray:
        return np.arange(self.category.n_objects, dtype=np.int64) // self.index

    @property
    def morphism_projection(self) -> np.ndarray:
        return np.arange(self.category.n_morphisms, dtype=np.int64) // self.index

    def check_projection(self) -> list:
        """Composable pairs where the projection to L is not functorial."""
        failures = []
        C, base = self.category, self.L.category
        proj = self.morphism_projection
        for f in range(C.n_morphisms):
            for g in np.flatnonzero(C.table[:, f] >= 0):
                gf = int(C.table[g, f])
                if proj[gf] != base.table[proj[g], proj[f]]:
                    failures.append({"g": int(g), "f": f})
        for a, i in enumerate(C.identities):
            if not base.is_identity(int(proj[i])):
                failures.append({"identity": a})
        return failures

    def undercategory(self, c: int) -> dict:
        """Components of c↓pi and whether each has an initial object.

        Objects of c↓pi are pairs (y, phi: c -> pi(y)); a morphism
        (y, phi) -> (y', phi') is u: y -> y' with pi(u)∘phi = phi'.
        """
        C, base = self.category, self.L.category
        proj = self.morphism_projection
        nodes = [
            (y, phi)
            for y in range(C.n_objects)
            for phi in base.hom(c, y // self.index)
        ]
        arrows = {}
        graph = nx.Graph()
        graph.add_nodes_from(nodes)
        for y, phi in nodes:
            counts = Counter()
            for u in np.flatnonzero(C.source == y):
                end = (int(C.target[u]), int(base.table[proj[u], phi]))
                counts[end] += 1
                graph.add_edge((y, phi), end)
            arrows[(y, phi)] = counts
        components = [set(c) for c in nx.connected_components(graph)]
        initial = []
        for component in components:
            found = [
                x
                for x in sorted(component)
                if all(arrows[x][z] == 1 for z in component)
            ]
            initial.append(found[0] if found else None)
        return {"components": len(components), "initial": initial}

    def to_dict(self):
        return {
            "index": self.index,
            "objects": self.category.n_objects,
            "morphisms": self.category.n_morphisms,
            "components": len(self.category.components()),
        }


def build_covering(gamma: GammaData, H) -> CoveringCategory:
    L = gamma.L
    base = L.category
    Gm = gamma.gamma
    cosets = gamma.cosets(H)
    index = len(cosets)
    n = base.n_morphisms * index
    target_coset = np.empty(n, dtype=np.int64)
    for m in range(base.n_morphisms):
        t = int(gamma.theta_hat[m])
        for i, coset in enumerate(cosets):
            target_coset[m * index + i] = gamma.coset_of(H, Gm.mul(t, coset[0]))
    table = np.full((n, n), -1, dtype=np.int64)
    for f in range(base.n_morphisms):
        for g in np.flatnonzero(base.table[:, f] >= 0):
            gf = int(base.table[g, f])
            for i in range(index):
                j = int(target_coset[f * index + i])
                table[g * index + j, f * index + i] = gf * index + i
    objects = [f"({label}, {i})" for label in base.objects for i in range(index)]
    category = FiniteCategory(
        objects,
        np.repeat(base.source, index) * index + np.tile(np.arange(index), base.n_morphisms),
        target_coset + np.repeat(base.target, index) * index,
        [e * index + i for e in base.identities for i in range(index)],
        table,
        name=f"L[Gamma/{H.order}]",
    )
    covering = CoveringCategory(gamma, H, category, target_coset)
    logger.info(f"Covering category: {covering!r}")
    failures = covering.check_projection()
    if failures:
        raise AxiomViolation("projection of the covering is not a functor", witness=failures[0])
    for c in range(L.n_objects):
        under = covering.undercategory(c)
        if under["components"] != index or None in under["initial"]:
            raise AxiomViolation(
                f"undercategory of object {c} has {under['components']} "
                f"components, expected {index} with initial objects",
                witness={"object": c, **under},
            )
    return covering


def lift_functor(L_H, covering: CoveringCategory):
    """The lift of L_H into the trivial-coset slice as (object map,
    morphism map), indexed by L_H objects and local morphism ids."""
    gamma = covering.gamma
    labels = {int(gamma.theta_hat[r]) for r in L_H.embedding}
    if not labels <= covering.H.members or len(L_H.embedding) != len(
        gamma.preimage(covering.H)
    ):
        raise InputError("covering was built over another subgroup")
    object_map = np.array(
        [covering.object(a, 0) for a in range(L_H.n_objects)], dtype=np.int64
    )
    morphism_map = np.array(
        [covering.morphism(int(r), 0) for r in L_H.embedding], dtype=np.int64
    )
    C = covering.category
    if np.any(covering.target_coset[morphism_map] != 0):
        raise AxiomViolation("a morphism of L_H leaves the trivial coset")
    if not np.array_equal(covering.morphism_projection[morphism_map], L_H.embedding):
        raise AxiomViolation("pi∘lift is not the inclusion of L_H")
    if not np.array_equal(C.source[morphism_map], object_map[L_H.category.source]):
        raise AxiomViolation("lift does not respect sources")
    return object_map, morphism_map


def covering_system(M: CoefficientSystem, covering: CoveringCategory) -> CoefficientSystem:
    """pi*M on the covering category."""
    return pullback_system(
        M,
        covering.category,
        covering.object_projection,
        covering.morphism_projection,
        name=f"pi*{M.name}",
    )


def covering_kan_extension(M: CoefficientSystem, covering: CoveringCategory) -> CoefficientSystem:
    """R_pi(pi*M): ⊕ over cosets b of M(c); phi has block
    (b, Theta-hat(phi)^-1 b) = M(phi)."""
    L = covering.L
    index = covering.index
    mats = []
    for m in range(L.n_morphisms):
        a, b = int(L.category.source[m]), int(L.category.target[m])
        d_a, d_b = M.dims[a], M.dims[b]
        A = np.zeros((d_b * index, d_a * index), dtype=np.int64)
        for i in range(index):
            j = int(covering.target_coset[covering.morphism(m, i)])
            A[j * d_b:(j + 1) * d_b, i * d_a:(i + 1) * d_a] = M.mats[m]
        mats.append(A)
    return CoefficientSystem(
        L.category,
        [d * index for d in M.dims],
        mats,
        M.p,
        linking=L,
        name=f"R_pi(pi*{M.name})",
    )


def geometric_transfer(M: CoefficientSystem, R: CoefficientSystem, covering: CoveringCategory):
    """T: R_pi(pi*M) -> M summing the coset blocks."""
    if not M.locally_constant:
        raise NotLocallyConstant(f"{M!r} is not locally constant")
    components = [
        np.hstack([np.eye(d, dtype=np.int64)] * covering.index) for d in M.dims
    ]
    return NaturalTransformation(R, M, components, name="T")


def covering_diagonal(M: CoefficientSystem, R: CoefficientSystem, covering: CoveringCategory):
    """M -> R_pi(pi*M), x |-> (x)_b."""
    components = [
        np.vstack([np.eye(d, dtype=np.int64)] * covering.index) for d in M.dims
    ]
    return NaturalTransformation(M, R, components, name="diagonal")


def covering_shapiro(source: CochainComplex, target: CochainComplex, covering: CoveringCategory, n: int):
    """C^n(covering; pi*M) -> C^n(L; R_pi(pi*M)): block b of the value at
    a chain l is the value at the lift of l ending in coset b."""
    index = covering.index
    tb, sb = target.basis(n), source.basis(n)
    t_off, s_off = target.offsets(n), source.offsets(n)
    builder = SparseBuilder((target.dim(n), source.dim(n)))
    for k, chain in enumerate(tb.chains):
        d = source.M.dims[covering.object(tb.last(chain), 0)]
        for b in range(index):
            if n == 0:
                lifted = (covering.object(chain[0], b),)
            else:
                lifted = [0] * n
                coset = b
                for j in range(n - 1, -1, -1):
                    m = chain[j]
                    for i in range(index):
                        if covering.target_coset[covering.morphism(m, i)] == coset:
                            break
                    lifted[j] = covering.morphism(m, i)
                    coset = i
                lifted = tuple(lifted)
            s = sb.position[lifted]
            builder.identity(int(t_off[k]) + b * d, int(s_off[s]), d)
    return builder.build(source.p)


def compare_transfers(ctx, H, maxdeg: int, section=None) -> list:
    """Algebraic transfer against the covering route on H^0..H^maxdeg.

    The covering route is H^n(L_H) <- H^n(covering) (lift, inverted),
    then the Shapiro map to H^n(L; R_pi pi*M) and T_*.
    """
    gamma, M, p = ctx.gamma, ctx.M, ctx.p
    if maxdeg > ctx.maxdeg:
        raise InputError(f"cohomology was computed up to degree {ctx.maxdeg} only")
    if not M.locally_constant:
        raise NotLocallyConstant(f"{M!r} is not locally constant")
    if section is None:
        section = make_section(gamma, H)
    covering = build_covering(gamma, H)
    L_H = ctx.linking(H)
    object_map, morphism_map = lift_functor(L_H, covering)
    cov_complex = CochainComplex(covering_system(M, covering))
    R = covering_kan_extension(M, covering)
    R_complex = CochainComplex(R)
    T = geometric_transfer(M, R, covering)
    cov_result = cohomology(cov_complex, maxdeg)
    reports = []
    for n in range(maxdeg + 1):
        lift = functor_pullback(
            cov_complex, ctx.complex(H), object_map if n == 0 else morphism_map, n
        )
        J = induced_map(lift, cov_result, ctx.result(H), n)
        route = pushforward(R_complex, ctx.complex(gamma.whole), T, n) @ covering_shapiro(
            cov_complex, R_complex, covering, n
        )
        Psi = induced_map(route, cov_result, ctx.result(gamma.whole), n)
        try:
            J_inv = inverse_mod_p(J, p)
        except ValueError as e:
            raise AxiomViolation(
                f"lift does not induce an isomorphism on H^{n}",
                witness={"degree": n, "matrix": J.tolist()},
            ) from e
        geometric = Psi @ J_inv % p
        algebraic = ctx.tr_map(section, n)
        reports.append(
            {
                "degree": n,
                "algebraic": algebraic.tolist(),
                "geometric": geometric.tolist(),
                "equal": bool(np.array_equal(algebraic, geometric)),
            }
        )
    return reports


def lift_dims(gamma: GammaData, M: CoefficientSystem, H, maxdeg: int) -> dict:
    """dims of H^*(covering; pi*M) and of H^*(L_H; iota*M)."""
    covering = build_covering(gamma, H)
    L_H = gamma.L if covering.index == 1 else gamma.subsystem(H)[1]
    cov = cohomology(CochainComplex(covering_system(M, covering)), maxdeg)
    sub = cohomology(CochainComplex(restrict_system(M, L_H)), maxdeg)
    return {"covering": cov.dims, "subsystem": sub.dims}


def kan_extension_dims(gamma: GammaData, M: CoefficientSystem, H, maxdeg: int) -> dict:
    """dims of H^*(L; R_iota(iota*M)) and H^*(L; R_pi(pi*M)); the two
    extensions are isomorphic, the subsystem inclusion being a covering up
    to homotopy."""
    covering = build_covering(gamma, H)
    if covering.index == 1:
        M_H = M
    else:
        M_H = restrict_system(M, gamma.subsystem(H)[1])
    R_iota = right_kan_extension(M_H, gamma, make_section(gamma, H))
    R_pi = covering_kan_extension(M, covering)
    category = gamma.L.category
    return {
        "subsystem": resolution_dims(category, R_iota, maxdeg),
        "covering": resolution_dims(category, R_pi, maxdeg),
    }
