"""Independent reference computations.

None of these go through the linking system machinery beyond reading
group elements off morphisms; they only use group multiplication, the
classifying category B(G) and the two cohomology engines.
"""
import numpy as np

from app.category import classifying_category
from app.coefficients import constant_system
from app.cohomology import (
    CochainComplex,
    SparseBuilder,
    cohomology,
    functor_pullback,
    induced_map,
)
from app.errors import InputError
from app.groups import generate_group
from app.linalg import nullspace_mod_p
from app.logging import get_logger
from app.resolution import resolution_dims

logger = get_logger()


def group_dims(G, p: int, maxdeg: int) -> list:
    """dim H^n(B(G); F_p) from a projective resolution over F_p[G]."""
    BG = classifying_category(G)
    return resolution_dims(BG, constant_system(BG, 1, p), maxdeg)


def subgroup_as_group(S):
    """S as a FiniteGroup of its own, plus the map parent index -> index."""
    G = S.parent
    H = generate_group([G.elements[x] for x in S.generators], degree=G.degree)
    position = {x: H.index[G.elements[x]] for x in S.key}
    return H, position


def invariant_dims(F, maxdeg: int) -> list:
    """dim H^n(B(S); F_p)^(Aut_F(S)) for abelian S.

    For abelian S this is H^n(G; F_p), since S controls fusion in G.
    """
    S, p = F.S, F.p
    G = F.G
    if any(G.mul(x, y) != G.mul(y, x) for x in S.generators for y in S.generators):
        raise InputError("the invariant oracle needs an abelian Sylow subgroup")
    SG, position = subgroup_as_group(S)
    back = {v: k for k, v in position.items()}
    BS = classifying_category(SG, name="B(S)")
    complex_ = CochainComplex(constant_system(BS, 1, p))
    result = cohomology(complex_, maxdeg)
    dims = []
    for n in range(maxdeg + 1):
        conditions = []
        for phi in F.aut(S):
            morphism_map = [position[phi(back[y])] for y in range(SG.order)]
            op = functor_pullback(complex_, complex_, [0] if n == 0 else morphism_map, n)
            A = induced_map(op, result, result, n)
            conditions.append((A - np.eye(result.dims[n], dtype=np.int64)) % p)
        if result.dims[n] == 0:
            dims.append(0)
            continue
        dims.append(nullspace_mod_p(np.vstack(conditions), p).shape[1])
    logger.info(f"Aut_F(S)-invariants of H^*(B(S); F_{p}): {dims}")
    return dims


def classical_transfer(source: CochainComplex, target: CochainComplex, n: int):
    """The group cohomology transfer C^n(B(N); F_p^d) -> C^n(B(G); F_p^d)
    on a one-object linking system with trivial C'_G(S), morphisms being
    read as the elements of N_G(S).

    A chain (m1, ..., mn) is the homogeneous tuple y_j = m_n...m_(j+1)
    (y_n = 1). With rho(g) = g r^-1, r the chosen representative of the
    right coset Ng,

        Tr(f)(y) = sum over representatives t of f(rho(t y_0), ..., rho(t y_n)).
    """
    L_G, L_N = target.linking, source.linking
    if L_G.n_objects != 1 or any(C.order != 1 for C in L_G.complements):
        raise InputError("the classical oracle needs one object and trivial C'")
    G = L_G.G
    root = L_G.root
    element_of = [root.morphisms[int(r)].representative for r in L_G.embedding]
    N_local = {
        root.morphisms[int(r)].representative: k
        for k, r in enumerate(L_N.embedding)
    }
    N = set(N_local)
    representative = {}
    for g in element_of:
        if g not in representative:
            coset = {G.mul(h, g) for h in N}
            r = min(coset)
            for x in coset:
                representative[x] = r
    reps = sorted(set(representative.values()))

    def rho(g):
        return G.mul(g, G.inv(representative[g]))

    tb, sb = target.basis(n), source.basis(n)
    t_off, s_off = target.offsets(n), source.offsets(n)
    d = source.M.dims[0]
    builder = SparseBuilder((target.dim(n), source.dim(n)))
    for k, chain in enumerate(tb.chains):
        y = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            y[j] = G.mul(y[j + 1], element_of[chain[j]])
        for t in reps:
            z = [rho(G.mul(t, x)) for x in y]
            w = [G.mul(G.inv(z[n]), x) for x in z]
            if n == 0:
                image = (0,)
            else:
                arrows = [G.mul(G.inv(w[j + 1]), w[j]) for j in range(n)]
                if 0 in arrows:
                    continue
                image = tuple(N_local[x] for x in arrows)
            j = sb.position[image]
            builder.identity(int(t_off[k]), int(s_off[j]), d)
    return builder.build(source.p)


def classical_transfer_maps(ctx, H, maxdeg: int) -> list:
    """Matrices of the classical transfer H^n(L_H) -> H^n(L), n <= maxdeg."""
    source, target = ctx.complex(H), ctx.complex(ctx.gamma.whole)
    return [
        induced_map(
            classical_transfer(source, target, n),
            ctx.result(H),
            ctx.result(ctx.gamma.whole),
            n,
        )
        for n in range(maxdeg + 1)
    ]
