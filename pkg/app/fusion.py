"""Fusion systems over a Sylow subgroup: construction, classification of
subgroups and the saturation axioms."""
from dataclasses import dataclass

from app.category import FiniteCategory
from app.errors import AxiomViolation, InputError
from app.groups import (
    GroupHom,
    Subgroup,
    all_subgroups,
    centralizer,
    check_prime,
    conjugate,
    conjugation,
    generate_group,
    normalizer,
    p_part,
    sylow_subgroup,
    transporter,
)
from app.logging import get_logger

logger = get_logger()


@dataclass(frozen=True)
class SubgroupClass:
    fully_normalized: bool
    fully_centralized: bool
    centric: bool
    radical: bool
    conjugacy_class: tuple

    def to_dict(self):
        return {
            "fully_normalized": self.fully_normalized,
            "fully_centralized": self.fully_centralized,
            "centric": self.centric,
            "radical": self.radical,
            "class_size": len(self.conjugacy_class),
        }


class FusionSystem:
    """A fusion system over S, stored as explicit hom sets.

    ``homs[(i, j)]`` lists the morphisms subgroups[i] -> subgroups[j].
    ``representatives[(i, j)]`` holds a transporter element per hom when
    the system comes from a group, and is None otherwise.
    """

    def __init__(self, G, S, p, subgroups, homs, representatives=None):
        self.G = G
        self.S = S
        self.p = p
        self.subgroups = tuple(subgroups)
        self.homs = homs
        self.representatives = representatives
        self._index = {P.members: i for i, P in enumerate(self.subgroups)}
        self._classes = {}

    def __repr__(self):
        return (
            f"FusionSystem(|S|={self.S.order}, p={self.p}, "
            f"subgroups={len(self.subgroups)})"
        )

    def index_of(self, P: Subgroup) -> int:
        try:
            return self._index[P.members]
        except KeyError:
            raise InputError(f"{P} is not a subgroup of S") from None

    def subgroup_at(self, members) -> Subgroup:
        return self.subgroups[self._index[frozenset(members)]]

    def hom_set(self, P: Subgroup, Q: Subgroup) -> tuple:
        return self.homs[(self.index_of(P), self.index_of(Q))]

    def aut(self, P: Subgroup) -> tuple:
        return self.hom_set(P, P)

    def aut_S(self, P: Subgroup) -> set:
        """Aut_S(P) as a set of image tuples."""
        G = self.G
        return {
            tuple(G.conj(s, x) for x in P.key)
            for s in self.S.key
            if conjugate(G, s, P) == P
        }

    def normalizer_order(self, P: Subgroup) -> int:
        return sum(1 for s in self.S.key if conjugate(self.G, s, P) == P)

    def centralizer_in_S(self, P: Subgroup) -> Subgroup:
        return centralizer(self.G, P, within=self.S)

    def conjugacy_class(self, P: Subgroup) -> tuple:
        images = {phi.image for phi in self.hom_set(P, self.S)}
        return tuple(sorted(images, key=lambda Q: Q.sort_key))

    def classify(self, P: Subgroup) -> SubgroupClass:
        if P.members not in self._classes:
            self._classes[P.members] = classify_subgroup(self, P)
        return self._classes[P.members]

    def centric_subgroups(self) -> list:
        return [P for P in self.subgroups if self.classify(P).centric]


def build_fusion(G, p: int) -> FusionSystem:
    """F_S(G) over the Sylow subgroup chosen by ``sylow_subgroup``."""
    check_prime(p)
    if G.order % p:
        raise InputError(f"p={p} does not divide |G|={G.order}")
    S = sylow_subgroup(G, p)
    subgroups = all_subgroups(S)
    logger.info(
        f"Sylow {p}-subgroup of order {S.order} with {len(subgroups)} "
        f"subgroups"
    )
    homs, representatives = {}, {}
    for i, P in enumerate(subgroups):
        for j, Q in enumerate(subgroups):
            if Q.order < P.order:
                homs[(i, j)], representatives[(i, j)] = (), ()
                continue
            seen, maps, reps = set(), [], []
            for g in transporter(G, P, Q):
                phi = conjugation(G, g, P, Q)
                if phi.images not in seen:
                    seen.add(phi.images)
                    maps.append(phi)
                    reps.append(g)
            homs[(i, j)] = tuple(maps)
            representatives[(i, j)] = tuple(reps)
    F = FusionSystem(G, S, p, subgroups, homs, representatives)
    failures = check_fusion_axioms(F)
    if failures:
        raise AxiomViolation("fusion system axioms fail", witness=failures[0])
    return F


def generated_fusion_system(G, S, p, seeds) -> FusionSystem:
    """The fusion system over S generated by the given homs.

    ``seeds`` are GroupHom values between subgroups of S; the result is the
    closure under restriction and composition.
    """
    subgroups = all_subgroups(S)
    maps = {P.members: set() for P in subgroups}
    for P in subgroups:
        maps[P.members].add(P.key)
    for phi in seeds:
        for P in subgroups:
            if P <= phi.source:
                maps[P.members].add(tuple(phi(x) for x in P.key))
    lookup = {P.members: P for P in subgroups}
    changed = True
    while changed:
        changed = False
        for P in subgroups:
            for images in list(maps[P.members]):
                image = lookup[frozenset(images)]
                for outer in list(maps[image.members]):
                    position = image.position
                    composite = tuple(outer[position[y]] for y in images)
                    if composite not in maps[P.members]:
                        maps[P.members].add(composite)
                        changed = True
    homs = {}
    for i, P in enumerate(subgroups):
        for j, Q in enumerate(subgroups):
            homs[(i, j)] = tuple(
                GroupHom(P, Q, images)
                for images in sorted(maps[P.members])
                if set(images) <= Q.members
            )
    F = FusionSystem(G, S, p, subgroups, homs)
    failures = check_fusion_axioms(F)
    if failures:
        raise AxiomViolation("fusion system axioms fail", witness=failures[0])
    return F


def check_fusion_axioms(F: FusionSystem) -> list:
    """Hom_S <= Hom_F <= Inj, factorization through images, and closure
    under composition."""
    failures = []
    G, S = F.G, F.S
    index = {(i, j): {phi.images for phi in maps} for (i, j), maps in F.homs.items()}
    for (i, j), maps in F.homs.items():
        P, Q = F.subgroups[i], F.subgroups[j]
        for s in transporter(G, P, Q):
            if s in S.members and conjugation(G, s, P, Q).images not in index[(i, j)]:
                failures.append(
                    {"axiom": "Hom_S <= Hom_F", "P": list(P.key), "Q": list(Q.key), "s": s}
                )
                break
        for phi in maps:
            if not phi.is_injective() or not phi.is_multiplicative():
                failures.append(
                    {"axiom": "injective hom", "P": list(P.key), "images": list(phi.images)}
                )
                continue
            k = F.index_of(phi.image)
            if phi.images not in index[(i, k)]:
                failures.append(
                    {"axiom": "factors through image", "P": list(P.key), "images": list(phi.images)}
                )
            inverse = phi.inverse()
            if inverse.images not in index[(k, i)]:
                failures.append(
                    {"axiom": "inverse of isomorphism", "P": list(P.key), "images": list(phi.images)}
                )
        for (j2, k), outer in F.homs.items():
            if j2 != j:
                continue
            for phi in maps:
                for psi in outer:
                    if psi.compose(phi).images not in index[(i, k)]:
                        failures.append(
                            {
                                "axiom": "closed under composition",
                                "P": list(P.key),
                                "phi": list(phi.images),
                                "psi": list(psi.images),
                            }
                        )
    return failures


def automorphism_group(F: FusionSystem, P: Subgroup):
    """Aut_F(P) as a permutation group on the positions of P's members.

    Returns the group and the permutation of each hom of ``F.aut(P)``.
    """
    perms = [phi.as_permutation() for phi in F.aut(P)]
    A = generate_group(perms, degree=P.order)
    return A, perms


def o_p(A, p: int):
    """O_p(A): the intersection of the conjugates of a Sylow p-subgroup."""
    T = sylow_subgroup(A, p)
    core = set(T.members)
    for a in range(A.order):
        core &= conjugate(A, a, T).members
    return frozenset(core)


def classify_subgroup(F: FusionSystem, P: Subgroup) -> SubgroupClass:
    G, S, p = F.G, F.S, F.p
    members = F.conjugacy_class(P)
    normalizer_orders = [F.normalizer_order(Q) for Q in members]
    centralizers = [F.centralizer_in_S(Q) for Q in members]
    own = F.normalizer_order(P)
    own_centralizer = F.centralizer_in_S(P).order
    centric = all(C <= Q for C, Q in zip(centralizers, members))

    A, _ = automorphism_group(F, P)
    inner = frozenset(
        A.index[conjugation(G, x, P, P).as_permutation()] for x in P.key
    )
    radical = o_p(A, p) == inner
    return SubgroupClass(
        fully_normalized=own >= max(normalizer_orders),
        fully_centralized=own_centralizer >= max(C.order for C in centralizers),
        centric=centric,
        radical=radical,
        conjugacy_class=members,
    )


def check_saturation(F: FusionSystem) -> list:
    """Failures of the saturation axioms (empty when saturated).

    Axiom I: each fully normalized P is fully centralized and Aut_S(P) is a
    Sylow subgroup of Aut_F(P). Axiom II: each phi with fully centralized
    image extends to N_phi.
    """
    failures = []
    G, S, p = F.G, F.S, F.p
    for P in F.subgroups:
        flags = F.classify(P)
        if flags.fully_normalized:
            aut_order = len(F.aut(P))
            aut_s = len(F.aut_S(P))
            if not flags.fully_centralized:
                failures.append(
                    {"axiom": "I", "reason": "not fully centralized", "P": list(P.key)}
                )
            if aut_s != p_part(aut_order, p):
                failures.append(
                    {
                        "axiom": "I",
                        "reason": "Aut_S(P) not Sylow in Aut_F(P)",
                        "P": list(P.key),
                        "aut_S": aut_s,
                        "aut_F": aut_order,
                    }
                )
    for P in F.subgroups:
        N_S = normalizer(G, P).members & S.members
        for phi in F.hom_set(P, S):
            image = phi.image
            if not F.classify(image).fully_centralized:
                continue
            target_auts = F.aut_S(image)
            inverse = phi.inverse()
            n_phi = [
                g
                for g in sorted(N_S)
                if tuple(phi(G.conj(g, inverse(y))) for y in image.key)
                in target_auts
            ]
            N = F.subgroup_at(n_phi)
            if not any(
                tuple(psi(x) for x in P.key) == phi.images
                for psi in F.hom_set(N, S)
            ):
                failures.append(
                    {
                        "axiom": "II",
                        "P": list(P.key),
                        "phi": list(phi.images),
                        "N_phi": list(N.key),
                    }
                )
    return failures


def fusion_category(F: FusionSystem, objects) -> FiniteCategory:
    """The full subcategory of F on the given subgroups (e.g. F^c)."""
    objects = list(objects)
    position = {P.members: a for a, P in enumerate(objects)}
    morphisms = []
    for a, P in enumerate(objects):
        for b, Q in enumerate(objects):
            for phi in F.hom_set(P, Q):
                morphisms.append((a, b, phi.key))
    homs = {
        phi.key: phi
        for P in objects
        for Q in objects
        for phi in F.hom_set(P, Q)
    }

    def compose(g_key, f_key):
        return homs[g_key].compose(homs[f_key]).key

    labels = [str(list(P.key)) for P in objects]
    category = FiniteCategory.from_morphisms(
        labels, morphisms, compose, name="F^c"
    )
    category.homs = tuple(homs[m[2]] for m in morphisms)
    category.object_position = position
    return category
