"""Centric linking systems of realizable fusion systems.

Objects are the F-centric subgroups of S. A morphism P -> Q is a coset
g·C'_G(P) of an element of the transporter N_G(P, Q), stored through its
least element. Composition multiplies representatives.
"""
from dataclasses import dataclass

import numpy as np

from app.category import FiniteCategory
from app.errors import (
    AxiomViolation,
    ImageNotContained,
    InputError,
    NotAnObject,
    NotPCentric,
)
from app.fusion import FusionSystem, fusion_category
from app.groups import (
    Subgroup,
    center,
    centralizer,
    conjugate,
    conjugation,
    inclusion,
    is_p_centric,
    p_prime_complement,
    transporter,
)
from app.logging import get_logger

logger = get_logger()


@dataclass(frozen=True)
class LMorphism:
    source: int
    target: int
    representative: int
    coset: frozenset

    def to_dict(self):
        return {
            "source": self.source,
            "target": self.target,
            "representative": self.representative,
        }


class LinkingSystem:
    """A linking system, or a subsystem of one sharing its objects.

    ``root`` is the linking system the morphisms were numbered in and
    ``embedding[i]`` is the root id of local morphism i (the identity map
    for a root).
    """

    def __init__(
        self,
        F: FusionSystem,
        objects,
        complements,
        morphisms,
        category: FiniteCategory,
        root=None,
        embedding=None,
    ):
        self.F = F
        self.G = F.G
        self.p = F.p
        self.objects = tuple(objects)
        self.complements = tuple(complements)
        self.morphisms = tuple(morphisms)
        self.category = category
        self.root = root if root is not None else self
        if embedding is None:
            embedding = np.arange(len(self.morphisms), dtype=np.int64)
        self.embedding = np.asarray(embedding, dtype=np.int64)
        self.object_index = {P.members: a for a, P in enumerate(self.objects)}
        self._lookup = {
            (m.source, m.target, m.representative): i
            for i, m in enumerate(self.morphisms)
        }
        self._local = {int(r): i for i, r in enumerate(self.embedding)}
        self._restrictions = {}

    def __repr__(self):
        return (
            f"LinkingSystem({self.category.name!r}, "
            f"objects={self.n_objects}, morphisms={self.n_morphisms})"
        )

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    @property
    def is_root(self) -> bool:
        return self.root is self

    @property
    def s_index(self) -> int:
        return self.object_index[self.F.S.members]

    def object_of(self, P: Subgroup) -> int:
        try:
            return self.object_index[P.members]
        except KeyError:
            raise NotAnObject(
                f"{P} is not an object of the linking system"
            ) from None

    def canonical(self, a: int, g: int) -> int:
        """Least element of g·C'_G(P) for P = objects[a]."""
        G = self.G
        return min(G.mul(g, c) for c in self.complements[a].key)

    def find(self, a: int, b: int, g: int) -> int:
        """Id of the morphism a -> b through g, or -1 when it is not here."""
        return self._lookup.get((a, b, self.canonical(a, g)), -1)

    def morphism(self, a: int, b: int, g: int) -> int:
        m = self.find(a, b, g)
        if m < 0:
            raise InputError(
                f"element {g} gives no morphism {a} -> {b} in {self!r}"
            )
        return m

    def local_id(self, root_id: int) -> int:
        """Local id of a root morphism, or -1 when it is not here."""
        return self._local.get(int(root_id), -1)

    def delta(self, a: int, x: int) -> int:
        """delta_P(x) for x in P = objects[a]."""
        if x not in self.objects[a].members:
            raise InputError(f"{x} is not an element of object {a}")
        return self.morphism(a, a, x)

    def inclusion(self, a: int, b: int) -> int:
        if not self.objects[a] <= self.objects[b]:
            raise InputError(f"object {a} is not contained in object {b}")
        return self.morphism(a, b, 0)

    def pi(self, m: int):
        f = self.morphisms[m]
        return conjugation(
            self.G,
            f.representative,
            self.objects[f.source],
            self.objects[f.target],
        )

    def image_object(self, m: int, a: int) -> int:
        """Object index of P'^f = rep·P'·rep^-1."""
        rep = self.morphisms[m].representative
        return self.object_of(conjugate(self.G, rep, self.objects[a]))

    def aut_S(self) -> list:
        s = self.s_index
        return self.category.hom(s, s)

    def restrict(self, m: int, a: int, b: int) -> int:
        """The unique morphism objects[a] -> objects[b] restricting m."""
        key = (m, a, b)
        if key not in self._restrictions:
            f = self.morphisms[m]
            P, Q = self.objects[a], self.objects[b]
            if not P <= self.objects[f.source]:
                raise InputError(
                    f"object {a} is not contained in the source of {m}"
                )
            if not Q <= self.objects[f.target]:
                raise InputError(
                    f"object {b} is not contained in the target of {m}"
                )
            if not conjugate(self.G, f.representative, P) <= Q:
                raise ImageNotContained(
                    f"the image of object {a} under morphism {m} is not "
                    f"contained in object {b}",
                    witness={"morphism": m, "source": a, "target": b},
                )
            self._restrictions[key] = self.morphism(a, b, f.representative)
        return self._restrictions[key]

    def subsystem(self, root_ids, F: FusionSystem = None, name=""):
        """The subsystem on all objects with the given root morphisms."""
        root = self.root
        category, embedding = root.category.subcategory(root_ids, name=name)
        morphisms = [root.morphisms[int(r)] for r in embedding]
        return LinkingSystem(
            F if F is not None else root.F,
            root.objects,
            root.complements,
            morphisms,
            category,
            root=root,
            embedding=embedding,
        )

    def to_dict(self):
        return {
            "objects": [list(P.key) for P in self.objects],
            "morphisms": [m.to_dict() for m in self.morphisms],
        }


def restrict_morphism(L: LinkingSystem, m: int, P: Subgroup, Q: Subgroup):
    """The restriction of morphism m to P -> Q, both objects of L."""
    return L.restrict(m, L.object_of(P), L.object_of(Q))


def build_linking(F: FusionSystem) -> LinkingSystem:
    if F.representatives is None:
        raise InputError("a linking system needs a fusion system of a group")
    G, p = F.G, F.p
    objects = F.centric_subgroups()
    for P in F.subgroups:
        if (P in objects) != is_p_centric(G, P, p):
            raise NotPCentric(
                f"F-centricity and p-centricity disagree on {P}",
                witness={"P": list(P.key)},
            )
    complements = [p_prime_complement(centralizer(G, P), P, p) for P in objects]

    morphisms = []
    for a, P in enumerate(objects):
        C = complements[a]
        for b, Q in enumerate(objects):
            seen = set()
            for g in transporter(G, P, Q):
                if g in seen:
                    continue
                coset = frozenset(G.mul(g, c) for c in C.key)
                seen |= coset
                morphisms.append(LMorphism(a, b, min(coset), coset))
    morphisms.sort(key=lambda f: (f.source, f.target, f.representative))

    lookup = {(f.source, f.target, f.representative): f for f in morphisms}

    def compose(g_key, f_key):
        h = lookup[g_key]
        rep = G.mul(h.representative, f_key[2])
        a = f_key[0]
        return (a, g_key[1], min(G.mul(rep, c) for c in complements[a].key))

    labels = [str(list(P.key)) for P in objects]
    category = FiniteCategory.from_morphisms(
        labels,
        [(f.source, f.target, (f.source, f.target, f.representative)) for f in morphisms],
        compose,
        name="L",
    )
    L = LinkingSystem(F, objects, complements, morphisms, category)
    logger.info(
        f"Linking system: {L.n_objects} objects, {L.n_morphisms} morphisms"
    )
    failures = check_linking_axioms(L)
    if failures:
        raise AxiomViolation(
            f"{len(failures)} linking axiom failures", witness=failures[0]
        )
    return L


def projection_functor(L: LinkingSystem):
    """pi: L -> F^c as the category F^c plus an array of morphism ids."""
    Fc = fusion_category(L.root.F, L.objects)
    position = {phi.key: i for i, phi in enumerate(Fc.homs)}
    images = np.array(
        [position[L.pi(m).key] for m in range(L.n_morphisms)], dtype=np.int64
    )
    return Fc, images


def check_linking_axioms(L: LinkingSystem) -> list:
    """Axioms (A), (B), (C), the inclusions and functoriality of pi."""
    failures = []
    G = L.G
    C = L.category
    pis = [L.pi(m).key for m in range(L.n_morphisms)]
    for a, P in enumerate(L.objects):
        Z = center(P)
        centre_ids = [L.delta(a, z) for z in Z.key]
        for b, Q in enumerate(L.objects):
            hom = C.hom(a, b)
            homs_F = L.F.hom_set(P, Q)
            if len(hom) != Z.order * len(homs_F):
                failures.append(
                    {
                        "axiom": "A",
                        "reason": "|Mor(P,Q)| != |Z(P)|·|Hom_F(P,Q)|",
                        "P": a,
                        "Q": b,
                        "morphisms": len(hom),
                        "homs": len(homs_F),
                    }
                )
            if {pis[m] for m in hom} != {phi.key for phi in homs_F}:
                failures.append(
                    {"axiom": "A", "reason": "pi is not onto Hom_F(P,Q)", "P": a, "Q": b}
                )
            for m in hom:
                orbit = {C.compose(m, z) for z in centre_ids}
                if len(orbit) != Z.order or {pis[k] for k in orbit} != {pis[m]}:
                    failures.append(
                        {"axiom": "A", "reason": "Z(P) does not act freely", "morphism": m}
                    )
                phi = L.pi(m)
                for x in P.generators:
                    left = C.compose(m, L.delta(a, x))
                    right = C.compose(L.delta(b, phi(x)), m)
                    if left != right:
                        failures.append(
                            {"axiom": "C", "morphism": m, "x": x}
                        )
        for x in P.key:
            if pis[L.delta(a, x)] != conjugation(G, x, P, P).key:
                failures.append({"axiom": "B", "P": a, "x": x})
    for a, P in enumerate(L.objects):
        for b, Q in enumerate(L.objects):
            if not P <= Q:
                continue
            i_ab = L.inclusion(a, b)
            if pis[i_ab] != inclusion(P, Q).key:
                failures.append({"axiom": "inclusion", "P": a, "Q": b})
            for c, R in enumerate(L.objects):
                if Q <= R and C.compose(L.inclusion(b, c), i_ab) != L.inclusion(a, c):
                    failures.append(
                        {"axiom": "inclusions compose", "P": a, "Q": b, "R": c}
                    )
    s = L.s_index
    if L.inclusion(s, s) != C.identities[s]:
        failures.append({"axiom": "inclusion", "reason": "iota_S^S != id"})
    morphism_homs = [L.pi(m) for m in range(L.n_morphisms)]
    for f in range(L.n_morphisms):
        for g in np.flatnonzero(C.table[:, f] >= 0):
            gf = int(C.table[g, f])
            if pis[gf] != morphism_homs[g].compose(morphism_homs[f]).key:
                failures.append({"axiom": "pi functorial", "g": int(g), "f": f})
    return failures
