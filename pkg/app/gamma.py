"""The groups Gamma_p'(F) and Gamma_p(F), the labelling Theta-hat of the
linking system by Gamma, and the subsystems of index prime to p."""
import math
import re
from dataclasses import dataclass

import networkx as nx
import numpy as np
from sympy.combinatorics.fp_groups import FpGroup, coset_enumeration_r
from sympy.combinatorics.free_groups import free_group

from app.config import config
from app.errors import (
    AxiomViolation,
    CategoryNotConnected,
    CosetCapExceeded,
    SectionUnavailable,
    SubgroupSpecError,
    SurjectivityFailure,
)
from app.fusion import (
    FusionSystem,
    automorphism_group,
    check_saturation,
    generated_fusion_system,
)
from app.groups import (
    Subgroup,
    all_subgroups,
    double_cosets,
    generate_group,
    intersection,
    invert,
    left_cosets,
    quotient_group,
)
from app.linking import (
    LinkingSystem,
    check_linking_axioms,
    projection_functor,
)
from app.logging import get_logger

logger = get_logger()


@dataclass(frozen=True)
class PresentedGroup:
    """Generators are labelled by morphism ids; a relator is a tuple of
    nonzero ints, +-(i + 1) standing for generator i or its inverse."""

    generators: tuple
    relators: tuple

    def word(self, m: int) -> tuple:
        try:
            return (self.generators.index(m) + 1,)
        except ValueError:
            return ()


def free_reduce(word) -> tuple:
    reduced = []
    for letter in word:
        if reduced and reduced[-1] == -letter:
            reduced.pop()
        else:
            reduced.append(letter)
    return tuple(reduced)


def inverse_word(word) -> tuple:
    return tuple(-letter for letter in reversed(word))


def spanning_tree(C, base: int = 0) -> set:
    """Morphism ids of a spanning tree of the underlying graph of C."""
    graph = C.graph()
    if not C.is_connected():
        raise CategoryNotConnected(
            f"category {C.name!r} has {len(C.components())} components",
            witness={"components": C.components()},
        )
    tree = set()
    for u, v in nx.bfs_edges(graph, base):
        candidates = [
            m for m in C.hom(u, v) + C.hom(v, u) if not C.is_identity(m)
        ]
        tree.add(min(candidates))
    return tree


def pi1_presentation(C, base: int = 0, tree=None) -> PresentedGroup:
    """pi_1 of the nerve of C: one generator per non-tree, non-identity
    morphism, one relator per composable pair of non-identities."""
    if not C.is_connected():
        raise CategoryNotConnected(
            f"category {C.name!r} has {len(C.components())} components",
            witness={"components": C.components()},
        )
    if tree is None:
        tree = spanning_tree(C, base)
    generators = tuple(
        m
        for m in range(C.n_morphisms)
        if m not in tree and not C.is_identity(m)
    )
    presentation = PresentedGroup(generators, ())
    relators = set()
    for f in range(C.n_morphisms):
        if C.is_identity(f):
            continue
        for g in np.flatnonzero(C.table[:, f] >= 0):
            g = int(g)
            if C.is_identity(g):
                continue
            gf = int(C.table[g, f])
            relator = free_reduce(
                presentation.word(gf)
                + inverse_word(presentation.word(f))
                + inverse_word(presentation.word(g))
            )
            if relator:
                relators.add(relator)
    logger.debug(
        f"Presentation of pi_1|{C.name}|: {len(generators)} generators, "
        f"{len(relators)} relators"
    )
    return PresentedGroup(generators, tuple(sorted(relators)))


def todd_coxeter(P: PresentedGroup, coset_cap: int = None):
    """The presented group acting regularly on its elements.

    Returns the group and, for each generator, its element index.
    """
    if coset_cap is None:
        coset_cap = config.getint('coset_cap', 100000)
    n = len(P.generators)
    if n == 0:
        return generate_group([], degree=1), []
    F, *xs = free_group(", ".join(f"x{i}" for i in range(n)))
    relators = []
    for word in P.relators:
        element = F.identity
        for letter in word:
            element = element * xs[abs(letter) - 1] ** (1 if letter > 0 else -1)
        relators.append(element)
    try:
        table = coset_enumeration_r(FpGroup(F, relators), [], max_cosets=coset_cap)
    except ValueError as e:
        raise CosetCapExceeded(
            f"coset enumeration exceeded {coset_cap} cosets"
        ) from e
    table.compress()
    table.standardize()
    order = len(table.table)
    images = []
    for i in range(n):
        # right action of x_i on cosets; invert to get a left action
        right = tuple(table.table[alpha][2 * i] for alpha in range(order))
        images.append(invert(right))
    gamma = generate_group(images, degree=order)
    if gamma.order != order:
        raise AxiomViolation(
            f"regular representation has order {gamma.order}, expected {order}"
        )
    return gamma, [gamma.index[x] for x in images]


@dataclass(frozen=True)
class Section:
    """sigma: K/H -> Aut_{L_K}(S), one root morphism id per coset of H
    in K. Absolute sections have K = Gamma."""

    H: Subgroup
    K: Subgroup
    cosets: tuple
    elements: tuple

    @property
    def index(self) -> int:
        return len(self.cosets)

    def to_dict(self):
        return {
            "H": list(self.H.key),
            "K": list(self.K.key),
            "cosets": [list(c) for c in self.cosets],
            "elements": list(self.elements),
        }


@dataclass(frozen=True)
class DoubleCosetData:
    """One double coset HxK with x its least element, alpha an element of
    Aut_L(S) over x, W = H ∩ xKx^-1 and V = x^-1Hx ∩ K."""

    x: int
    alpha: int
    W: Subgroup
    V: Subgroup
    inner: Section
    block: tuple = ()


class GammaData:
    def __init__(self, L: LinkingSystem, gamma, presentation, Fc, pi_images, fc_theta):
        self.L = L
        self.F = L.F
        self.gamma = gamma
        self.presentation = presentation
        self.Fc = Fc
        self.pi_images = pi_images
        self.fc_theta = fc_theta
        self.theta_hat = fc_theta[pi_images]
        self._subgroups = None
        self._cosets = {}
        self._coset_index = {}
        self._subsystems = {}

    def __repr__(self):
        return f"GammaData(|Gamma|={self.gamma.order})"

    @property
    def whole(self) -> Subgroup:
        return self.gamma.whole

    @property
    def trivial(self) -> Subgroup:
        return self.gamma.trivial

    def theta(self, x: int) -> int:
        L = self.L
        return int(self.theta_hat[L.delta(L.s_index, x)])

    def subgroups(self) -> list:
        if self._subgroups is None:
            self._subgroups = all_subgroups(self.gamma.whole)
        return self._subgroups

    def subgroup(self, members) -> Subgroup:
        return Subgroup(self.gamma, frozenset(members))

    def cosets(self, H: Subgroup, K: Subgroup = None) -> tuple:
        """Left cosets of H inside K (default Gamma), by least element."""
        K = K if K is not None else self.whole
        key = (H.members, K.members)
        if key not in self._cosets:
            cosets = tuple(c for c in left_cosets(self.gamma, H) if c[0] in K.members)
            self._cosets[key] = cosets
            self._coset_index[key] = {
                g: i for i, c in enumerate(cosets) for g in c
            }
        return self._cosets[key]

    def coset_of(self, H: Subgroup, g: int, K: Subgroup = None) -> int:
        K = K if K is not None else self.whole
        self.cosets(H, K)
        return self._coset_index[(H.members, K.members)][g]

    def index(self, H: Subgroup, K: Subgroup = None) -> int:
        K = K if K is not None else self.whole
        return K.order // H.order

    def preimage(self, H: Subgroup) -> list:
        """Root morphism ids f with Theta-hat(f) in H."""
        return [
            m for m in range(self.L.n_morphisms)
            if int(self.theta_hat[m]) in H.members
        ]

    def subsystem(self, H: Subgroup):
        """(F_H, L_H), built once per subgroup."""
        if H.members not in self._subsystems:
            self._subsystems[H.members] = build_p_prime_subsystem(self.L, self, H)
        return self._subsystems[H.members]

    def aut_S(self) -> list:
        return self.L.aut_S()

    def lift(self, g: int) -> int:
        """The least alpha in Aut_L(S) with Theta-hat(alpha) = g."""
        for m in self.aut_S():
            if int(self.theta_hat[m]) == g:
                return m
        raise SectionUnavailable(f"no element of Aut_L(S) lies over {g}")

    def to_dict(self):
        return {
            "order": self.gamma.order,
            "generators": [list(g) for g in self.gamma.generators],
            "theta_hat": [int(t) for t in self.theta_hat],
            "subgroups": [list(H.key) for H in self.subgroups()],
        }


def gamma_p_prime(F: FusionSystem, L: LinkingSystem) -> GammaData:
    Fc, pi_images = projection_functor(L)
    s = L.s_index
    S = F.S
    position = {phi.key: i for i, phi in enumerate(Fc.homs)}
    tree = {
        position[(P.key, S.key, P.key)]
        for a, P in enumerate(L.objects)
        if a != s
    }
    presentation = pi1_presentation(Fc, base=s, tree=tree)
    gamma, generator_elements = todd_coxeter(presentation)
    fc_theta = np.zeros(Fc.n_morphisms, dtype=np.int64)
    for m, g in zip(presentation.generators, generator_elements):
        fc_theta[m] = g
    data = GammaData(L, gamma, presentation, Fc, pi_images, fc_theta)
    logger.info(f"Gamma_p' has order {gamma.order}")

    failures = check_theta_hat(data)
    if failures:
        raise AxiomViolation(
            "Theta-hat is not a functor killing inclusions", witness=failures[0]
        )
    image = {int(data.theta_hat[m]) for m in L.aut_S()}
    if len(image) != gamma.order:
        raise SurjectivityFailure(
            "Aut_L(S) does not surject onto Gamma_p'",
            witness={"image": sorted(image), "order": gamma.order},
        )
    if math.gcd(gamma.order, F.p) != 1 or any(data.theta(x) for x in S.key):
        raise AxiomViolation("Gamma_p' is not a p'-group receiving S trivially")
    if L.n_objects == 1 and gamma.order != len(F.aut(S)):
        raise AxiomViolation(
            f"one-object F^c with |Aut_F(S)|={len(F.aut(S))} but "
            f"|Gamma|={gamma.order}"
        )
    return data


def check_theta_hat(data: GammaData) -> list:
    failures = []
    L, Gm = data.L, data.gamma
    C = L.category
    theta = data.theta_hat
    for f in range(C.n_morphisms):
        for g in np.flatnonzero(C.table[:, f] >= 0):
            gf = C.table[g, f]
            if theta[gf] != Gm.mul(int(theta[g]), int(theta[f])):
                failures.append({"property": "functor", "g": int(g), "f": f})
    for a, P in enumerate(L.objects):
        for b, Q in enumerate(L.objects):
            if P <= Q and theta[L.inclusion(a, b)] != 0:
                failures.append({"property": "inclusion", "P": a, "Q": b})
    return failures


def hyperfocal_subgroup(F: FusionSystem) -> Subgroup:
    """O^p_F(S): normal closure in S of x^-1·alpha(x) over alpha in
    O^p(Aut_F(P)) and x in P, for all P <= S."""
    G, S, p = F.G, F.S, F.p
    generators = set()
    for P in F.subgroups:
        A, _ = automorphism_group(F, P)
        p_prime = [a for a in range(A.order) if math.gcd(A.element_order(a), p) == 1]
        for a in A.closure(p_prime):
            perm = A.elements[a]
            for x in P.key:
                image = P.key[perm[P.position[x]]]
                generators.add(G.mul(G.inv(x), image))
    generators.discard(0)
    conjugates = {G.conj(s, y) for s in S.key for y in generators}
    return G.subgroup(sorted(conjugates))


def gamma_p(F: FusionSystem):
    """Gamma_p(F) = S / O^p_F(S) as a permutation group on cosets."""
    N = hyperfocal_subgroup(F)
    quotient = quotient_group(F.S, N)
    if quotient.order * N.order != F.S.order:
        raise AxiomViolation("hyperfocal subgroup is not normal in S")
    logger.info(
        f"Hyperfocal subgroup of order {N.order}; Gamma_p has order "
        f"{quotient.order}"
    )
    return quotient


def build_p_prime_subsystem(L: LinkingSystem, gamma: GammaData, H: Subgroup):
    """(F_H, L_H): L_H has every object of L and the morphisms over H."""
    root = L.root
    ids = gamma.preimage(H)
    F = root.F
    F_H = generated_fusion_system(F.G, F.S, F.p, [root.pi(m) for m in ids])
    name = "L" if H.order == gamma.gamma.order else f"L_H{list(H.key)}"
    L_H = root.subsystem(ids, F=F_H, name=name)
    centric = {P.members for P in F_H.centric_subgroups()}
    if centric != set(root.object_index):
        raise AxiomViolation(
            "F_H-centric subgroups differ from the objects of L",
            witness={"H": list(H.key)},
        )
    failures = check_saturation(F_H) + check_linking_axioms(L_H)
    if failures:
        raise AxiomViolation(
            f"subsystem over H={list(H.key)} fails an axiom",
            witness=failures[0],
        )
    logger.info(
        f"Subsystem over H of order {H.order}: {L_H.n_morphisms} morphisms"
    )
    return F_H, L_H


def make_section(gamma: GammaData, H: Subgroup, K: Subgroup = None) -> Section:
    """The canonical section: least element of Aut_{L_K}(S) per coset."""
    return _section(gamma, H, K, lambda candidates: candidates[0])


def random_section(gamma: GammaData, H: Subgroup, rng, K: Subgroup = None):
    return _section(
        gamma, H, K, lambda candidates: candidates[int(rng.integers(len(candidates)))]
    )


def _section(gamma, H, K, choose):
    K = K if K is not None else gamma.whole
    if not H <= K:
        raise SubgroupSpecError(f"{H} is not contained in {K}")
    cosets = gamma.cosets(H, K)
    candidates = [[] for _ in cosets]
    for m in gamma.aut_S():
        t = int(gamma.theta_hat[m])
        if t in K.members:
            candidates[gamma.coset_of(H, t, K)].append(m)
    identity = gamma.L.category.identities[gamma.L.s_index]
    elements = []
    for i, options in enumerate(candidates):
        if not options:
            raise SectionUnavailable(
                f"no element of Aut_L(S) over coset {list(cosets[i])}"
            )
        elements.append(identity if i == 0 else choose(options))
    return Section(H, K, cosets, tuple(elements))


def compose_sections(gamma: GammaData, outer: Section, inner: Section) -> Section:
    """rho = sigma_a ∘ tau_b for an outer Gamma/K and inner K/H section."""
    if inner.K != outer.H:
        raise SubgroupSpecError("inner section must live in the outer subgroup")
    C = gamma.L.category
    Gm = gamma.gamma
    H, K = inner.H, outer.H
    cosets = gamma.cosets(H, outer.K)
    elements = []
    for coset in cosets:
        g = coset[0]
        sigma = outer.elements[gamma.coset_of(K, g, outer.K)]
        b = Gm.mul(Gm.inv(int(gamma.theta_hat[sigma])), g)
        tau = inner.elements[gamma.coset_of(H, b, K)]
        elements.append(C.compose(sigma, tau))
    return Section(H, outer.K, cosets, tuple(elements))


def double_coset_section(gamma: GammaData, H: Subgroup, K: Subgroup):
    """A section of Gamma/K adapted to the double cosets H\\Gamma/K.

    Coset zxK gets tau_z ∘ alpha_x, with tau the canonical section of
    H/W. Returns the section and the per double coset data.
    """
    Gm = gamma.gamma
    C = gamma.L.category
    cosets = gamma.cosets(K)
    elements = [None] * len(cosets)
    data = []
    for block in double_cosets(Gm, H, K):
        x = block[0]
        alpha = gamma.lift(x) if x else C.identities[gamma.L.s_index]
        x_inv = Gm.inv(x)
        W = intersection(H, gamma.subgroup(Gm.conj(x, k) for k in K.key))
        V = intersection(gamma.subgroup(Gm.conj(x_inv, h) for h in H.key), K)
        inner = make_section(gamma, W, H)
        for coset, tau in zip(inner.cosets, inner.elements):
            z = coset[0]
            elements[gamma.coset_of(K, Gm.mul(z, x))] = C.compose(tau, alpha)
        data.append(DoubleCosetData(x, alpha, W, V, inner, block))
    return Section(K, gamma.whole, cosets, tuple(elements)), data


def enumerate_GH(L: LinkingSystem, gamma: GammaData, H: Subgroup, a: int):
    """Components of the groupoid G_H(P), P = objects[a].

    Objects are the isomorphisms f: P -> P^f of L; f and f' are joined when
    f'∘f^-1 lies over H. Each component maps to the coset
    Theta-hat(f)^-1 H, and this map is checked to be a bijection onto
    Gamma/H.
    """
    C = L.category
    Gm = gamma.gamma
    isos = [
        m
        for b in range(L.n_objects)
        for m in C.hom(a, b)
        if C.inverses[m] >= 0
    ]
    graph = nx.Graph()
    graph.add_nodes_from(isos)
    for f in isos:
        f_inv = C.inverses[f]
        for f2 in isos:
            if f2 > f:
                chi = C.compose(f2, f_inv)
                if int(gamma.theta_hat[chi]) in H.members:
                    graph.add_edge(f, f2)
    components = []
    seen = {}
    for component in sorted(sorted(c) for c in nx.connected_components(graph)):
        labels = {
            gamma.coset_of(H, Gm.inv(int(gamma.theta_hat[f]))) for f in component
        }
        if len(labels) != 1:
            raise AxiomViolation(
                "component of G_H(P) meets several cosets",
                witness={"component": component},
            )
        label = labels.pop()
        if label in seen:
            raise AxiomViolation(
                "two components of G_H(P) over one coset",
                witness={"coset": label},
            )
        seen[label] = len(components)
        components.append(
            {
                "coset": label,
                "objects": [
                    (int(C.target[f]), int(f)) for f in component
                ],
            }
        )
    if len(components) != gamma.index(H):
        raise AxiomViolation(
            f"G_H(P) has {len(components)} components, index is "
            f"{gamma.index(H)}"
        )
    return components


FACTOR = re.compile(r"^a(\d+)(?:\^(-?\d+))?$")


def parse_subgroup_spec(gamma: GammaData, spec: str) -> Subgroup:
    """trivial | full | index:k | gens:w1,w2 where each word is a product
    of factors a<i> or a<i>^<n>, a<i> being the i-th element of Aut_L(S)."""
    spec = spec.strip()
    Gm = gamma.gamma
    if spec == "trivial":
        return gamma.trivial
    if spec == "full":
        return gamma.whole
    if spec.startswith("index:"):
        subgroups = gamma.subgroups()
        try:
            return subgroups[int(spec[len("index:"):])]
        except (ValueError, IndexError):
            raise SubgroupSpecError(
                f"`{spec}`: Gamma has {len(subgroups)} subgroups"
            ) from None
    if spec.startswith("gens:"):
        autos = gamma.aut_S()
        gens = []
        for word in spec[len("gens:"):].split(","):
            element = 0
            for factor in word.strip().split("*"):
                match = FACTOR.match(factor.strip())
                if not match or int(match.group(1)) >= len(autos):
                    raise SubgroupSpecError(f"invalid factor `{factor}`")
                g = int(gamma.theta_hat[autos[int(match.group(1))]])
                element = Gm.mul(element, Gm.power(g, int(match.group(2) or 1)))
            gens.append(element)
        return Gm.subgroup(gens)
    raise SubgroupSpecError(f"unknown subgroup spec `{spec}`")


def element_frame(L: LinkingSystem, s: int):
    """For s in Aut_L(S): per object P the object P^(s^-1), s restricted
    to P^(s^-1) -> P and s^-1 restricted to P -> P^(s^-1) (root ids)."""
    s_inv = L.category.inverse(s)
    moved = [L.image_object(s_inv, a) for a in range(L.n_objects)]
    lift = [L.restrict(s, b, a) for a, b in enumerate(moved)]
    drop = [L.restrict(s_inv, a, b) for a, b in enumerate(moved)]
    return moved, lift, drop


class SectionFrame:
    """A section's elements restricted to every object of L.

    For coset i and object a with P = objects[a]: ``moved[i][a]`` is the
    object P^(sigma_i^-1), ``lift[i][a]`` the root id of sigma_i restricted
    to P^(sigma_i^-1) -> P, and ``drop[i][a]`` the root id of sigma_i^-1
    restricted to P -> P^(sigma_i^-1).
    """

    def __init__(self, gamma: GammaData, section: Section):
        L = gamma.L
        self.gamma = gamma
        self.section = section
        self.theta = [int(gamma.theta_hat[s]) for s in section.elements]
        self.moved, self.lift, self.drop = [], [], []
        for s in section.elements:
            moved, lift, drop = element_frame(L, s)
            self.moved.append(moved)
            self.lift.append(lift)
            self.drop.append(drop)

    @property
    def index(self) -> int:
        return self.section.index

    def coset_of(self, g: int) -> int:
        section = self.section
        return self.gamma.coset_of(section.H, g, section.K)
