"""Exact arithmetic in fully enumerated permutation groups.

Permutations are tuples in array form: ``perm[i]`` is the image of ``i``.
Products compose right to left, ``compose(a, b)(i) == a[b[i]]``. Group
elements are addressed by their index in the BFS enumeration of the group;
index 0 is always the identity.
"""
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import isprime

from app.config import config
from app.errors import (
    DegreeMismatch,
    ElementCapExceeded,
    InputError,
    NotPCentric,
)
from app.logging import get_logger

logger = get_logger()

Perm = tuple[int, ...]

# groups above this order multiply by composing permutations on demand
TABLE_LIMIT = 2048


def compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[i] for i in b)


def invert(a: Perm) -> Perm:
    inverse = [0] * len(a)
    for i, x in enumerate(a):
        inverse[x] = i
    return tuple(inverse)


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def check_prime(p: int):
    if not isprime(p):
        raise InputError(f"{p} is not a prime")


class FiniteGroup:
    """A permutation group on {0..degree-1} with every element enumerated."""

    def __init__(self, degree: int, generators, elements):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}

    def __repr__(self):
        return f"FiniteGroup(degree={self.degree}, order={self.order})"

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _table(self):
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for a, x in enumerate(self.elements):
            for b, y in enumerate(self.elements):
                table[a, b] = self.index[compose(x, y)]
        return table

    @cached_property
    def _inverses(self):
        return tuple(self.index[invert(x)] for x in self.elements)

    def mul(self, a: int, b: int) -> int:
        if self.order <= TABLE_LIMIT:
            return int(self._table[a, b])
        return self.index[compose(self.elements[a], self.elements[b])]

    def inv(self, a: int) -> int:
        return self._inverses[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 0
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def closure(self, gens) -> frozenset:
        gens = [g for g in gens if g != 0]
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = self.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def subgroup(self, gens) -> "Subgroup":
        return Subgroup(self, self.closure(gens))

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, frozenset([0]))

    def word(self, element: int) -> str:
        """Disjoint-cycle notation of an element."""
        return cycle_string(self.elements[element])


def cycle_string(perm: Perm) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = perm[x]
        cycles.append("(" + " ".join(map(str, cycle)) + ")")
    return "".join(cycles) or "()"


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: frozenset

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.members == other.members
        )

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __repr__(self):
        return f"Subgroup(order={self.order}, members={list(self.key)})"

    def __contains__(self, x):
        return x in self.members

    def __iter__(self):
        return iter(self.key)

    def __len__(self):
        return len(self.members)

    def __le__(self, other):
        return self.members <= other.members

    def __lt__(self, other):
        return self.members < other.members

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def key(self) -> tuple:
        return tuple(sorted(self.members))

    @cached_property
    def sort_key(self) -> tuple:
        return (self.order, self.key)

    @cached_property
    def position(self) -> dict:
        return {x: i for i, x in enumerate(self.key)}

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, greedy over the sorted members."""
        gens, current = [], frozenset([0])
        for x in self.key:
            if x not in current:
                gens.append(x)
                current = self.parent.closure(gens)
        return tuple(gens)

    def is_p_group(self, p) -> bool:
        return p_part(self.order, p) == self.order


@dataclass(frozen=True, eq=False)
class GroupHom:
    """An explicit homomorphism between subgroups of one parent group.

    ``images`` is aligned with ``source.key``.
    """

    source: Subgroup
    target: Subgroup
    images: tuple

    def __eq__(self, other):
        return isinstance(other, GroupHom) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __call__(self, x: int) -> int:
        return self.images[self.source.position[x]]

    @cached_property
    def key(self) -> tuple:
        return (self.source.key, self.target.key, self.images)

    @cached_property
    def image(self) -> Subgroup:
        return Subgroup(self.source.parent, frozenset(self.images))

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_multiplicative(self) -> bool:
        G = self.source.parent
        return all(
            self(G.mul(x, y)) == G.mul(self(x), self(y))
            for x in self.source.generators
            for y in self.source.key
        )

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other"""
        return GroupHom(
            other.source, self.target, tuple(self(y) for y in other.images)
        )

    def restrict(self, source: Subgroup, target: Subgroup = None) -> "GroupHom":
        images = tuple(self(x) for x in source.key)
        if target is None:
            target = self.target
        return GroupHom(source, target, images)

    def corestrict(self, target: Subgroup) -> "GroupHom":
        return GroupHom(self.source, target, self.images)

    def inverse(self) -> "GroupHom":
        """Inverse of the isomorphism onto the image."""
        pairs = sorted(zip(self.images, self.source.key))
        return GroupHom(self.image, self.source, tuple(x for _, x in pairs))

    def is_identity(self) -> bool:
        return self.source == self.target and self.images == self.source.key

    def as_permutation(self) -> Perm:
        """For an automorphism: the induced permutation of member positions."""
        return tuple(self.source.position[y] for y in self.images)


def inclusion(P: Subgroup, Q: Subgroup) -> GroupHom:
    return GroupHom(P, Q, P.key)


def conjugation(G: FiniteGroup, g: int, P: Subgroup, Q: Subgroup = None):
    """c_g restricted to P, landing in Q (default gPg^-1)."""
    images = tuple(G.conj(g, x) for x in P.key)
    if Q is None:
        Q = Subgroup(G, frozenset(images))
    return GroupHom(P, Q, images)


def generate_group(generators, degree: int = None, cap: int = None):
    """Closure of permutations given in array form.

    Elements are ordered by BFS discovery from the identity, multiplying on
    the right by the generators in the order given.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    degrees = {len(g) for g in gens}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) > 1:
        raise DegreeMismatch(
            f"generators act on different degrees: {sorted(degrees)}"
        )
    n = degrees.pop() if degrees else 0
    for g in gens:
        if sorted(g) != list(range(n)):
            raise InputError(f"not a permutation of 0..{n - 1}: {g}")
    if cap is None:
        cap = config.getint('element_cap', 100000)

    identity = identity_perm(n)
    elements, seen = [identity], {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(x, s)
            if y not in seen:
                if len(elements) >= cap:
                    raise ElementCapExceeded(
                        f"group closure exceeds {cap} elements"
                    )
                seen.add(y)
                elements.append(y)
                queue.append(y)
    logger.debug(f"Generated group of order {len(elements)} on {n} points")
    return FiniteGroup(n, gens, elements)


def transporter(G: FiniteGroup, P: Subgroup, Q: Subgroup) -> tuple:
    """N_G(P,Q) = {g : gPg^-1 <= Q}, in element order."""
    return tuple(
        g
        for g in range(G.order)
        if all(G.conj(g, x) in Q.members for x in P.generators)
    )


def normalizer(G: FiniteGroup, P: Subgroup) -> Subgroup:
    return Subgroup(G, frozenset(transporter(G, P, P)))


def centralizer(G: FiniteGroup, P: Subgroup, within: Subgroup = None):
    candidates = within.key if within is not None else range(G.order)
    return Subgroup(
        G,
        frozenset(
            g
            for g in candidates
            if all(G.mul(g, x) == G.mul(x, g) for x in P.generators)
        ),
    )


def center(P: Subgroup) -> Subgroup:
    return centralizer(P.parent, P, within=P)


def conjugate(G: FiniteGroup, g: int, P: Subgroup) -> Subgroup:
    return Subgroup(G, frozenset(G.conj(g, x) for x in P.members))


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.parent, A.members & B.members)


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    return A.parent.subgroup(A.generators + B.generators)


def all_subgroups(S: Subgroup) -> list:
    """Every subgroup of S, by closing cyclic subgroups under joins."""
    G = S.parent
    cyclic = {}
    for x in S.key:
        C = G.subgroup([x])
        cyclic.setdefault(C.members, C)
    found = dict(cyclic)
    frontier = list(cyclic.values())
    while frontier:
        fresh = []
        for A in frontier:
            for B in cyclic.values():
                if B <= A:
                    continue
                J = join(A, B)
                if J.members not in found:
                    found[J.members] = J
                    fresh.append(J)
        frontier = fresh
    subgroups = sorted(found.values(), key=lambda H: H.sort_key)
    for H in subgroups:
        assert S.order % H.order == 0, "Lagrange violated"
    return subgroups


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """The first Sylow p-subgroup met by growing a p-subgroup inside its
    normalizer, scanning elements in index order."""
    target = p_part(G.order, p)
    P = G.trivial
    while P.order < target:
        N = normalizer(G, P)
        for g in N.key:
            if g not in P.members and G.power(g, p) in P.members:
                P = G.subgroup(P.generators + (g,))
                break
        else:
            raise AssertionError("no p-element in N_G(P)/P")
    return P


def p_prime_complement(C: Subgroup, P: Subgroup, p: int) -> Subgroup:
    """C'_G(P) for C = C_G(P): the elements of order prime to p.

    Raises NotPCentric when they do not complement Z(P) in C.
    """
    G = C.parent
    members = frozenset(
        c for c in C.key if math.gcd(G.element_order(c), p) == 1
    )
    Z = center(P)
    if G.closure(members) != members or Z.order * len(members) != C.order:
        raise NotPCentric(
            f"Z(P) of order {Z.order} is not a Sylow {p}-subgroup of "
            f"C_G(P) of order {C.order}",
            witness={"P": list(P.key), "C": list(C.key)},
        )
    return Subgroup(G, members)


def is_p_centric(G: FiniteGroup, P: Subgroup, p: int) -> bool:
    """Z(P) is a Sylow p-subgroup of C_G(P)."""
    C = centralizer(G, P)
    return center(P).order == p_part(C.order, p)


def left_cosets(G: FiniteGroup, H: Subgroup) -> list:
    """Left cosets gH as sorted tuples, ordered by least element."""
    cosets, seen = [], set()
    for g in range(G.order):
        if g in seen:
            continue
        coset = tuple(sorted(G.mul(g, h) for h in H.key))
        seen.update(coset)
        cosets.append(coset)
    return cosets


def double_cosets(G: FiniteGroup, H: Subgroup, K: Subgroup) -> list:
    """Double cosets HxK as sorted tuples, ordered by least element."""
    result, seen = [], set()
    for x in range(G.order):
        if x in seen:
            continue
        block = sorted(
            {G.mul(G.mul(h, x), k) for h in H.key for k in K.key}
        )
        seen.update(block)
        result.append(tuple(block))
    return result


def quotient_group(S: Subgroup, N: Subgroup) -> FiniteGroup:
    """S/N as the permutation group of S acting on the cosets of N."""
    G = S.parent
    cosets = []
    lookup = {}
    for s in S.key:
        if s in lookup:
            continue
        coset = tuple(sorted(G.mul(s, n) for n in N.key))
        for x in coset:
            lookup[x] = len(cosets)
        cosets.append(coset)
    gens = [
        tuple(lookup[G.mul(s, coset[0])] for coset in cosets)
        for s in S.generators
    ]
    return generate_group(gens, degree=len(cosets))
