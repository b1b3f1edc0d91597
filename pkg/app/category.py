"""Finite categories given by explicit composition tables."""
from functools import cached_property

import networkx as nx
import numpy as np

from app.errors import AxiomViolation


class FiniteCategory:
    """A finite category.

    Morphisms are numbered 0..n-1. ``table[g, f]`` is the id of g∘f, or -1
    when target(f) != source(g). Objects are numbered 0..m-1 and
    ``objects`` holds a printable label for each.
    """

    def __init__(self, objects, source, target, identities, table, name=""):
        self.objects = tuple(objects)
        self.source = np.asarray(source, dtype=np.int64)
        self.target = np.asarray(target, dtype=np.int64)
        self.identities = tuple(int(i) for i in identities)
        self.table = np.asarray(table, dtype=np.int64)
        self.name = name

    def __repr__(self):
        return (
            f"FiniteCategory({self.name!r}, objects={self.n_objects}, "
            f"morphisms={self.n_morphisms})"
        )

    @classmethod
    def from_morphisms(cls, objects, morphisms, compose, name=""):
        """Build the table from (source, target, key) triples.

        ``compose(g_key, f_key)`` returns the key of g∘f. Keys must be
        hashable and unique.
        """
        position = {m[2]: i for i, m in enumerate(morphisms)}
        n = len(morphisms)
        source = [m[0] for m in morphisms]
        target = [m[1] for m in morphisms]
        by_source = {}
        for i, s in enumerate(source):
            by_source.setdefault(s, []).append(i)
        table = np.full((n, n), -1, dtype=np.int64)
        for f in range(n):
            for g in by_source.get(target[f], []):
                table[g, f] = position[compose(morphisms[g][2], morphisms[f][2])]
        identities = []
        for obj in range(len(objects)):
            candidates = [
                i
                for i in by_source.get(obj, [])
                if target[i] == obj
                and all(
                    table[i, f] == f for f in range(n) if target[f] == obj
                )
                and all(
                    table[g, i] == g for g in by_source.get(obj, [])
                )
            ]
            if len(candidates) != 1:
                raise AxiomViolation(f"object {objects[obj]} has no identity")
            identities.append(candidates[0])
        return cls(objects, source, target, identities, table, name=name)

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.source)

    def compose(self, g: int, f: int) -> int:
        """g∘f"""
        h = int(self.table[g, f])
        if h < 0:
            raise ValueError(f"morphisms {g} and {f} are not composable")
        return h

    def is_identity(self, m: int) -> bool:
        return self.identities[int(self.source[m])] == m

    @cached_property
    def _identity_mask(self):
        mask = np.zeros(self.n_morphisms, dtype=bool)
        mask[list(self.identities)] = True
        return mask

    def hom(self, a: int, b: int) -> list:
        return [
            int(m)
            for m in np.flatnonzero((self.source == a) & (self.target == b))
        ]

    @cached_property
    def out_morphisms(self) -> tuple:
        """Non-identity morphisms leaving each object, in id order."""
        out = [[] for _ in self.objects]
        for m in range(self.n_morphisms):
            if not self._identity_mask[m]:
                out[int(self.source[m])].append(m)
        return tuple(tuple(x) for x in out)

    @cached_property
    def inverses(self) -> tuple:
        """inverses[m] is the inverse of m, or -1 if m is not invertible."""
        result = [-1] * self.n_morphisms
        for m in range(self.n_morphisms):
            a, b = int(self.source[m]), int(self.target[m])
            for k in self.hom(b, a):
                if (
                    self.table[k, m] == self.identities[a]
                    and self.table[m, k] == self.identities[b]
                ):
                    result[m] = k
                    break
        return tuple(result)

    def inverse(self, m: int) -> int:
        k = self.inverses[m]
        if k < 0:
            raise ValueError(f"morphism {m} is not an isomorphism")
        return k

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_objects))
        graph.add_edges_from(
            (int(s), int(t)) for s, t in zip(self.source, self.target)
        )
        return graph

    def components(self) -> list:
        return sorted(
            sorted(c) for c in nx.connected_components(self.graph())
        )

    def is_connected(self) -> bool:
        return self.n_objects > 0 and nx.is_connected(self.graph())

    def subcategory(self, morphisms, name=""):
        """The subcategory on all objects with the given morphisms.

        Returns the new category and the array mapping its ids to ours.
        """
        keep = sorted(set(int(m) for m in morphisms) | set(self.identities))
        embedding = np.array(keep, dtype=np.int64)
        local = {m: i for i, m in enumerate(keep)}
        sub = self.table[np.ix_(embedding, embedding)]
        table = np.full(sub.shape, -1, dtype=np.int64)
        for (i, j), h in np.ndenumerate(sub):
            if h >= 0:
                if int(h) not in local:
                    raise AxiomViolation(
                        "morphism set is not closed under composition",
                        witness={"g": keep[i], "f": keep[j], "g∘f": int(h)},
                    )
                table[i, j] = local[int(h)]
        category = FiniteCategory(
            self.objects,
            self.source[embedding],
            self.target[embedding],
            [local[i] for i in self.identities],
            table,
            name=name or self.name,
        )
        return category, embedding

    def check_associativity(self) -> list:
        """Composable triples violating associativity (expected empty)."""
        failures = []
        for f in range(self.n_morphisms):
            for g in np.flatnonzero(self.table[:, f] >= 0):
                gf = self.table[g, f]
                for h in np.flatnonzero(self.table[:, g] >= 0):
                    if self.table[h, gf] != self.table[self.table[h, g], f]:
                        failures.append((int(h), int(g), int(f)))
        return failures


def classifying_category(G, name="") -> FiniteCategory:
    """B(G): one object, one morphism per element, g∘f = gf."""
    n = G.order
    table = np.empty((n, n), dtype=np.int64)
    for g in range(n):
        for f in range(n):
            table[g, f] = G.mul(g, f)
    return FiniteCategory(
        ["*"], [0] * n, [0] * n, [0], table, name=name or "B(G)"
    )


def poset_category(n: int, relations, name="") -> FiniteCategory:
    """The poset on 0..n-1 generated by the pairs (a, b) meaning a <= b."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(relations)
    closure = nx.transitive_closure(graph, reflexive=True)
    arrows = sorted(closure.edges())
    return FiniteCategory.from_morphisms(
        list(range(n)),
        [(a, b, (a, b)) for a, b in arrows],
        lambda g, f: (f[0], g[1]),
        name=name or "poset",
    )
