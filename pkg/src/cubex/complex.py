"""Sign-vector combinatorics of finite cube complexes.

A complex is described entirely by its vertex set, viewed inside the Hamming
cube over the hyperplane set: every vertex is the function assigning to each
hyperplane the side of that hyperplane the vertex lies on, with the convention
that the base vertex lies on the +1 side of everything.  Vertices are stored
as the (finite) set of hyperplanes carrying sign -1.

Everything here is a pure function of immutable data: separators, distance,
majority medians, intervals, adjacency, admissibility, and the validation
checks that make a raw vertex table a genuine median-closed complex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from .errors import InputError
from .report import Report

POS = 1
NEG = -1


class SignVector:
    """Total orientation of the hyperplane set, stored as its -1 part."""

    __slots__ = ("neg",)

    def __init__(self, neg=()):
        self.neg = frozenset(neg)

    def sign(self, h) -> int:
        return NEG if h in self.neg else POS

    def flip(self, h) -> "SignVector":
        return SignVector(self.neg ^ {h})

    def __eq__(self, other):
        return isinstance(other, SignVector) and self.neg == other.neg

    def __hash__(self):
        return hash(self.neg)

    def __repr__(self):
        return "SignVector({%s})" % ", ".join(repr(h) for h in sorted(self.neg))


def separators(x: SignVector, y: SignVector) -> frozenset:
    """The hyperplanes on which x and y disagree."""
    return x.neg ^ y.neg


def distance(x: SignVector, y: SignVector) -> int:
    return len(x.neg ^ y.neg)


def majority(x: SignVector, y: SignVector, z: SignVector) -> SignVector:
    """Per-hyperplane majority vote of three sign vectors."""
    return SignVector((x.neg & y.neg) | (x.neg & z.neg) | (y.neg & z.neg))


def lies_between(a: SignVector, x: SignVector, y: SignVector) -> bool:
    """True when no hyperplane separates a from both x and y."""
    return (x.neg & y.neg) <= a.neg <= (x.neg | y.neg)


@dataclass(frozen=True)
class AdmissibleEnumeration:
    """Result of backtracking enumeration; ``complete`` is False if a cap hit."""

    vectors: frozenset
    complete: bool


class CubeComplex:
    """A finite hyperplane set plus a median-closed set of named vertices.

    ``vertices`` maps stable vertex names to sign vectors (or iterables of
    the hyperplanes oriented -1).  The base vertex must carry +1 everywhere.
    Instances are immutable by convention; all methods are read only, so
    sharing a complex across threads is safe.
    """

    def __init__(self, hyperplanes, vertices, base, ambient_dim=None, family=None):
        self.hyperplanes = tuple(hyperplanes)
        self.universe = frozenset(self.hyperplanes)
        if len(self.universe) != len(self.hyperplanes):
            raise InputError("duplicate hyperplane ids")
        self.vertices: dict[str, SignVector] = {}
        for name, vec in dict(vertices).items():
            if not isinstance(vec, SignVector):
                vec = SignVector(vec)
            unknown = vec.neg - self.universe
            if unknown:
                raise InputError(
                    f"vertex {name!r} uses unknown hyperplanes {sorted(unknown)}"
                )
            self.vertices[name] = vec
        if base not in self.vertices:
            raise InputError(f"base vertex {base!r} is not a vertex")
        self.base = base
        self.vertex_names = tuple(self.vertices)
        self._name_of = {v: k for k, v in self.vertices.items()}
        if len(self._name_of) != len(self.vertices):
            raise InputError("two vertex names share one sign vector")
        self._ambient_dim = ambient_dim
        self.family = family
        self._sides: dict[tuple, frozenset] = {}
        self._adjacent: dict[str, frozenset] = {}
        self._dimension = None
        self._crossings = None

    # -- resolution helpers ------------------------------------------------

    def vector(self, v) -> SignVector:
        """Resolve a vertex name or pass a sign vector through."""
        if isinstance(v, SignVector):
            return v
        try:
            return self.vertices[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def name_of(self, vec: SignVector):
        return self._name_of.get(vec)

    def is_original(self, vec) -> bool:
        if isinstance(vec, SignVector):
            return vec in self._name_of
        return vec in self.vertices

    # -- basic combinatorics -------------------------------------------------

    def separators(self, x, y) -> frozenset:
        return separators(self.vector(x), self.vector(y))

    def distance(self, x, y) -> int:
        return len(self.separators(x, y))

    def median(self, x, y, z) -> SignVector:
        return majority(self.vector(x), self.vector(y), self.vector(z))

    def median_vertex(self, x, y, z):
        """Name of the median when the three inputs are original vertices."""
        return self.name_of(self.median(x, y, z))

    def in_interval(self, a, x, y) -> bool:
        return lies_between(self.vector(a), self.vector(x), self.vector(y))

    def interval(self, x, y) -> frozenset:
        """Names of the original vertices separated from neither x nor y."""
        xv, yv = self.vector(x), self.vector(y)
        return frozenset(
            name for name, av in self.vertices.items() if lies_between(av, xv, yv)
        )

    def neighbor_across(self, a, h):
        """The vertex differing from a exactly on h, or None."""
        if h not in self.universe:
            raise InputError(f"unknown hyperplane {h!r}")
        return self._name_of.get(self.vector(a).flip(h))

    def adjacent_hyperplanes(self, a) -> frozenset:
        """Hyperplanes across which a has a neighbor in the complex."""
        if isinstance(a, SignVector):
            a = self._name_of[a]
        cached = self._adjacent.get(a)
        if cached is None:
            av = self.vertices[a]
            cached = frozenset(
                h for h in self.hyperplanes if av.flip(h) in self._name_of
            )
            self._adjacent[a] = cached
        return cached

    def ball(self, x, radius) -> frozenset:
        """Original vertices separated from x by at most ``radius`` hyperplanes."""
        xv = self.vector(x)
        return frozenset(
            name
            for name, av in self.vertices.items()
            if len(av.neg ^ xv.neg) <= radius
        )

    # -- half spaces and crossings -------------------------------------------

    def side(self, h, sign) -> frozenset:
        """Names of the original vertices on the given side of h."""
        key = (h, sign)
        cached = self._sides.get(key)
        if cached is None:
            cached = frozenset(
                name for name, v in self.vertices.items() if v.sign(h) == sign
            )
            self._sides[key] = cached
        return cached

    def crosses(self, h, k) -> bool:
        """Two hyperplanes cross when all four sign combinations occur."""
        return all(
            not self.side(h, sh).isdisjoint(self.side(k, sk))
            for sh in (POS, NEG)
            for sk in (POS, NEG)
        )

    def crossing_pairs(self) -> frozenset:
        if self._crossings is None:
            self._crossings = frozenset(
                frozenset((h, k))
                for h, k in combinations(self.hyperplanes, 2)
                if self.crosses(h, k)
            )
        return self._crossings

    @property
    def dimension(self) -> int:
        """Max count of pairwise-crossing hyperplanes adjacent to one vertex."""
        if self._dimension is None:
            crossings = self.crossing_pairs()
            best = 0
            for name in self.vertex_names:
                adj = sorted(self.adjacent_hyperplanes(name))
                if len(adj) <= best:
                    continue
                graph = nx.Graph()
                graph.add_nodes_from(adj)
                graph.add_edges_from(
                    (h, k)
                    for h, k in combinations(adj, 2)
                    if frozenset((h, k)) in crossings
                )
                best = max(best, max(len(c) for c in nx.find_cliques(graph)))
            self._dimension = best
        return self._dimension

    @property
    def ambient_dim(self) -> int:
        if self._ambient_dim is None:
            return self.dimension
        return self._ambient_dim

    def with_ambient_dim(self, n) -> "CubeComplex":
        return CubeComplex(
            self.hyperplanes, dict(self.vertices), self.base, n, self.family
        )

    # -- admissibility ---------------------------------------------------------

    def is_admissible(self, z) -> bool:
        """Pairwise criterion: every two chosen half spaces meet in a vertex."""
        zv = self.vector(z)
        if not zv.neg <= self.universe:
            raise InputError("sign vector uses unknown hyperplanes")
        sides = [self.side(h, zv.sign(h)) for h in self.hyperplanes]
        for s, t in combinations(sides, 2):
            if s.isdisjoint(t):
                return False
        return True

    def enumerate_admissible(self, limit=100_000) -> AdmissibleEnumeration:
        """Backtrack over hyperplanes, pruning pairwise-inconsistent prefixes.

        On a finite complex the result equals the original vertex set: a
        finite set of vertices is already closed.
        """
        order = self.hyperplanes
        found = []
        complete = True
        # chosen[i] = side (frozenset of vertex names) picked for order[i]
        def extend(i, neg, chosen):
            nonlocal complete
            if len(found) >= limit:
                complete = False
                return
            if i == len(order):
                found.append(SignVector(neg))
                return
            h = order[i]
            for sign in (POS, NEG):
                side = self.side(h, sign)
                if all(not side.isdisjoint(prev) for prev in chosen):
                    chosen.append(side)
                    extend(i + 1, neg | ({h} if sign == NEG else set()), chosen)
                    chosen.pop()

        extend(0, frozenset(), [])
        return AdmissibleEnumeration(frozenset(found), complete)


# -- validation ------------------------------------------------------------


def validate_complex(c: CubeComplex, triple_cap=2_000_000, seed=0) -> Report:
    """Check the structural invariants; each violation carries a witness.

    Median closure is checked on every vertex triple when the triple count
    stays under ``triple_cap``, otherwise on a seeded random sample.
    """
    report = Report()
    base_vec = c.vertices[c.base]
    if base_vec.neg:
        report.add(
            "base-orientation",
            f"base vertex {c.base!r} carries sign -1",
            {"vertex": c.base, "hyperplanes": sorted(base_vec.neg)},
        )
    for h in c.hyperplanes:
        if not c.side(h, NEG) or not c.side(h, POS):
            report.add(
                "non-separating-hyperplane",
                f"all vertices lie on one side of {h!r}",
                {"hyperplane": h},
            )
    report.checks += len(c.hyperplanes) + 1

    seen_partitions = {}
    for h in c.hyperplanes:
        part = c.side(h, NEG)
        if part in seen_partitions:
            report.add(
                "duplicate-partition",
                f"hyperplanes {seen_partitions[part]!r} and {h!r} induce the same partition",
                {"hyperplanes": [seen_partitions[part], h]},
            )
        else:
            seen_partitions[part] = h
    report.checks += len(c.hyperplanes)

    names = c.vertex_names
    total_triples = len(names) * (len(names) - 1) * (len(names) - 2) // 6
    if total_triples <= triple_cap:
        triples = combinations(names, 3)
    else:
        rng = random.Random(seed)
        triples = (
            tuple(rng.sample(names, 3)) for _ in range(triple_cap)
        )
        report.notes.append(
            f"median closure sampled on {triple_cap} of {total_triples} triples (seed {seed})"
        )
    for x, y, z in triples:
        report.checks += 1
        med = c.median(x, y, z)
        if med not in c._name_of:
            report.add(
                "median-closure",
                "majority median of a vertex triple is not a vertex",
                {"triple": [x, y, z], "median_neg": sorted(med.neg)},
            )

    if c.ambient_dim < c.dimension:
        report.add(
            "ambient-dimension",
            f"declared ambient dimension {c.ambient_dim} is below the complex dimension {c.dimension}",
            {"ambient": c.ambient_dim, "dimension": c.dimension},
        )
    report.checks += 1
    return report


# -- serialization -----------------------------------------------------------


def complex_to_json(c: CubeComplex) -> dict:
    return {
        "hyperplanes": list(c.hyperplanes),
        "base": c.base,
        "N": c.ambient_dim,
        "vertices": {
            name: [v.sign(h) for h in c.hyperplanes] for name, v in c.vertices.items()
        },
    }


def complex_from_json(data) -> CubeComplex:
    try:
        hyperplanes = list(data["hyperplanes"])
        base = data["base"]
        ambient = data.get("N")
        rows = data["vertices"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed complex JSON: {exc}") from exc
    vertices = {}
    for name, signs in rows.items():
        if len(signs) != len(hyperplanes):
            raise InputError(
                f"vertex {name!r} has {len(signs)} signs for {len(hyperplanes)} hyperplanes"
            )
        if any(s not in (POS, NEG) for s in signs):
            raise InputError(f"vertex {name!r} has signs outside {{+1, -1}}")
        vertices[name] = SignVector(
            h for h, s in zip(hyperplanes, signs) if s == NEG
        )
    return CubeComplex(hyperplanes, vertices, base, ambient)
