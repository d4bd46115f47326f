"""Coxeter matrices, finite-type classification, and FC verdicts.

Sphericity of a parabolic is decided by matching the components of its
diagram (edges drawn for labels three and up) against the classification of
finite irreducible Coxeter groups, encoded as labeled-tree templates with an
isomorphism matcher.  The FC property quantifies over cliques of the graph
whose edges mark finite pair labels; maximal cliques suffice because a
parabolic of a finite Coxeter group is finite, so sub-cliques inherit
sphericity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import networkx as nx

from .errors import CapExceeded, InputError

INF = math.inf


@dataclass(frozen=True)
class CoxeterMatrix:
    generators: tuple
    entries: tuple  # rows of ints, with math.inf for unbounded pairs

    def index(self, name) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise InputError(f"unknown generator {name!r}") from None

    def entry(self, i, j):
        return self.entries[self.index(i)][self.index(j)]

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "matrix": [
                ["inf" if m == INF else m for m in row] for row in self.entries
            ],
        }


def validate_matrix(data) -> CoxeterMatrix:
    """Build a matrix from JSON-shaped data, checking the defining laws."""
    try:
        generators = list(data["generators"])
        rows = list(data["matrix"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed matrix data: {exc}") from exc
    if len(set(generators)) != len(generators):
        raise InputError("generator names must be distinct")
    n = len(generators)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise InputError(f"matrix must be {n}x{n}")
    entries = []
    for i, row in enumerate(rows):
        parsed = []
        for j, value in enumerate(row):
            if value == "inf" or value == INF:
                parsed.append(INF)
            elif isinstance(value, int) and not isinstance(value, bool):
                parsed.append(value)
            else:
                raise InputError(f"entry ({i},{j}) is {value!r}, not an integer or 'inf'")
        entries.append(tuple(parsed))
    for i in range(n):
        if entries[i][i] != 1:
            raise InputError(f"diagonal entry ({i},{i}) must be 1, got {entries[i][i]}")
        for j in range(n):
            if entries[i][j] != entries[j][i]:
                raise InputError(f"matrix is asymmetric at ({i},{j})")
            if i != j and entries[i][j] != INF and entries[i][j] < 2:
                raise InputError(f"off-diagonal entry ({i},{j}) must be at least 2")
    return CoxeterMatrix(tuple(generators), tuple(entries))


def parabolic_restrict(matrix: CoxeterMatrix, subset) -> CoxeterMatrix:
    """The submatrix on ``subset``; it presents the parabolic subgroup."""
    names = [g for g in matrix.generators if g in set(subset)]
    unknown = set(subset) - set(matrix.generators)
    if unknown:
        raise InputError(f"unknown generators {sorted(unknown)}")
    idx = [matrix.index(g) for g in names]
    entries = tuple(tuple(matrix.entries[i][j] for j in idx) for i in idx)
    return CoxeterMatrix(tuple(names), entries)


# -- classification of finite irreducible types ---------------------------------


def _path_template(labels):
    graph = nx.Graph()
    graph.add_nodes_from(range(len(labels) + 1))
    for i, label in enumerate(labels):
        graph.add_edge(i, i + 1, label=label)
    return graph


def _fork_template(arms):
    # A tree with one branch vertex and three arms of the given lengths,
    # every edge labeled 3.
    graph = nx.Graph()
    graph.add_node("c")
    for arm, length in enumerate(arms):
        prev = "c"
        for step in range(length):
            node = (arm, step)
            graph.add_edge(prev, node, label=3)
            prev = node
    return graph


def _templates_for_size(size):
    out = [("A%d" % size, _path_template([3] * (size - 1)), math.factorial(size + 1))]
    if size >= 2:
        out.append(
            (
                "B%d" % size,
                _path_template([3] * (size - 2) + [4]),
                2**size * math.factorial(size),
            )
        )
    if size >= 4:
        out.append(
            (
                "D%d" % size,
                _fork_template((1, 1, size - 3)),
                2 ** (size - 1) * math.factorial(size),
            )
        )
    if size == 6:
        out.append(("E6", _fork_template((1, 2, 2)), 51840))
    if size == 7:
        out.append(("E7", _fork_template((1, 2, 3)), 2903040))
    if size == 8:
        out.append(("E8", _fork_template((1, 2, 4)), 696729600))
    if size == 4:
        out.append(("F4", _path_template([3, 4, 3]), 1152))
    if size == 3:
        out.append(("H3", _path_template([5, 3]), 120))
    if size == 4:
        out.append(("H4", _path_template([5, 3, 3]), 14400))
    return out


def _match_component(graph):
    """Name and order of the component, or None when it is not on the list."""
    size = graph.number_of_nodes()
    if size == 1:
        return "A1", 2
    if graph.number_of_edges() != size - 1:
        return None  # cycles never appear in the classification
    if size == 2:
        (label,) = [d["label"] for _, _, d in graph.edges(data=True)]
        if label == 3:
            return "A2", 6
        if label == 4:
            return "B2", 8
        if label < INF:
            return "I2(%d)" % label, 2 * label
        return None
    match = nx.algorithms.isomorphism.categorical_edge_match("label", None)
    for name, template, order in _templates_for_size(size):
        if nx.is_isomorphic(graph, template, edge_match=match):
            return name, order
    return None


@dataclass(frozen=True)
class SphericalClassification:
    spherical: bool
    components: tuple  # type names when spherical
    order: int | None
    reason: str | None
    witness: tuple  # generators of the failing component, if any

    def describe(self) -> str:
        if self.spherical:
            return "x".join(self.components) if self.components else "trivial"
        return self.reason or "non-spherical"


def diagram_graph(matrix: CoxeterMatrix) -> nx.Graph:
    """Coxeter diagram: edges for labels three and up, label 2 disconnects."""
    graph = nx.Graph()
    graph.add_nodes_from(matrix.generators)
    n = len(matrix.generators)
    for i in range(n):
        for j in range(i + 1, n):
            m = matrix.entries[i][j]
            if m >= 3:
                graph.add_edge(
                    matrix.generators[i], matrix.generators[j], label=m
                )
    return graph


def spherical_classify(matrix: CoxeterMatrix, subset=None) -> SphericalClassification:
    sub = matrix if subset is None else parabolic_restrict(matrix, subset)
    n = len(sub.generators)
    for i in range(n):
        for j in range(i + 1, n):
            if sub.entries[i][j] == INF:
                return SphericalClassification(
                    False,
                    (),
                    None,
                    f"pair ({sub.generators[i]!r}, {sub.generators[j]!r}) has an infinite label",
                    (sub.generators[i], sub.generators[j]),
                )
    graph = diagram_graph(sub)
    names = []
    order = 1
    for nodes in sorted(nx.connected_components(graph), key=sorted):
        component = graph.subgraph(nodes)
        matched = _match_component(component)
        if matched is None:
            return SphericalClassification(
                False,
                (),
                None,
                f"component {sorted(nodes)} is not a finite irreducible diagram",
                tuple(sorted(nodes)),
            )
        name, comp_order = matched
        names.append(name)
        order *= comp_order
    return SphericalClassification(True, tuple(sorted(names)), order, None, ())


# -- FC verdicts ----------------------------------------------------------------


@dataclass(frozen=True)
class CliqueRecord:
    clique: tuple
    classification: SphericalClassification


@dataclass(frozen=True)
class FCVerdict:
    is_fc: bool
    witness: tuple | None
    records: tuple


def sphericity_graph(matrix: CoxeterMatrix) -> nx.Graph:
    """Edges join generator pairs whose dihedral parabolic is finite."""
    graph = nx.Graph()
    graph.add_nodes_from(matrix.generators)
    n = len(matrix.generators)
    for i in range(n):
        for j in range(i + 1, n):
            if matrix.entries[i][j] != INF:
                graph.add_edge(matrix.generators[i], matrix.generators[j])
    return graph


def fc_check(matrix: CoxeterMatrix, clique_cap=100_000) -> FCVerdict:
    graph = sphericity_graph(matrix)
    cliques = []
    for clique in nx.find_cliques(graph):
        cliques.append(tuple(sorted(clique)))
        if len(cliques) > clique_cap:
            raise CapExceeded(
                f"more than {clique_cap} maximal cliques",
                size=len(cliques),
                partial=tuple(cliques),
            )
    cliques.sort()
    records = []
    witness = None
    for clique in cliques:
        classification = spherical_classify(matrix, clique)
        records.append(CliqueRecord(clique, classification))
        if witness is None and not classification.spherical:
            witness = clique
    return FCVerdict(witness is None, witness, tuple(records))


@dataclass(frozen=True)
class ExactnessReport:
    is_fc: bool
    verdict: str
    stabilizer_types: tuple
    witness: tuple | None

    def to_json(self) -> dict:
        return {
            "fc": self.is_fc,
            "verdict": self.verdict,
            "stabilizer_types": [
                {"clique": list(c), "type": t} for c, t in self.stabilizer_types
            ],
            "witness": list(self.witness) if self.witness else None,
        }


def exactness_report(matrix: CoxeterMatrix) -> ExactnessReport:
    """FC matrices earn an exactness verdict; the stabilizer types are listed.

    For an FC matrix the group acts on a finite dimensional cube complex
    whose vertex stabilizers are exactly the finite-type parabolics named by
    the maximal cliques, which is what makes the permanence argument apply.
    """
    verdict = fc_check(matrix)
    if verdict.is_fc:
        types = tuple(
            (record.clique, record.classification.describe())
            for record in verdict.records
        )
        return ExactnessReport(True, "exact", types, None)
    return ExactnessReport(False, "inapplicable", (), verdict.witness)


def relabel(matrix: CoxeterMatrix, mapping) -> CoxeterMatrix:
    """Rename generators; the FC verdict must not change under this."""
    names = tuple(mapping[g] for g in matrix.generators)
    if len(set(names)) != len(names):
        raise InputError("relabeling must be injective")
    return CoxeterMatrix(names, matrix.entries)
