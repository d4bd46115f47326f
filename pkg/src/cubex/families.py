"""Generators for standard finite complexes and truncations of infinite ones.

The infinite examples (the integer-lattice plane, the infinite star, the
regular tree) are represented by finite truncations plus symbolic
annotations: orientation rules for their ideal points and flags for the
vertices whose adjacent-hyperplane set is infinite in the full family.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from itertools import combinations

from .complex import NEG, POS, CubeComplex, SignVector, majority
from .errors import CapExceeded, InputError

MAX_VERTICES = 1_000_000


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple

    def __str__(self):
        if self.kind == "grid":
            return "grid:%dx%d" % self.params
        if self.kind == "product":
            return "product(%s,%s)" % self.params
        return "%s:%s" % (self.kind, ",".join(str(p) for p in self.params))


@dataclass(frozen=True)
class IdealPointSpec:
    """A symbolic boundary point: an orientation rule plus annotations.

    ``rule`` maps any hyperplane id of the family (not just those present in
    one truncation) to a sign.  ``adjacency_infinite`` records whether the
    point is adjacent to infinitely many hyperplanes in the full family.
    """

    label: str
    rule: object  # callable hyperplane id -> sign; kept picklable
    adjacency_infinite: bool = False

    def restrict(self, complex: CubeComplex) -> SignVector:
        return SignVector(h for h in complex.hyperplanes if self.rule(h) == NEG)


@dataclass(frozen=True)
class FamilyAnnotations:
    """What a truncation remembers about the infinite family it came from."""

    spec: FamilySpec
    locally_finite: bool = True
    infinite_adjacency: frozenset = frozenset()
    ideal_points: tuple = ()

    def shared_adjacency_infinite(self, a, z) -> bool:
        # Truncated families annotate single vertices; two points share an
        # infinite adjacency set only when both are such a vertex.
        return a == z and a in self.infinite_adjacency


# -- spec parsing ------------------------------------------------------------


def parse_family(text: str) -> FamilySpec:
    text = text.strip()
    if text.startswith("product(") and text.endswith(")"):
        inner = text[len("product(") : -1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return FamilySpec(
                    "product", (parse_family(inner[:i]), parse_family(inner[i + 1 :]))
                )
        raise InputError(f"cannot split product spec {text!r}")
    if ":" not in text:
        raise InputError(f"malformed family spec {text!r}")
    kind, _, arg = text.partition(":")
    try:
        if kind == "grid":
            w, _, h = arg.partition("x")
            return FamilySpec("grid", (int(w), int(h)))
        if kind == "star":
            return FamilySpec("star", (int(arg),))
        if kind == "tree":
            v, _, d = arg.partition(",")
            return FamilySpec("tree", (int(v), int(d)))
        if kind == "cube":
            return FamilySpec("cube", (int(arg),))
    except ValueError as exc:
        raise InputError(f"bad parameters in family spec {text!r}") from exc
    raise InputError(f"unknown family kind {kind!r}")


# -- grid --------------------------------------------------------------------


def _grid_axis_index(h: str) -> tuple[str, int]:
    return h[0], int(h[1:])


def _grid_vertex_neg(p, q):
    return frozenset(
        {"K%d" % n for n in range(p)} | {"H%d" % n for n in range(q)}
    )


def _grid_corner_sign(xdir, ydir, h):
    axis, n = _grid_axis_index(h)
    direction = xdir if axis == "K" else ydir
    if direction > 0:
        return NEG if n >= 0 else POS
    return POS if n >= 0 else NEG


def _grid_line_sign(axis_to_infinity, direction, index, h):
    # The line of points past one side of the plane: the escaping axis is
    # oriented like the corner rule, the other axis like a fixed coordinate.
    axis, n = _grid_axis_index(h)
    if axis == axis_to_infinity:
        if direction > 0:
            return NEG if n >= 0 else POS
        return POS if n >= 0 else NEG
    return NEG if 0 <= n < index else POS


def build_grid(w, h, ambient_dim=None) -> CubeComplex:
    if w < 1 or h < 1:
        raise InputError("grid sides must be positive")
    if w * h > MAX_VERTICES:
        raise InputError("grid exceeds the vertex cap")
    hyperplanes = ["H%d" % n for n in range(h - 1)] + ["K%d" % n for n in range(w - 1)]
    vertices = {
        "(%d,%d)" % (p, q): _grid_vertex_neg(p, q)
        for p in range(w)
        for q in range(h)
    }
    spec = FamilySpec("grid", (w, h))
    ideals = []
    for label, xdir, ydir in (
        ("corner:ne", +1, +1),
        ("corner:nw", -1, +1),
        ("corner:sw", -1, -1),
        ("corner:se", +1, -1),
    ):
        ideals.append(
            IdealPointSpec(label, partial(_grid_corner_sign, xdir, ydir))
        )
    for p in range(w):
        ideals.append(
            IdealPointSpec("north:%d" % p, partial(_grid_line_sign, "H", +1, p))
        )
        ideals.append(
            IdealPointSpec("south:%d" % p, partial(_grid_line_sign, "H", -1, p))
        )
    for q in range(h):
        ideals.append(
            IdealPointSpec("east:%d" % q, partial(_grid_line_sign, "K", +1, q))
        )
        ideals.append(
            IdealPointSpec("west:%d" % q, partial(_grid_line_sign, "K", -1, q))
        )
    annotations = FamilyAnnotations(spec, True, frozenset(), tuple(ideals))
    return CubeComplex(hyperplanes, vertices, "(0,0)", ambient_dim, annotations)


# -- star ----------------------------------------------------------------------


def build_star(m, ambient_dim=None) -> CubeComplex:
    if m < 1:
        raise InputError("star needs at least one leaf")
    hyperplanes = ["H%d" % j for j in range(1, m + 1)]
    vertices = {"center": frozenset()}
    for j in range(1, m + 1):
        vertices["l%d" % j] = frozenset({"H%d" % j})
    spec = FamilySpec("star", (m,))
    # The infinite star is the standard non-locally-finite example: the
    # center meets every hyperplane, and no orientation with two -1 signs
    # is admissible, so there are no ideal points at all.
    annotations = FamilyAnnotations(spec, False, frozenset({"center"}), ())
    return CubeComplex(hyperplanes, vertices, "center", ambient_dim, annotations)


# -- regular tree -----------------------------------------------------------


def _tree_end_sign(neg, h):
    return NEG if h in neg else POS


def build_tree(valence, depth, ambient_dim=None) -> CubeComplex:
    """Truncation of the regular tree: root degree = valence, leaves at ``depth``."""
    if valence < 2 or depth < 1:
        raise InputError("tree needs valence >= 2 and depth >= 1")
    vertices = {"r": frozenset()}
    frontier = ["r"]
    for level in range(depth):
        nxt = []
        for v in frontier:
            fanout = valence if v == "r" else valence - 1
            for k in range(1, fanout + 1):
                child = f"{v}.{k}"
                vertices[child] = vertices[v] | {"e:" + child}
                nxt.append(child)
        frontier = nxt
        if len(vertices) > MAX_VERTICES:
            raise InputError("tree exceeds the vertex cap")
    hyperplanes = ["e:" + v for v in vertices if v != "r"]
    spec = FamilySpec("tree", (valence, depth))
    ideals = tuple(
        IdealPointSpec("end:" + leaf, partial(_tree_end_sign, vertices[leaf]))
        for leaf in frontier
    )
    annotations = FamilyAnnotations(spec, True, frozenset(), ideals)
    return CubeComplex(hyperplanes, vertices, "r", ambient_dim, annotations)


# -- cube and product ------------------------------------------------------


def build_cube(n, ambient_dim=None) -> CubeComplex:
    if n < 1:
        raise InputError("cube dimension must be positive")
    if 2**n > MAX_VERTICES:
        raise InputError("cube exceeds the vertex cap")
    hyperplanes = ["D%d" % i for i in range(n)]
    vertices = {}
    for code in range(2**n):
        bits = format(code, "0%db" % n)
        vertices[bits] = frozenset("D%d" % i for i, b in enumerate(bits) if b == "1")
    spec = FamilySpec("cube", (n,))
    annotations = FamilyAnnotations(spec)
    return CubeComplex(hyperplanes, vertices, "0" * n, ambient_dim, annotations)


def build_product(left: CubeComplex, right: CubeComplex, ambient_dim=None) -> CubeComplex:
    if len(left.vertices) * len(right.vertices) > MAX_VERTICES:
        raise InputError("product exceeds the vertex cap")
    hyperplanes = ["a." + h for h in left.hyperplanes] + [
        "b." + h for h in right.hyperplanes
    ]
    vertices = {}
    for n1, v1 in left.vertices.items():
        for n2, v2 in right.vertices.items():
            vertices[f"{n1}|{n2}"] = frozenset("a." + h for h in v1.neg) | frozenset(
                "b." + h for h in v2.neg
            )
    base = f"{left.base}|{right.base}"
    if ambient_dim is None:
        ambient_dim = left.ambient_dim + right.ambient_dim
    return CubeComplex(hyperplanes, vertices, base, ambient_dim)


def build_family(spec: FamilySpec, ambient_dim=None) -> CubeComplex:
    if spec.kind == "grid":
        return build_grid(*spec.params, ambient_dim=ambient_dim)
    if spec.kind == "star":
        return build_star(*spec.params, ambient_dim=ambient_dim)
    if spec.kind == "tree":
        return build_tree(*spec.params, ambient_dim=ambient_dim)
    if spec.kind == "cube":
        return build_cube(*spec.params, ambient_dim=ambient_dim)
    if spec.kind == "product":
        left, right = spec.params
        return build_product(
            build_family(left), build_family(right), ambient_dim=ambient_dim
        )
    raise InputError(f"unknown family kind {spec.kind!r}")


def ideal_points(family) -> tuple:
    """Ideal-point annotations of a family spec or of a built complex."""
    if isinstance(family, CubeComplex):
        annotations = family.family
        if annotations is None:
            raise InputError("complex is not annotated with a family")
        return tuple(annotations.ideal_points)
    complex = build_family(family)
    if complex.family is None:
        raise InputError(f"family {family} is not annotated")
    return tuple(complex.family.ideal_points)


# -- median closure -----------------------------------------------------------


def median_closure(vectors, hyperplanes=None, cap=100_000) -> CubeComplex:
    """Smallest median-closed superset, packaged as a valid complex.

    Hyperplanes that fail to separate the closed set are dropped and
    duplicate partitions merged; the vertex set is re-expressed relative to
    a deterministic choice of base so the base carries +1 everywhere.
    """
    closed = {v if isinstance(v, SignVector) else SignVector(v) for v in vectors}
    if not closed:
        raise InputError("median closure of an empty set")
    while True:
        fresh = set()
        for x, y, z in combinations(closed, 3):
            m = majority(x, y, z)
            if m not in closed:
                fresh.add(m)
        if not fresh:
            break
        closed |= fresh
        if len(closed) > cap:
            raise CapExceeded(
                f"median closure exceeded {cap} vertices", size=len(closed)
            )

    if hyperplanes is None:
        universe = sorted(set().union(*(v.neg for v in closed)) or set())
    else:
        universe = list(hyperplanes)

    kept, partitions = [], set()
    for h in universe:
        neg_side = frozenset(v for v in closed if h in v.neg)
        if not neg_side or len(neg_side) == len(closed):
            continue  # non-separating
        key = frozenset({neg_side, frozenset(closed) - neg_side})
        if key in partitions:
            continue  # duplicate partition
        partitions.add(key)
        kept.append(h)

    kept_set = frozenset(kept)
    restricted = {SignVector(v.neg & kept_set) for v in closed}
    base_neg = min(restricted, key=lambda v: (len(v.neg), sorted(v.neg))).neg
    rebased = sorted(
        ((v.neg ^ base_neg) for v in restricted),
        key=lambda neg: (len(neg), sorted(neg)),
    )
    vertices = {"v%d" % i: neg for i, neg in enumerate(rebased)}
    return CubeComplex(kept, vertices, "v0")
