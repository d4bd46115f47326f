"""Level sets and continuity certificates for target-indexed weight values.

Everything revolves around one scalar function: fix a source ``x``, a probe
vertex ``a`` and a time ``n``, and evaluate the weight at ``a`` as the target
``z`` ranges over admissible points.  Continuity of that function is decided
only through finite certificates: clopen half-space formulas, the
finite-shared-adjacency criterion at original targets, and explicit witness
sequences at non-locally-finite spots.  No numeric limit is ever taken; the
infinite part of a family enters exclusively through its annotations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .complex import CubeComplex, SignVector, lies_between
from .errors import DomainError, InputError
from .families import FamilyAnnotations
from .weights import deficiency_set, weight

CONTINUOUS = "continuous"
DISCONTINUOUS = "discontinuous"
NOT_DETERMINED = "not-determined"


@dataclass(frozen=True)
class TargetFunction:
    """Weight at ``a`` for mass flowing from ``x``, as a function of the target."""

    complex: CubeComplex
    x: str
    a: str
    n: int

    def __post_init__(self):
        if not self.complex.is_original(self.x) or not self.complex.is_original(self.a):
            raise InputError("source and probe vertex must be original vertices")

    def value(self, z) -> int:
        return weight(self.complex, self.n, self.x, z, self.a)

    @property
    def shift(self) -> int:
        """Time remaining after walking from x to a; positive values matter."""
        return self.n - self.complex.distance(self.x, self.a)


def default_probe(c: CubeComplex) -> dict:
    """Original vertices plus any annotated ideal points, by label."""
    probe = {name: vec for name, vec in c.vertices.items()}
    if c.family is not None:
        for spec in c.family.ideal_points:
            probe[spec.label] = spec.restrict(c)
    return probe


# -- zero set ------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroSetResult:
    members: frozenset
    from_half_spaces: frozenset
    certificate_ok: bool


def zero_set(c: CubeComplex, x, a, probe=None) -> ZeroSetResult:
    """Probe points whose interval misses ``a``, computed two ways.

    The direct route tests interval membership; the second route evaluates
    the union of half spaces, one for each hyperplane separating ``a`` from
    ``x``.  The certificate asserts the two agree on every probed point.
    """
    probe = default_probe(c) if probe is None else probe
    xv, av = c.vector(x), c.vector(a)
    cut = av.neg ^ xv.neg
    direct = frozenset(
        label for label, zv in probe.items() if not lies_between(av, xv, zv)
    )
    union = frozenset(
        label
        for label, zv in probe.items()
        if any(zv.sign(h) == xv.sign(h) for h in cut)
    )
    return ZeroSetResult(direct, union, direct == union)


# -- level sets -----------------------------------------------------------------


@dataclass(frozen=True)
class LevelSetPartition:
    cells: dict
    predicted_values: frozenset
    values_ok: bool
    levelset_ok: bool
    superlevel_ok: bool | None  # None when the time shift is not positive


def level_sets(q: TargetFunction, probe=None) -> LevelSetPartition:
    """Partition the probe by value and re-derive it from half-space data.

    The independent route recomputes each value from sign lookups alone:
    membership from the separators of ``a`` and ``x``, the deficiency count
    from the hyperplanes adjacent to ``a`` that do not separate it from
    ``x``.  When the time shift is positive the superlevel sets are also
    compared against the literal intersection-of-half-spaces expression.
    """
    c = q.complex
    probe = default_probe(c) if probe is None else probe
    xv, av = c.vector(q.x), c.vector(q.a)
    N = c.ambient_dim
    shift = q.shift

    cells: dict[int, set] = {}
    values = {}
    for label, zv in probe.items():
        val = values[label] = q.value(zv)
        cells.setdefault(val, set()).add(label)

    predicted = {0}
    if shift >= 0:
        predicted |= {comb(shift + N - k, N - k) for k in range(N + 1)}
    values_ok = set(cells) <= predicted

    cut = frozenset(av.neg ^ xv.neg)  # separates a from x
    loose = [h for h in c.adjacent_hyperplanes(q.a) if h not in cut]

    def half_space_value(zv: SignVector) -> int:
        if any(zv.sign(h) == xv.sign(h) for h in cut):
            return 0
        k = sum(1 for h in loose if zv.sign(h) != xv.sign(h))
        delta = N - k
        top = shift + delta
        return comb(top, delta) if top >= 0 else 0

    levelset_ok = all(
        half_space_value(zv) == values[label] for label, zv in probe.items()
    )

    superlevel_ok = None
    if shift > 0:
        superlevel_ok = True
        for k in range(N + 1):
            threshold = comb(shift + N - k, N - k)
            direct = {label for label, val in values.items() if val > threshold}
            formula = set()
            for label, zv in probe.items():
                if any(zv.sign(h) != av.sign(h) for h in cut):
                    continue
                # k = 0 contributes one empty union, which no point meets;
                # k above len(loose) contributes no subsets, so everything passes.
                subsets_hit = all(
                    any(zv.sign(h) == xv.sign(h) for h in subset)
                    for subset in combinations(loose, k)
                )
                if subsets_hit:
                    formula.add(label)
            if direct != formula:
                superlevel_ok = False

    return LevelSetPartition(
        {val: frozenset(cell) for val, cell in cells.items()},
        frozenset(predicted),
        values_ok,
        levelset_ok,
        superlevel_ok,
    )


# -- continuity classification ---------------------------------------------------


@dataclass(frozen=True)
class Classification:
    verdict: str
    rule: str
    detail: str


def continuity_classify(
    q: TargetFunction, z, annotations: FamilyAnnotations | None = None
) -> Classification:
    """Classify continuity at ``z`` using finite certificates only."""
    c = q.complex
    if annotations is None and c.family is not None:
        annotations = c.family
    zv = c.vector(z) if isinstance(z, str) else z
    z_name = c.name_of(zv)

    if q.value(zv) == 0:
        return Classification(
            CONTINUOUS, "zero-value", "the zero set is clopen, so zero points are interior"
        )
    if q.shift <= 0:
        return Classification(
            CONTINUOUS,
            "small-time",
            "up to the distance from source to probe vertex the function is an indicator of a clopen set",
        )
    if z_name is not None:
        if annotations is not None and annotations.shared_adjacency_infinite(
            q.a, z_name
        ):
            return Classification(
                DISCONTINUOUS,
                "infinite-shared-adjacency",
                f"the family marks infinitely many hyperplanes adjacent to both {q.a!r} and {z_name!r}",
            )
        return Classification(
            CONTINUOUS,
            "finite-shared-adjacency",
            "only finitely many hyperplanes are adjacent to both the probe vertex and the target",
        )
    if annotations is not None:
        labels = {spec.restrict(c): spec for spec in annotations.ideal_points}
        spec = labels.get(zv)
        if spec is not None:
            if q.a not in annotations.infinite_adjacency:
                return Classification(
                    CONTINUOUS,
                    "finite-vertex",
                    f"the probe vertex {q.a!r} meets only finitely many hyperplanes in this family",
                )
            witness = discontinuity_witness(q, zv, 4, annotations)
            if witness is not None:
                return Classification(
                    DISCONTINUOUS, "witness", f"witness prefix of length {len(witness.steps)}"
                )
            return Classification(
                NOT_DETERMINED,
                "witness-search-exhausted",
                "no witness prefix inside the truncation; the family annotation does not settle it",
            )
    return Classification(
        NOT_DETERMINED, "unannotated-point", "no finite certificate applies to this point"
    )


# -- discontinuity witnesses -----------------------------------------------------


@dataclass(frozen=True)
class WitnessStep:
    point: str
    hyperplane: str
    perturbed: str
    deficiency_before: int
    deficiency_after: int


@dataclass(frozen=True)
class DiscontinuityWitness:
    target: str
    steps: tuple
    partial: bool


def discontinuity_witness(
    q: TargetFunction,
    z,
    prefix_len: int,
    annotations: FamilyAnnotations | None = None,
) -> DiscontinuityWitness | None:
    """Search a truncation for a witness prefix against continuity at ``z``.

    A full witness needs infinitely many distinct hyperplanes adjacent to the
    probe vertex, so the search is gated on the family flagging that vertex:
    without the flag the truncation's finite list certifies there is nothing
    to find.  Each returned step carries the perturbed point across its
    hyperplane and the two deficiencies, which must differ by exactly one.
    """
    c = q.complex
    if annotations is None:
        annotations = c.family
    zv = c.vector(z) if isinstance(z, str) else z
    z_name = c.name_of(zv)
    if q.value(zv) == 0:
        return None
    if q.shift <= 0:
        return None
    if annotations is None or q.a not in annotations.infinite_adjacency:
        return None

    av, xv = c.vector(q.a), c.vector(q.x)
    if z_name is not None:
        # A sequence of points converging to an original target is eventually
        # constant, so the witness must sit at the target itself and its
        # hyperplanes must be adjacent to both endpoints; without the family
        # flagging that shared set infinite there is nothing to find.
        if not annotations.shared_adjacency_infinite(q.a, z_name):
            return None
        shared = c.adjacent_hyperplanes(q.a) & c.adjacent_hyperplanes(z_name)
        candidates = [(h, z_name) for h in c.hyperplanes if h in shared]
    else:
        interval_names = sorted(
            c.interval(q.a, zv), key=lambda name: c.distance(name, zv)
        )
        adjacent = c.adjacent_hyperplanes(q.a)
        candidates = [
            (h, m) for h in c.hyperplanes if h in adjacent for m in interval_names
        ]

    steps = []
    used = set()
    for h, m_name in candidates:
        if len(steps) >= prefix_len:
            break
        if h in used:
            continue
        mv = c.vertices[m_name]
        if h not in c.adjacent_hyperplanes(m_name):
            continue
        pv = mv.flip(h)
        p_name = c.name_of(pv)
        if p_name is None and not c.is_admissible(pv):
            continue
        if not lies_between(av, xv, mv) or not lies_between(av, xv, pv):
            continue
        before = deficiency_set(c, q.x, mv, q.a).deficiency
        after = deficiency_set(c, q.x, pv, q.a).deficiency
        if abs(before - after) != 1:
            continue
        used.add(h)
        steps.append(WitnessStep(m_name, h, p_name or "(ideal)", before, after))
    if not steps:
        return None
    return DiscontinuityWitness(
        z_name or "(ideal)", tuple(steps), len(steps) < prefix_len
    )


# -- singleton openness -----------------------------------------------------------


@dataclass(frozen=True)
class OpennessResult:
    vertex: str
    open: bool
    certificate: dict | None
    verified: bool | None


def singleton_openness(
    c: CubeComplex, a, annotations: FamilyAnnotations | None = None, probe=None
) -> OpennessResult:
    """Openness of a one-vertex set, certified by adjacent half spaces.

    A vertex is open exactly when finitely many hyperplanes are adjacent to
    it; for truncations the family annotation supplies the infinite case.
    The certificate, the intersection of the adjacent half spaces on the
    vertex's own sides, is checked to contain nothing else admissible.
    """
    if not c.is_original(a):
        raise DomainError(f"{a!r} is not an original vertex")
    if annotations is None:
        annotations = c.family
    if annotations is not None and a in annotations.infinite_adjacency:
        return OpennessResult(a, False, None, None)
    av = c.vector(a)
    certificate = {h: av.sign(h) for h in sorted(c.adjacent_hyperplanes(a))}
    if probe is None:
        probe = c.enumerate_admissible().vectors
    hits = [
        zv for zv in probe if all(zv.sign(h) == s for h, s in certificate.items())
    ]
    return OpennessResult(a, True, certificate, hits == [av])
