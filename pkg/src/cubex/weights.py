"""Deficiency sets and the integer weight functions on intervals.

The weight of a vertex ``a`` inside the interval from ``x`` toward a target
``z`` models the portion of a unit of mass, released at ``x`` at time ``n``,
that is currently sitting at ``a`` on its way to ``z``.  All identities the
weights satisfy (total mass, the adjacent-source difference, equivariance)
are exact statements about binomial coefficients and are verified here with
big-integer arithmetic, never floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .complex import CubeComplex, SignVector, lies_between
from .errors import AmbientDimensionError, DomainError
from .measures import ProbMeasure
from .report import Report


@dataclass(frozen=True)
class DeficiencySet:
    """Hyperplanes adjacent to ``vertex`` that separate it from the target."""

    vertex: str
    hyperplanes: frozenset
    ambient_dim: int

    @property
    def deficiency(self) -> int:
        return self.ambient_dim - len(self.hyperplanes)


@dataclass(frozen=True)
class WeightVector:
    """Sparse integer weights of one (source, target, time) triple."""

    source: str
    target: SignVector
    n: int
    ambient_dim: int
    values: dict

    def total_mass(self) -> int:
        return sum(self.values.values())

    def support(self) -> frozenset:
        return frozenset(v for v, w in self.values.items() if w)

    def normalized(self) -> ProbMeasure:
        mass = expected_mass(self.n, self.ambient_dim)
        return ProbMeasure(
            {v: Fraction(w, mass) for v, w in self.values.items() if w}
        )


def expected_mass(n: int, ambient_dim: int) -> int:
    return comb(n + ambient_dim, ambient_dim)


def adjacent_difference(n: int, ambient_dim: int) -> int:
    return 2 * comb(n + ambient_dim - 1, ambient_dim - 1)


def deficiency_set(c: CubeComplex, x, z, a) -> DeficiencySet:
    """Requires ``a`` to lie in the interval from ``x`` to ``z``."""
    av = c.vector(a)
    if not lies_between(av, c.vector(x), c.vector(z)):
        raise DomainError(f"{a!r} is not in the interval from {x!r} to {z!r}")
    name = a if isinstance(a, str) else c.name_of(av)
    cut = frozenset(
        h for h in c.adjacent_hyperplanes(name) if h in (av.neg ^ c.vector(z).neg)
    )
    if len(cut) > c.ambient_dim:
        raise AmbientDimensionError(
            f"vertex {name!r} meets {len(cut)} separating edges, ambient dimension is {c.ambient_dim}"
        )
    return DeficiencySet(name, cut, c.ambient_dim)


def deficiency(c: CubeComplex, x, z, a) -> int:
    return deficiency_set(c, x, z, a).deficiency


def weight(c: CubeComplex, n: int, x, z, a) -> int:
    """Weight of ``a``; zero off the interval or outside the radius-n ball."""
    av, xv, zv = c.vector(a), c.vector(x), c.vector(z)
    if not lies_between(av, xv, zv):
        return 0
    d = len(av.neg ^ xv.neg)
    delta = deficiency_set(c, x, z, a).deficiency
    top = n - d + delta
    if top < 0:
        return 0
    return comb(top, delta)  # comb(top, delta) = 0 when top < delta


def weight_vector(c: CubeComplex, n: int, x, z) -> WeightVector:
    xv, zv = c.vector(x), c.vector(z)
    values = {}
    for name, av in c.vertices.items():
        if not lies_between(av, xv, zv):
            continue
        if len(av.neg ^ xv.neg) > n:
            continue
        values[name] = weight(c, n, xv, zv, name)
    source = x if isinstance(x, str) else c.name_of(xv)
    return WeightVector(source, zv, n, c.ambient_dim, values)


def weight_measure(c: CubeComplex, n: int, source, target) -> ProbMeasure:
    """The weight vector normalized to an exact probability measure.

    With the source held at a fixed basepoint this family, indexed by the
    target, is the measure family the certificate construction consumes: its
    supports all sit inside the radius-n ball around the basepoint.
    """
    return weight_vector(c, n, source, target).normalized()


def l1_diff(values_a: dict, values_b: dict) -> int:
    keys = set(values_a) | set(values_b)
    return sum(abs(values_a.get(k, 0) - values_b.get(k, 0)) for k in keys)


# -- identity sweeps ----------------------------------------------------------


def verify_weight_identities(
    c: CubeComplex,
    n_max: int,
    action=None,
    extra_targets=(),
    triangle_bound=True,
    sources=None,
) -> Report:
    """Exhaustively check the finite-complex weight identities up to ``n_max``.

    For every time parameter, source vertex, and target (original vertices
    plus any supplied admissible sign vectors): values are non-negative
    integers, the support lies in the ball around the source intersected
    with the interval, and the total mass is exactly the predicted binomial.
    For every edge of the complex the two weight vectors differ in l1 norm
    by exactly the predicted adjacent difference.  If an action is supplied,
    relabeling by each generator commutes with the weight computation.

    ``sources`` restricts the swept source vertices (pairs are attributed to
    their smaller endpoint), so disjoint chunks partition the full sweep.
    """
    report = Report()
    N = c.ambient_dim
    sources = list(c.vertex_names) if sources is None else list(sources)
    source_set = set(sources)
    targets: list[tuple[str, SignVector]] = [
        (name, vec) for name, vec in c.vertices.items()
    ]
    targets.extend(extra_targets)

    cache: dict[tuple, WeightVector] = {}

    def vec_for(n, x, zlabel, zvec):
        key = (n, x, zlabel)
        got = cache.get(key)
        if got is None:
            got = cache[key] = weight_vector(c, n, x, zvec)
        return got

    edges = [
        (x, c.neighbor_across(x, h))
        for x in c.vertex_names
        for h in c.adjacent_hyperplanes(x)
    ]
    edges = [(x, y) for x, y in edges if x < y and x in source_set]

    for n in range(n_max + 1):
        mass = expected_mass(n, N)
        for x in sources:
            ball = c.ball(x, n)
            for zlabel, zvec in targets:
                wv = vec_for(n, x, zlabel, zvec)
                report.checks += 1
                if any(v < 0 for v in wv.values.values()):
                    report.add(
                        "negative-weight",
                        "weight took a negative value",
                        {"n": n, "x": x, "z": zlabel},
                    )
                if wv.total_mass() != mass:
                    report.add(
                        "mass",
                        f"total mass {wv.total_mass()} != {mass}",
                        {"n": n, "x": x, "z": zlabel},
                    )
                interval_names = {
                    name
                    for name in wv.support()
                    if not c.in_interval(name, x, zvec)
                }
                if interval_names or not wv.support() <= ball:
                    report.add(
                        "support",
                        "support escaped the ball-interval region",
                        {"n": n, "x": x, "z": zlabel},
                    )
        expected_diff = adjacent_difference(n, N) if N >= 1 else None
        for x, y in edges:
            for zlabel, zvec in targets:
                report.checks += 1
                diff = l1_diff(
                    vec_for(n, x, zlabel, zvec).values,
                    vec_for(n, y, zlabel, zvec).values,
                )
                if diff != expected_diff:
                    report.add(
                        "adjacent-difference",
                        f"l1 difference {diff} != {expected_diff}",
                        {"n": n, "x": x, "x'": y, "z": zlabel},
                    )
        if triangle_bound and expected_diff is not None:
            half = expected_diff // 2
            for x in sources:
                for y in c.vertex_names:
                    if y <= x:
                        continue
                    bound = 2 * c.distance(x, y) * half
                    for zlabel, zvec in targets:
                        report.checks += 1
                        diff = l1_diff(
                            vec_for(n, x, zlabel, zvec).values,
                            vec_for(n, y, zlabel, zvec).values,
                        )
                        if diff > bound:
                            report.add(
                                "triangle-bound",
                                f"l1 difference {diff} exceeds {bound}",
                                {"n": n, "x": x, "x'": y, "z": zlabel},
                            )

    if action is not None:
        for n in range(n_max + 1):
            for gen_name in sorted(action.generators):
                g = action.element(gen_name)
                for x in sources:
                    for zlabel, zvec in targets:
                        report.checks += 1
                        moved = {
                            action.act_vertex(g, v): w
                            for v, w in vec_for(n, x, zlabel, zvec).values.items()
                        }
                        image = weight_vector(
                            c, n, action.act_vertex(g, x), action.act_vector(g, zvec)
                        )
                        if moved != {k: v for k, v in image.values.items()}:
                            report.add(
                                "equivariance",
                                "relabeling by a generator changed the weights",
                                {"n": n, "x": x, "z": zlabel, "generator": gen_name},
                            )
    return report
