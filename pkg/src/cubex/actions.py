"""Finite group actions on finite complexes and exactness certificates.

A group is given by named generator permutations of the vertex set and is
closed under composition with a configurable cap.  Orbit and coset data use
a fixed total order (word length, then lexicographic generator words) so the
transversal, the coset representatives, and hence the whole certificate are
reproducible.  The certificate combines the normalized weight measures seen
from a basepoint with lifted stabilizer measures, and its verification is
an exact rational computation: a mass identity per group element, a support
bound, and a two-term deviation estimate per test element.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import random

from .complex import NEG, CubeComplex, SignVector
from .errors import CapExceeded, InputError
from .measures import ProbMeasure
from .report import Report
from .weights import weight_measure


class GroupElement:
    """A vertex permutation with its canonical generator word."""

    __slots__ = ("images", "word")

    def __init__(self, images, word):
        self.images = tuple(images)
        self.word = tuple(word)

    @property
    def sort_key(self):
        return (len(self.word), self.word)

    def label(self) -> str:
        return "*".join(self.word) if self.word else "e"

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"<{self.label()}>"


class GroupAction:
    """A validated finite group of automorphisms of a finite complex."""

    def __init__(self, complex: CubeComplex, generators, closure_cap=10_000):
        self.complex = complex
        self.generators = {name: dict(perm) for name, perm in generators.items()}
        self._index = {v: i for i, v in enumerate(complex.vertex_names)}
        self._closure_cap = closure_cap
        self._hyperplane_maps: dict[GroupElement, dict] = {}
        self._close()

    # -- group structure ---------------------------------------------------

    def _gen_element(self, name) -> GroupElement:
        perm = self.generators[name]
        return GroupElement(
            (perm[v] for v in self.complex.vertex_names), (name,)
        )

    def _close(self):
        identity = GroupElement(self.complex.vertex_names, ())
        elements = {identity.images: identity}
        frontier = [identity]
        gen_names = sorted(self.generators)
        while frontier:
            frontier.sort(key=lambda g: g.sort_key)
            fresh = []
            for g in frontier:
                for name in gen_names:
                    perm = self.generators[name]
                    images = tuple(
                        g.images[self._index[perm[v]]]
                        for v in self.complex.vertex_names
                    )
                    if images not in elements:
                        candidate = GroupElement(images, g.word + (name,))
                        elements[images] = candidate
                        fresh.append(candidate)
                        if len(elements) > self._closure_cap:
                            raise CapExceeded(
                                f"group closure exceeded {self._closure_cap} elements",
                                size=len(elements),
                            )
            frontier = fresh
        self.identity = identity
        self.elements = tuple(sorted(elements.values(), key=lambda g: g.sort_key))
        self._by_images = {g.images: g for g in self.elements}

    def element(self, name) -> GroupElement:
        """Canonical element for a generator name."""
        return self._by_images[self._gen_element(name).images]

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        images = tuple(
            g.images[self._index[h.images[i]]]
            for i in range(len(self.complex.vertex_names))
        )
        return self._by_images[images]

    def inv(self, g: GroupElement) -> GroupElement:
        images = [None] * len(g.images)
        for i, v in enumerate(g.images):
            images[self._index[v]] = self.complex.vertex_names[i]
        return self._by_images[tuple(images)]

    # -- action on the complex ------------------------------------------------

    def act_vertex(self, g: GroupElement, v: str) -> str:
        return g.images[self._index[v]]

    def hyperplane_map(self, g: GroupElement) -> dict:
        """For each hyperplane, its image and the sign flip across the pair."""
        cached = self._hyperplane_maps.get(g)
        if cached is not None:
            return cached
        c = self.complex
        mapping = {}
        for h in c.hyperplanes:
            edge = None
            for name in c.vertex_names:
                other = c.neighbor_across(name, h)
                if other is not None:
                    edge = (name, other)
                    break
            if edge is None:
                raise InputError(f"hyperplane {h!r} has no edge across it")
            gx, gy = self.act_vertex(g, edge[0]), self.act_vertex(g, edge[1])
            sep = c.separators(gx, gy)
            if len(sep) != 1:
                raise InputError(
                    f"permutation does not carry the edge across {h!r} to an edge"
                )
            (k,) = sep
            flip = c.vertices[edge[0]].sign(h) * c.vertices[gx].sign(k)
            for name, vec in c.vertices.items():
                if vec.sign(h) * flip != c.vertices[self.act_vertex(g, name)].sign(k):
                    raise InputError(
                        f"half spaces of {h!r} are not carried onto half spaces of {k!r}"
                    )
            mapping[h] = (k, flip)
        self._hyperplane_maps[g] = mapping
        return mapping

    def act_vector(self, g: GroupElement, vec: SignVector) -> SignVector:
        """Image of an arbitrary (admissible) sign vector under g."""
        mapping = self.hyperplane_map(g)
        neg = set()
        for h, (k, flip) in mapping.items():
            if vec.sign(h) * flip == NEG:
                neg.add(k)
        return SignVector(neg)


def validate_action(
    c: CubeComplex,
    generators,
    closure_cap=10_000,
    triple_cap=200_000,
    seed=0,
) -> GroupAction:
    """Check generators are automorphisms, then close them into a group.

    Rejections carry a witness in the exception message.  Median
    equivariance is checked on all vertex triples up to ``triple_cap``,
    after that on a seeded random sample.
    """
    names = set(c.vertex_names)
    for gen_name, perm in generators.items():
        if set(perm) != names or set(perm.values()) != names:
            raise InputError(f"generator {gen_name!r} is not a bijection of the vertices")
    for gen_name, perm in generators.items():
        for x, y in combinations(c.vertex_names, 2):
            before = c.distance(x, y) == 1
            after = c.distance(perm[x], perm[y]) == 1
            if before != after:
                raise InputError(
                    f"generator {gen_name!r} breaks adjacency at ({x!r}, {y!r})"
                )
    total = len(c.vertex_names) ** 3
    if total <= triple_cap:
        triples = [
            (x, y, z)
            for x in c.vertex_names
            for y in c.vertex_names
            for z in c.vertex_names
        ]
    else:
        rng = random.Random(seed)
        triples = [
            tuple(rng.choice(c.vertex_names) for _ in range(3))
            for _ in range(triple_cap)
        ]
    for gen_name, perm in generators.items():
        for x, y, z in triples:
            med = c.median_vertex(x, y, z)
            if perm[med] != c.median_vertex(perm[x], perm[y], perm[z]):
                raise InputError(
                    f"generator {gen_name!r} breaks the median at ({x!r}, {y!r}, {z!r})"
                )
    action = GroupAction(c, generators, closure_cap)
    for gen_name in generators:
        action.hyperplane_map(action.element(gen_name))  # raises when ill defined
    return action


# -- orbits and cosets -----------------------------------------------------------


@dataclass
class OrbitData:
    """Transversal, stabilizers, and coset decompositions for an action.

    For each transversal point t, every group element g factors uniquely as
    ``g = z * a`` with z the chosen representative of its stabilizer coset
    and a in the stabilizer; ``decompositions[t][g] == (z, a)``.
    """

    action: GroupAction
    transversal: tuple
    orbits: dict
    stabilizers: dict
    coset_reps: dict
    decompositions: dict

    def stabilizer_of(self, t) -> tuple:
        return self.stabilizers[t]


def orbit_transversal(action: GroupAction) -> OrbitData:
    c = action.complex
    position = {v: i for i, v in enumerate(c.vertex_names)}
    seen = set()
    transversal = []
    orbits = {}
    for v in c.vertex_names:
        if v in seen:
            continue
        orbit = frozenset(action.act_vertex(g, v) for g in action.elements)
        t = min(orbit, key=position.__getitem__)
        transversal.append(t)
        orbits[t] = orbit
        seen |= orbit
    stabilizers = {}
    coset_reps = {}
    decompositions = {}
    for t in transversal:
        stab = tuple(
            g for g in action.elements if action.act_vertex(g, t) == t
        )
        stab_set = frozenset(stab)
        # g and g' share a coset g·Stab exactly when they move t to the same
        # point, so the coset representative is indexed by the orbit point.
        rep_for_point = {}
        for g in action.elements:  # already in canonical order
            point = action.act_vertex(g, t)
            rep_for_point.setdefault(point, g)
        decomp = {}
        for g in action.elements:
            z = rep_for_point[action.act_vertex(g, t)]
            a = action.mul(action.inv(z), g)
            if a not in stab_set:
                raise InputError("coset decomposition left the stabilizer")
            decomp[g] = (z, a)
        stabilizers[t] = stab
        coset_reps[t] = tuple(
            sorted(rep_for_point.values(), key=lambda g: g.sort_key)
        )
        decompositions[t] = decomp
    return OrbitData(
        action, tuple(transversal), orbits, stabilizers, coset_reps, decompositions
    )


def verify_coset_identities(data: OrbitData) -> Report:
    """Exhaustive check of the decomposition identities, for every t."""
    report = Report()
    action = data.action
    for t in data.transversal:
        decomp = data.decompositions[t]
        stab = set(data.stabilizers[t])
        points = {action.act_vertex(z, t) for z in data.coset_reps[t]}
        if len(points) != len(data.coset_reps[t]) or points != set(data.orbits[t]):
            report.add(
                "coset-orbit-bijection",
                "representatives do not map bijectively onto the orbit",
                {"t": t},
            )
        report.checks += 1
        for g in action.elements:
            zg, ag = decomp[g]
            for k in action.elements:
                zgk, agk = decomp[action.mul(g, k)]
                _, ak = decomp[k]
                left = action.mul(zgk, action.mul(agk, action.inv(ak)))
                if left != action.mul(g, decomp[k][0]):
                    report.add(
                        "coset-identity",
                        "z_(gk)*(a_(gk)*a_k^-1) != g*z_k",
                        {"t": t, "g": g.label(), "k": k.label()},
                    )
                report.checks += 1
            for h in stab:
                gh = action.mul(g, h)
                zgh, agh = decomp[gh]
                if zgh != zg or agh != action.mul(ag, h):
                    report.add(
                        "coset-identity",
                        "the decomposition of g*h must keep z and extend a",
                        {"t": t, "g": g.label(), "h": h.label()},
                    )
                report.checks += 1
    return report


def equivariant_splitting(data: OrbitData, t, g: GroupElement) -> GroupElement:
    """The stabilizer-valued splitting sending g to the inverse of a at g inverse."""
    action = data.action
    _, a = data.decompositions[t][action.inv(g)]
    return action.inv(a)


def verify_splitting(data: OrbitData, t) -> Report:
    report = Report()
    action = data.action
    stab = set(data.stabilizers[t])
    for g in action.elements:
        s = equivariant_splitting(data, t, g)
        if s not in stab:
            report.add(
                "splitting-range", "splitting left the stabilizer", {"t": t, "g": g.label()}
            )
        for h in stab:
            report.checks += 1
            if equivariant_splitting(data, t, action.mul(h, g)) != action.mul(h, s):
                report.add(
                    "splitting-equivariance",
                    "splitting is not equivariant for the stabilizer",
                    {"t": t, "g": g.label(), "h": h.label()},
                )
    return report


def lift_stabilizer_family(data: OrbitData, t, stab_family) -> dict:
    """Inflate a stabilizer-indexed measure family to all group elements.

    ``stab_family`` is either the string ``"uniform"`` or a mapping from
    stabilizer elements to probability measures supported on the stabilizer.
    The lifted family is constant on stabilizer cosets through the
    equivariant splitting, which is what makes its invariance exact for
    stabilizer translates.
    """
    action = data.action
    stab = data.stabilizers[t]
    stab_set = frozenset(stab)
    if stab_family == "uniform":
        uniform = ProbMeasure.uniform(stab)
        return {g: uniform for g in action.elements}
    family = dict(stab_family)
    if set(family) != set(stab_set):
        raise InputError("stabilizer family must be indexed by the whole stabilizer")
    for measure in family.values():
        if not isinstance(measure, ProbMeasure):
            raise InputError("stabilizer family values must be probability measures")
        if not measure.support <= stab_set:
            raise InputError("stabilizer measure supported outside the stabilizer")
    return {g: family[equivariant_splitting(data, t, g)] for g in action.elements}


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class CertificateParams:
    """One run of the construction: a test set, a tolerance, and a time."""

    test_set: tuple
    epsilon: Fraction
    n: int
    basepoint: str
    stabilizer_input: object = "uniform"

    def validated(self, action: GroupAction) -> "CertificateParams":
        elements = set(self.test_set)
        if action.identity not in elements:
            raise InputError("test set must contain the identity")
        for g in elements:
            if action.inv(g) not in elements:
                raise InputError("test set must be closed under inversion")
        if self.epsilon <= 0:
            raise InputError("epsilon must be positive")
        if self.basepoint not in action.complex.vertices:
            raise InputError(f"unknown basepoint {self.basepoint!r}")
        return self


@dataclass
class Certificate:
    params: CertificateParams
    data: OrbitData
    measures: dict  # x -> {g: Fraction}
    eta: dict  # x -> ProbMeasure on vertices
    ball: frozenset
    active_transversal: tuple
    reps_in_ball: dict
    stabilizer_test_sets: dict
    stabilizer_families: dict
    stabilizer_supports: dict
    support_bound: frozenset


def stabilizer_test_set(cert_or_params, data: OrbitData, t, ball=None) -> frozenset:
    """Elements of the stabilizer the lifted family must be almost invariant for."""
    params = cert_or_params.params if isinstance(cert_or_params, Certificate) else cert_or_params
    action = data.action
    if ball is None:
        ball = action.complex.ball(params.basepoint, params.n)
    reps = [z for z in data.coset_reps[t] if action.act_vertex(z, t) in ball]
    stab = frozenset(data.stabilizers[t])
    out = set()
    for s in params.test_set:
        for g in reps:
            sg = action.mul(s, g)
            z, _ = data.decompositions[t][sg]
            e = action.mul(action.inv(z), sg)
            if e not in stab:
                raise InputError("stabilizer test element left the stabilizer")
            out.add(e)
    return frozenset(out)


def build_certificate(
    action: GroupAction, data: OrbitData, params: CertificateParams
) -> Certificate:
    """Combine basepoint weight measures with lifted stabilizer measures.

    The output assigns to every group element x an exact measure on the
    group, built orbit by orbit: the weight measure from the basepoint
    toward x's translate of the basepoint fixes how much mass each orbit
    point receives, and the lifted stabilizer family distributes that mass
    within the coset over the point.
    """
    params = params.validated(action)
    c = action.complex
    O = params.basepoint
    ball = frozenset(c.ball(O, params.n))
    active = tuple(t for t in data.transversal if data.orbits[t] & ball)
    reps_in_ball = {
        t: tuple(
            z
            for z in data.coset_reps[t]
            if action.act_vertex(z, t) in ball
        )
        for t in active
    }
    if params.stabilizer_input == "uniform":
        families = {t: lift_stabilizer_family(data, t, "uniform") for t in active}
    else:
        families = {}
        for t in active:
            try:
                spec = params.stabilizer_input[t]
            except (KeyError, TypeError):
                raise InputError(
                    f"no stabilizer measure family supplied for transversal point {t!r}"
                ) from None
            families[t] = lift_stabilizer_family(data, t, spec)
    supports = {
        t: frozenset().union(*(m.support for m in families[t].values()))
        for t in active
    }
    test_sets = {
        t: stabilizer_test_set(params, data, t, ball) for t in active
    }

    eta = {
        x: weight_measure(c, params.n, O, action.act_vertex(x, O))
        for x in action.elements
    }
    measures = {}
    for x in action.elements:
        values = {}
        for g in action.elements:
            total = Fraction(0)
            for t in active:
                z, a = data.decompositions[t][g]
                scale = eta[x][action.act_vertex(g, t)]
                if not scale:
                    continue
                nu = families[t][action.mul(action.inv(z), x)]
                total += scale * nu[a]
            if total:
                values[g] = total
        measures[x] = values

    support_bound = frozenset(
        action.mul(z, f)
        for t in active
        for z in reps_in_ball[t]
        for f in supports[t]
    )
    return Certificate(
        params,
        data,
        measures,
        eta,
        ball,
        active,
        reps_in_ball,
        test_sets,
        families,
        supports,
        support_bound,
    )


def _dict_l1(a: dict, b: dict) -> Fraction:
    keys = set(a) | set(b)
    return sum((abs(a.get(k, Fraction(0)) - b.get(k, Fraction(0))) for k in keys), Fraction(0))


@dataclass
class CertificateCheck:
    report: Report
    deviations: dict  # s -> Fraction
    eta_deviations: dict  # s -> Fraction
    nu_deviation: Fraction
    meets_epsilon: bool


def verify_certificate(cert: Certificate) -> CertificateCheck:
    """Exact verification: masses, support bound, and the two-term estimate."""
    report = Report()
    action = cert.data.action
    params = cert.params

    for x, values in cert.measures.items():
        report.checks += 1
        total = sum(values.values(), Fraction(0))
        if total != 1:
            report.add(
                "mass", f"measure at {x.label()} has total {total}", {"x": x.label()}
            )
        if any(v < 0 for v in values.values()):
            report.add("negative-mass", "negative value", {"x": x.label()})
        if not set(values) <= cert.support_bound:
            report.add(
                "support-bound",
                "measure escaped the predicted support",
                {"x": x.label()},
            )

    nu_dev = Fraction(0)
    for t in cert.active_transversal:
        family = cert.stabilizer_families[t]
        for h in sorted(cert.stabilizer_test_sets[t], key=lambda g: g.sort_key):
            for g in action.elements:
                report.checks += 1
                translated = family[g].map_keys(lambda u: action.mul(h, u))
                nu_dev = max(nu_dev, translated.l1(family[action.mul(h, g)]))

    deviations = {}
    eta_deviations = {}
    for s in sorted(set(params.test_set), key=lambda g: g.sort_key):
        if s == action.identity:
            continue
        dev = Fraction(0)
        eta_dev = Fraction(0)
        for x in action.elements:
            sx = action.mul(s, x)
            moved = {action.mul(s, g): v for g, v in cert.measures[x].items()}
            dev = max(dev, _dict_l1(moved, cert.measures[sx]))
            pushed = cert.eta[x].map_keys(lambda v: action.act_vertex(s, v))
            eta_dev = max(eta_dev, pushed.l1(cert.eta[sx]))
        deviations[s] = dev
        eta_deviations[s] = eta_dev
        report.checks += 1
        if dev > eta_dev + nu_dev:
            report.add(
                "two-term-bound",
                f"deviation {dev} exceeds {eta_dev} + {nu_dev}",
                {"s": s.label()},
            )
    worst = max(deviations.values(), default=Fraction(0))
    return CertificateCheck(
        report, deviations, eta_deviations, nu_dev, worst < params.epsilon
    )
