"""Group actions: closure, orbits, cosets, splittings, certificates."""

from fractions import Fraction

import pytest

from cubex import CapExceeded, InputError, ProbMeasure, build_family, parse_family
from cubex.actions import (
    CertificateParams,
    build_certificate,
    equivariant_splitting,
    lift_stabilizer_family,
    orbit_transversal,
    stabilizer_test_set,
    validate_action,
    verify_certificate,
    verify_coset_identities,
    verify_splitting,
)

SWAP = {"00": "00", "01": "10", "10": "01", "11": "11"}
FLIP = {"00": "10", "01": "11", "10": "00", "11": "01"}


@pytest.fixture(scope="module")
def edge_action():
    edge = build_family(parse_family("cube:1"))
    return edge, validate_action(edge, {"s": {"0": "1", "1": "0"}})


@pytest.fixture(scope="module")
def dihedral():
    square = build_family(parse_family("cube:2"))
    return square, validate_action(square, {"r": SWAP, "f": FLIP})


@pytest.fixture(scope="module")
def cube3_action():
    cube = build_family(parse_family("cube:3"))

    def perm(fn):
        return {v: fn(v) for v in cube.vertex_names}

    gens = {
        "c": perm(lambda b: b[2] + b[0] + b[1]),
        "t": perm(lambda b: b[1] + b[0] + b[2]),
        "f": perm(lambda b: ("1" if b[0] == "0" else "0") + b[1:]),
    }
    return cube, validate_action(cube, gens)


def test_edge_action_group(edge_action):
    _, action = edge_action
    assert [g.label() for g in action.elements] == ["e", "s"]


def test_dihedral_has_order_eight(dihedral):
    _, action = dihedral
    assert len(action.elements) == 8


def test_cube3_group_order(cube3_action):
    _, action = cube3_action
    assert len(action.elements) == 48


def test_torn_edge_rejected(grid32):
    tearing = {name: name for name in grid32.vertex_names}
    tearing["(0,0)"], tearing["(2,1)"] = "(2,1)", "(0,0)"
    with pytest.raises(InputError, match="adjacency"):
        validate_action(grid32, {"bad": tearing})


def test_non_bijection_rejected(grid32):
    squash = {name: "(0,0)" for name in grid32.vertex_names}
    with pytest.raises(InputError, match="bijection"):
        validate_action(grid32, {"bad": squash})


def test_closure_cap(cube3_action):
    cube, _ = cube3_action
    gens = {
        "c": {v: v[2] + v[0] + v[1] for v in cube.vertex_names},
        "t": {v: v[1] + v[0] + v[2] for v in cube.vertex_names},
    }
    with pytest.raises(CapExceeded):
        validate_action(cube, gens, closure_cap=3)


def test_vector_action_agrees_with_vertex_action(dihedral):
    square, action = dihedral
    for g in action.elements:
        for name, vec in square.vertices.items():
            assert action.act_vector(g, vec) == square.vertices[action.act_vertex(g, name)]


def test_orbit_data_edge(edge_action):
    _, action = edge_action
    data = orbit_transversal(action)
    assert data.transversal == ("0",)
    assert len(data.stabilizers["0"]) == 1
    assert len(data.coset_reps["0"]) == 2
    assert verify_coset_identities(data).ok


def test_orbit_data_dihedral(dihedral):
    _, action = dihedral
    data = orbit_transversal(action)
    assert data.transversal == ("00",)
    assert len(data.stabilizers["00"]) == 2
    assert len(data.coset_reps["00"]) == 4  # order 8 = 4 cosets x stabilizer 2
    assert verify_coset_identities(data).ok
    assert verify_splitting(data, "00").ok


def test_trivial_group_transversal(grid32):
    action = validate_action(grid32, {})
    data = orbit_transversal(action)
    assert data.transversal == grid32.vertex_names
    for t in data.transversal:
        assert equivariant_splitting(data, t, action.identity) == action.identity


def test_splitting_at_fixed_point_is_identity(dihedral):
    # the swap generator alone fixes both diagonal corners
    square, _ = dihedral
    action = validate_action(square, {"r": SWAP})
    data = orbit_transversal(action)
    assert "00" in data.transversal
    assert len(data.stabilizers["00"]) == 2  # whole group fixes the corner
    for g in action.elements:
        assert equivariant_splitting(data, "00", g) == g


def test_lift_uniform_family(dihedral):
    _, action = dihedral
    data = orbit_transversal(action)
    family = lift_stabilizer_family(data, "00", "uniform")
    stab = data.stabilizers["00"]
    for g in action.elements:
        assert family[g] == ProbMeasure.uniform(stab)
        for h in stab:
            translated = family[g].map_keys(lambda u: action.mul(h, u))
            assert translated.l1(family[action.mul(h, g)]) == 0


def test_lift_point_mass_family_is_exactly_invariant(edge_action):
    _, action = edge_action
    data = orbit_transversal(action)
    family = lift_stabilizer_family(data, "0", "uniform")
    for g in action.elements:
        assert family[g] == ProbMeasure.point(action.identity)


def test_lift_rejects_bad_family(dihedral):
    _, action = dihedral
    data = orbit_transversal(action)
    stab = data.stabilizers["00"]
    with pytest.raises(InputError):
        lift_stabilizer_family(data, "00", {stab[0]: ProbMeasure.point(stab[0])})
    outside = next(g for g in action.elements if g not in set(stab))
    with pytest.raises(InputError):
        lift_stabilizer_family(
            data, "00", {h: ProbMeasure.point(outside) for h in stab}
        )


def test_stabilizer_test_sets(edge_action, dihedral):
    _, action = edge_action
    data = orbit_transversal(action)
    params = CertificateParams(tuple(action.elements), Fraction(1), 3, "0")
    assert stabilizer_test_set(params, data, "0") == {action.identity}

    _, action = dihedral
    data = orbit_transversal(action)
    params = CertificateParams(tuple(action.elements), Fraction(1), 3, "00")
    test_elems = stabilizer_test_set(params, data, "00")
    assert test_elems <= set(data.stabilizers["00"])


def test_params_validation(edge_action):
    _, action = edge_action
    s = action.element("s")
    with pytest.raises(InputError, match="identity"):
        CertificateParams((s,), Fraction(1), 2, "0").validated(action)
    with pytest.raises(InputError, match="epsilon"):
        CertificateParams((action.identity,), Fraction(0), 2, "0").validated(action)
    with pytest.raises(InputError, match="basepoint"):
        CertificateParams((action.identity,), Fraction(1), 2, "zz").validated(action)


def test_edge_certificate_hand_values(edge_action):
    edge, action = edge_action
    data = orbit_transversal(action)
    s = action.element("s")
    params = CertificateParams((action.identity, s), Fraction(3, 4), 3, "0")
    cert = build_certificate(action, data, params)
    assert cert.measures[action.identity] == {action.identity: Fraction(1)}
    assert cert.measures[s] == {action.identity: Fraction(1, 4), s: Fraction(3, 4)}
    check = verify_certificate(cert)
    assert check.report.ok
    assert check.deviations[s] == Fraction(1, 2)
    assert check.eta_deviations[s] == Fraction(1, 2)
    assert check.nu_deviation == 0
    assert check.meets_epsilon


def test_trivial_group_certificate(grid32):
    action = validate_action(grid32, {})
    data = orbit_transversal(action)
    params = CertificateParams((action.identity,), Fraction(1, 10), 2, "(0,0)")
    cert = build_certificate(action, data, params)
    check = verify_certificate(cert)
    assert check.report.ok
    assert check.deviations == {}
    assert cert.measures[action.identity] == {action.identity: Fraction(1)}
    assert check.meets_epsilon


def test_dihedral_certificate_sweep(dihedral):
    _, action = dihedral
    data = orbit_transversal(action)
    test_set = {action.identity, action.element("r"), action.element("f")}
    test_set |= {action.inv(g) for g in test_set}
    previous = None
    for n in (2, 4, 8):
        params = CertificateParams(
            tuple(sorted(test_set, key=lambda g: g.sort_key)), Fraction(2), n, "00"
        )
        cert = build_certificate(action, data, params)
        check = verify_certificate(cert)
        assert check.report.ok, [f.to_json() for f in check.report.findings]
        assert check.nu_deviation == 0
        worst = max(check.deviations.values())
        if previous is not None:
            assert worst <= previous
        previous = worst


def test_custom_family_deviation_measured(dihedral):
    # a family that is not equivariant on the stabilizer: the lifted measures
    # pay for it through a positive stabilizer deviation, and the two-term
    # bound still holds
    _, action = dihedral
    data = orbit_transversal(action)
    stab = data.stabilizers["00"]
    e, r = stab
    family = {e: ProbMeasure.point(e), r: ProbMeasure.uniform(stab)}
    test_set = {action.identity, action.element("r"), action.element("f")}
    test_set |= {action.inv(g) for g in test_set}
    params = CertificateParams(
        tuple(sorted(test_set, key=lambda g: g.sort_key)),
        Fraction(4),
        4,
        "00",
        stabilizer_input={"00": family},
    )
    cert = build_certificate(action, data, params)
    check = verify_certificate(cert)
    assert check.report.ok
    assert check.nu_deviation > 0


def test_support_bound_structure(cube3_action):
    _, action = cube3_action
    data = orbit_transversal(action)
    params = CertificateParams((action.identity,), Fraction(1), 2, "000")
    cert = build_certificate(action, data, params)
    t = cert.active_transversal[0]
    stab = set(data.stabilizers[t])
    recomputed = {
        action.mul(z, f)
        for z in cert.reps_in_ball[t]
        for f in cert.stabilizer_supports[t]
    }
    assert cert.support_bound == frozenset(recomputed)
    assert cert.stabilizer_supports[t] <= stab
    for values in cert.measures.values():
        assert set(values) <= cert.support_bound
