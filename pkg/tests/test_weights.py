"""Weight functions: frozen worked values, identities, oracle agreement."""

from fractions import Fraction
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubex import (
    AmbientDimensionError,
    DomainError,
    InputError,
    ProbMeasure,
    build_family,
    parse_family,
)
from cubex.actions import validate_action
from cubex.weights import (
    adjacent_difference,
    deficiency,
    deficiency_set,
    expected_mass,
    l1_diff,
    verify_weight_identities,
    weight,
    weight_measure,
    weight_vector,
)

from oracles import GraphOracle

GRID32_TABLE = {
    "(0,0)": 1,
    "(1,0)": 1,
    "(0,1)": 2,
    "(1,1)": 1,
    "(2,0)": 1,
    "(2,1)": 0,
}


def test_grid_worked_table_frozen(grid32):
    for a, expected in GRID32_TABLE.items():
        assert weight(grid32, 2, "(0,0)", "(2,1)", a) == expected
    wv = weight_vector(grid32, 2, "(0,0)", "(2,1)")
    assert wv.total_mass() == 6 == expected_mass(2, 2)


def test_grid_worked_table_oracle(grid32):
    oracle = GraphOracle(grid32)
    for a, expected in GRID32_TABLE.items():
        assert oracle.weight(2, 2, "(0,0)", "(2,1)", a) == expected


def test_edge_weights(edge):
    x, y = "0", "1"
    for n in range(8):
        assert weight(edge, n, x, y, x) == 1
        assert weight(edge, n, x, y, y) == n
        assert weight_vector(edge, n, x, y).total_mass() == n + 1
    measure = weight_measure(edge, 3, x, y)
    assert measure["0"] == Fraction(1, 4)
    assert measure["1"] == Fraction(3, 4)


def test_grid_normalized_measure(grid32):
    measure = weight_measure(grid32, 2, "(0,0)", "(2,1)")
    assert dict(measure.items()) == {
        name: Fraction(count, 6)
        for name, count in GRID32_TABLE.items()
        if count
    }


def test_weight_at_own_target(grid44):
    n = 5
    for name in list(grid44.vertex_names)[:4]:
        assert weight(grid44, n, name, name, name) == expected_mass(n, 2)
        measure = weight_measure(grid44, n, name, name)
        assert measure == ProbMeasure.point(name)


def test_deficiency_examples(grid32, edge):
    ds = deficiency_set(grid32, "(0,0)", "(2,1)", "(0,1)")
    assert ds.hyperplanes == {"K0"}
    assert ds.deficiency == 1
    assert deficiency(grid32, "(0,0)", "(0,0)", "(0,0)") == grid32.ambient_dim
    assert deficiency_set(edge, "0", "1", "0").hyperplanes == {"D0"}


def test_deficiency_domain_error(grid32):
    with pytest.raises(DomainError):
        deficiency_set(grid32, "(0,0)", "(1,0)", "(2,1)")


def test_deficiency_ambient_error(cube2):
    tight = cube2.with_ambient_dim(1)
    with pytest.raises(AmbientDimensionError):
        deficiency_set(tight, "00", "11", "00")


def test_weight_vanishes_off_interval_and_ball(grid44):
    assert weight(grid44, 3, "(0,0)", "(1,0)", "(0,1)") == 0  # off the interval
    assert weight(grid44, 1, "(0,0)", "(3,3)", "(2,2)") == 0  # outside the ball


def test_edge_adjacent_difference_hand_value(edge):
    wx = weight_vector(edge, 5, "0", "1").values
    wy = weight_vector(edge, 5, "1", "1").values
    assert l1_diff(wx, wy) == 2 == adjacent_difference(5, 1)


@pytest.mark.parametrize("spec", ["cube:1", "grid:3x2", "star:5", "cube:2", "tree:3,2"])
def test_identities_sweep(spec):
    c = build_family(parse_family(spec))
    report = verify_weight_identities(c, 6)
    assert report.ok, [f.to_json() for f in report.findings]


def test_identities_sweep_with_ideal_targets(grid44):
    extra = [
        (spec.label, spec.restrict(grid44)) for spec in grid44.family.ideal_points
    ]
    report = verify_weight_identities(grid44, 4, extra_targets=extra)
    assert report.ok


def test_equivariance_with_square_swap(cube2):
    action = validate_action(
        cube2, {"r": {"00": "00", "01": "10", "10": "01", "11": "11"}}
    )
    report = verify_weight_identities(cube2, 5, action=action)
    assert report.ok


def test_equivariance_over_ideal_targets(grid44):
    # the transpose of the square grid acts on the ideal corner rules too,
    # through the induced signed hyperplane permutation
    transpose = {
        f"({p},{q})": f"({q},{p})" for p in range(4) for q in range(4)
    }
    action = validate_action(grid44, {"t": transpose})
    extra = [
        (spec.label, spec.restrict(grid44))
        for spec in grid44.family.ideal_points
        if spec.label.startswith("corner:")
    ]
    report = verify_weight_identities(grid44, 3, action=action, extra_targets=extra)
    assert report.ok, [f.to_json() for f in report.findings]
    g = action.element("t")
    ne = dict(extra)["corner:ne"]
    assert action.act_vector(g, ne) == ne  # the diagonal fixes that corner


def test_source_partition_covers_sweep(grid32):
    whole = verify_weight_identities(grid32, 3)
    parts = [
        verify_weight_identities(grid32, 3, sources=chunk)
        for chunk in (list(grid32.vertex_names)[:3], list(grid32.vertex_names)[3:])
    ]
    assert whole.checks == sum(p.checks for p in parts)
    assert all(p.ok for p in parts)


POOL = ["cube:1", "cube:2", "cube:3", "grid:3x2", "grid:4x4", "star:5", "tree:3,2"]


@st.composite
def weight_case(draw):
    spec = draw(st.sampled_from(POOL))
    c = build_family(parse_family(spec))
    names = sorted(c.vertex_names)
    x = draw(st.sampled_from(names))
    z = draw(st.sampled_from(names))
    n = draw(st.integers(min_value=0, max_value=6))
    return c, x, z, n


@settings(max_examples=80, deadline=None)
@given(weight_case())
def test_weight_vector_matches_graph_oracle(case):
    c, x, z, n = case
    oracle = GraphOracle(c)
    assert weight_vector(c, n, x, z).values == oracle.weight_table(
        n, c.ambient_dim, x, z
    )


@settings(max_examples=60, deadline=None)
@given(weight_case())
def test_mass_and_support_properties(case):
    c, x, z, n = case
    wv = weight_vector(c, n, x, z)
    assert wv.total_mass() == expected_mass(n, c.ambient_dim)
    ball = c.ball(x, n)
    interval = c.interval(x, z)
    assert wv.support() <= ball & interval


# -- probability measures --------------------------------------------------------


def test_prob_measure_rejects_bad_mass():
    with pytest.raises(InputError):
        ProbMeasure({"a": Fraction(1, 2)})
    with pytest.raises(InputError):
        ProbMeasure({"a": Fraction(3, 2), "b": Fraction(-1, 2)})


def test_prob_measure_l1_and_pushforward():
    mu = ProbMeasure({"a": Fraction(1, 4), "b": Fraction(3, 4)})
    nu = ProbMeasure({"a": Fraction(1, 2), "c": Fraction(1, 2)})
    assert mu.l1(nu) == Fraction(1, 4) + Fraction(3, 4) + Fraction(1, 2)
    moved = mu.map_keys(lambda k: k.upper())
    assert moved["A"] == Fraction(1, 4)
    assert ProbMeasure.uniform(["x", "y"]).l1(ProbMeasure.point("x")) == 1
