"""Core sign-vector operations against the BFS graph oracle."""

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubex import (
    CubeComplex,
    InputError,
    SignVector,
    build_family,
    parse_family,
    validate_complex,
)
from cubex.complex import complex_from_json, complex_to_json, majority

from oracles import GraphOracle, oracle_admissible

POOL_SPECS = ["cube:1", "cube:2", "cube:3", "grid:3x2", "grid:4x4", "star:5", "tree:3,2", "grid:5x1"]


@pytest.fixture(scope="module", params=POOL_SPECS)
def pooled(request):
    c = build_family(parse_family(request.param))
    return c, GraphOracle(c)


def test_distance_matches_separator_count(pooled):
    c, oracle = pooled
    for x, y in combinations(c.vertex_names, 2):
        assert c.distance(x, y) == oracle.distance(x, y)


def test_interval_matches_geodesics(pooled):
    c, oracle = pooled
    for x, y in combinations(c.vertex_names, 2):
        assert c.interval(x, y) == oracle.interval(x, y)
    for x in c.vertex_names:
        assert c.interval(x, x) == {x}


def test_median_matches_oracle(pooled):
    c, oracle = pooled
    for x, y, z in combinations(c.vertex_names, 3):
        assert c.median_vertex(x, y, z) == oracle.median(x, y, z)


def test_median_axioms(pooled):
    c, _ = pooled
    names = c.vertex_names
    for x in names:
        for y in names:
            assert c.median_vertex(x, x, y) == x
    for x, y, z in combinations(names, 3):
        m = c.median_vertex(x, y, z)
        assert m == c.median_vertex(y, z, x) == c.median_vertex(z, x, y)
        assert m in c.interval(x, y) & c.interval(y, z) & c.interval(x, z)


def test_interval_points_split_distance(pooled):
    c, _ = pooled
    for x, y in combinations(c.vertex_names, 2):
        d = c.distance(x, y)
        for a in c.interval(x, y):
            assert c.distance(x, a) + c.distance(a, y) == d


def test_neighbor_across_differs_exactly_on_one(pooled):
    c, _ = pooled
    for a in c.vertex_names:
        for h in c.hyperplanes:
            b = c.neighbor_across(a, h)
            if b is not None:
                assert c.separators(a, b) == {h}


def test_admissibility_oracle_agreement(pooled):
    c, _ = pooled
    result = c.enumerate_admissible()
    assert result.complete
    assert result.vectors == frozenset(c.vertices.values())
    # spot check the pairwise definition on vertices and perturbed vectors
    for name in c.vertex_names[:3]:
        vec = c.vertices[name]
        signs = {h: vec.sign(h) for h in c.hyperplanes}
        assert c.is_admissible(vec)
        assert oracle_admissible(c, signs)
    for h0 in c.hyperplanes[:4]:
        flipped = c.vertices[c.vertex_names[-1]].flip(h0)
        signs = {h: flipped.sign(h) for h in c.hyperplanes}
        assert c.is_admissible(flipped) == oracle_admissible(c, signs)


def test_every_original_vertex_is_admissible(pooled):
    c, _ = pooled
    for vec in c.vertices.values():
        assert c.is_admissible(vec)


def test_path_inadmissible_orientation():
    # path a-b-c: choosing the a-side of one cut and the c-side of the other
    path = build_family(parse_family("grid:3x1"))
    z = SignVector({"K1"})  # +1 on K0 (a side), -1 on K1 (c side)
    assert not path.is_admissible(z)
    assert len(path.enumerate_admissible().vectors) == 3


def test_validate_square_ok(cube2):
    assert validate_complex(cube2).ok


def test_square_minus_corner_is_still_closed():
    # dropping one corner of the square leaves an L-shaped path, and every
    # majority of the three survivors is a survivor; the honest brute-force
    # check accepts it
    lpath = CubeComplex(
        ["D0", "D1"],
        {"00": (), "01": ("D1",), "10": ("D0",)},
        "00",
        ambient_dim=2,
    )
    assert validate_complex(lpath).ok


def test_validate_catches_median_closure_violation():
    # three pairwise-distance-two corners of the 3-cube: their majority is a
    # fourth point that is missing from the vertex set
    c3 = CubeComplex(
        ["D0", "D1", "D2"],
        {
            "000": (),
            "110": ("D0", "D1"),
            "011": ("D1", "D2"),
        },
        "000",
        ambient_dim=3,
    )
    report = validate_complex(c3)
    assert not report.ok
    witness = next(f for f in report.findings if f.kind == "median-closure")
    assert set(witness.witness["triple"]) == {"000", "110", "011"}
    assert witness.witness["median_neg"] == ["D1"]


def test_validate_catches_non_separating():
    c = CubeComplex(["H", "DEAD"], {"x": (), "y": ("H",)}, "x", ambient_dim=1)
    report = validate_complex(c)
    assert any(f.kind == "non-separating-hyperplane" for f in report.findings)


def test_validate_catches_duplicate_partition():
    c = CubeComplex(
        ["H", "H2"], {"x": (), "y": ("H", "H2")}, "x", ambient_dim=2
    )
    report = validate_complex(c)
    assert any(f.kind == "duplicate-partition" for f in report.findings)


def test_validate_catches_base_orientation():
    c = CubeComplex(["H"], {"x": ("H",), "y": ()}, "x", ambient_dim=1)
    report = validate_complex(c)
    assert any(f.kind == "base-orientation" for f in report.findings)


def test_unknown_hyperplane_is_input_error():
    with pytest.raises(InputError):
        CubeComplex(["H"], {"x": (), "y": ("NOPE",)}, "x")


def test_dimension_estimates():
    assert build_family(parse_family("cube:3")).dimension == 3
    assert build_family(parse_family("grid:4x4")).dimension == 2
    assert build_family(parse_family("star:6")).dimension == 1
    assert build_family(parse_family("tree:3,2")).dimension == 1


def test_json_round_trip(grid32):
    data = complex_to_json(grid32)
    back = complex_from_json(data)
    assert back.hyperplanes == grid32.hyperplanes
    assert back.vertices == grid32.vertices
    assert back.base == grid32.base
    assert back.ambient_dim == grid32.ambient_dim


def test_json_rejects_bad_rows():
    with pytest.raises(InputError):
        complex_from_json(
            {"hyperplanes": ["H"], "base": "x", "vertices": {"x": [1, 1]}}
        )
    with pytest.raises(InputError):
        complex_from_json(
            {"hyperplanes": ["H"], "base": "x", "vertices": {"x": [2]}}
        )


@st.composite
def pool_complex_and_vertices(draw, count=3):
    spec = draw(st.sampled_from(POOL_SPECS))
    c = build_family(parse_family(spec))
    names = draw(
        st.lists(st.sampled_from(sorted(c.vertex_names)), min_size=count, max_size=count)
    )
    return c, names


@settings(max_examples=60, deadline=None)
@given(pool_complex_and_vertices())
def test_median_majority_is_between(case):
    c, (x, y, z) = case
    m = c.median(x, y, z)
    assert c.in_interval(m, x, y)
    assert c.in_interval(m, y, z)
    assert c.in_interval(m, x, z)
    assert majority(c.vector(x), c.vector(y), c.vector(z)) == m


@settings(max_examples=60, deadline=None)
@given(pool_complex_and_vertices(count=2))
def test_distance_is_a_metric_on_samples(case):
    c, (x, y) = case
    assert c.distance(x, y) == c.distance(y, x)
    assert (c.distance(x, y) == 0) == (x == y)
    for w in list(c.vertex_names)[:5]:
        assert c.distance(x, y) <= c.distance(x, w) + c.distance(w, y)
