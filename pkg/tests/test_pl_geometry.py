import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prodembed.complex_core import SimplicialComplex, join_power, skeleton_complex
from prodembed.pl_geometry import (
    AffineDependenceError,
    BoundaryCollisionError,
    DegeneracyError,
    GeometricComplex,
    ResampleBudgetError,
    _bareiss_solve,
    affinely_independent,
    apex_sequence,
    closed_simplices_intersect,
    cone_lift_parity,
    general_position_check,
    intersection_parity_maps,
    linking_parity_cone,
    membrane_linking_parity,
    random_embedding,
    simplex_intersection_parity,
)

from helpers import cycle_complex, disjoint_union_embedding, torus_complex
from oracles import fraction_solve, projection_linking_parity


def polygon_edges(points):
    return [(points[k], points[(k + 1) % len(points)]) for k in range(len(points))]


TRI_A = [(3, 0, 0), (-2, 3, 0), (-2, -3, 0)]
TRI_B = [(0, 0, 1), (0, 0, -3), (6, 0, 1)]


# -- simplex parity -------------------------------------------------------------

def test_crossing_diagonals():
    assert simplex_intersection_parity([(0, 0), (2, 2)], [(0, 2), (2, 0)]) == 1


def test_disjoint_segments():
    assert simplex_intersection_parity([(0, 0), (1, 1)], [(5, 5), (6, 7)]) == 0


def test_segment_pierces_triangle():
    tri = [(0, 0, 0), (4, 0, 0), (0, 4, 0)]
    assert simplex_intersection_parity(tri, [(1, 1, -1), (1, 1, 1)]) == 1
    assert simplex_intersection_parity(tri, [(5, 5, -1), (5, 5, 1)]) == 0


def test_shared_endpoint_is_degenerate():
    with pytest.raises(DegeneracyError):
        simplex_intersection_parity([(0, 0), (1, 1)], [(1, 1), (2, 0)])


def test_parallel_segments_are_degenerate():
    with pytest.raises(DegeneracyError):
        simplex_intersection_parity([(0, 0), (1, 0)], [(0, 1), (1, 1)])


def test_degenerate_inputs():
    with pytest.raises(AffineDependenceError):
        simplex_intersection_parity([(0, 0, 0), (1, 1, 1), (2, 2, 2)], [(0, 1, 0), (0, 0, 1)])
    with pytest.raises(ValueError):
        simplex_intersection_parity([(0, 0), (1, 1)], [(0, 1)])


def test_fractional_coordinates():
    half = Fraction(1, 2)
    assert simplex_intersection_parity([(0, 0), (1, 1)], [(0, 1), (1, 0)]) == 1
    third = Fraction(1, 3)
    assert simplex_intersection_parity([(0, 0), (third, third)], [(0, 1), (1, 0)]) == 0
    assert simplex_intersection_parity([(third, 0), (half, 1)], [(0, half), (1, half)]) == 1
    with pytest.raises(DegeneracyError):
        simplex_intersection_parity([(0, 0), (half, half)], [(0, 1), (1, 0)])


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda n: st.tuples(
            st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n),
            st.lists(st.integers(-9, 9), min_size=n, max_size=n),
        )
    )
)
def test_bareiss_matches_fraction_oracle(system):
    cols, rhs = system
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(len(rhs))]
    expected = fraction_solve(matrix, rhs)
    got = _bareiss_solve([c[:] for c in cols], rhs)
    if expected is None:
        assert got is None
    else:
        d, y = got
        assert [Fraction(v, d) for v in y] == expected


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_segment_parity_matches_fraction_oracle(rnd):
    pts = [tuple(rnd.randint(-20, 20) for _ in range(2)) for _ in range(4)]
    (p, q), (r, s) = pts[:2], pts[2:]
    matrix = [[p[0] - q[0], s[0] - r[0]], [p[1] - q[1], s[1] - r[1]]]
    sol = fraction_solve(matrix, [s[0] - q[0], s[1] - q[1]])
    try:
        got = simplex_intersection_parity([p, q], [r, s])
    except (DegeneracyError, AffineDependenceError):
        return
    t, u = sol
    assert got == int(0 < t < 1 and 0 < u < 1)


def test_closed_simplices_intersect():
    assert closed_simplices_intersect([(0, 0), (2, 0)], [(1, 0), (3, 0)])
    assert closed_simplices_intersect([(0, 0), (1, 1)], [(1, 1), (2, 0)])
    assert not closed_simplices_intersect([(0, 0), (1, 0)], [(0, 1), (1, 1)])
    tri = [(0, 0, 0), (4, 0, 0), (0, 4, 0)]
    assert closed_simplices_intersect(tri, [(1, 1, 0)])
    assert not closed_simplices_intersect(tri, [(1, 1, 1)])


def test_affine_independence():
    assert affinely_independent([(0, 0), (1, 0), (0, 1)])
    assert not affinely_independent([(0, 0), (1, 1), (2, 2)])


# -- general position and sampling ----------------------------------------------

def test_points_on_a_line_are_general():
    g = GeometricComplex(skeleton_complex(0, 3), {str(k): (k + 1,) for k in range(4)}, 1)
    assert general_position_check(g)


def test_identical_triangles_are_not_general():
    c = SimplicialComplex.from_facets([("a", "b", "c"), ("x", "y", "z")])
    pts = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0)]
    coords = dict(zip("abc", pts)) | dict(zip("xyz", pts))
    res = general_position_check(GeometricComplex(c, coords, 4))
    assert not res and res.witness is not None


def test_random_embedding_general_and_deterministic():
    c = join_power(skeleton_complex(0, 3), 2)
    for seed in range(5):
        g = random_embedding(c, 3, seed)
        assert general_position_check(g)
        assert random_embedding(c, 3, seed).coords == g.coords
    assert random_embedding(c, 3, 1).coords != random_embedding(c, 3, 2).coords


def test_random_embedding_refuses_high_dimension_without_opt_out():
    with pytest.raises(ValueError):
        random_embedding(skeleton_complex(2, 4), 4, 0)


def test_resample_budget():
    with pytest.raises(ResampleBudgetError):
        random_embedding(skeleton_complex(1, 3), 3, 0, budget=5, coord_range=0)


def test_text_round_trip():
    g = random_embedding(join_power(skeleton_complex(0, 3), 3), 5, 7)
    assert GeometricComplex.from_text(g.to_text()) == g
    half = GeometricComplex(skeleton_complex(0, 1), {"0": (Fraction(1, 2),), "1": (Fraction(-7, 3),)}, 1)
    assert "v 1 -7/3" in half.to_text()
    assert GeometricComplex.from_text(half.to_text()).coords == half.coords


# -- linking ------------------------------------------------------------------

def test_zero_spheres_on_a_line():
    alt = linking_parity_cone([[(1,)], [(3,)]], [[(2,)], [(4,)]])
    sep = linking_parity_cone([[(1,)], [(2,)]], [[(3,)], [(4,)]])
    assert (alt, sep) == (1, 0)


def test_triangle_pair_linked_and_matches_projection_oracle():
    assert projection_linking_parity(TRI_A, TRI_B) == 1
    assert linking_parity_cone(polygon_edges(TRI_A), polygon_edges(TRI_B)) == 1


def test_membrane_on_a_line():
    assert membrane_linking_parity([((1,), (3,))], [((2,), (4,))]) == 1
    assert membrane_linking_parity([((1,), (2,))], [((3,), (4,))]) == 0


def random_polygon(rng, k, dim=3, r=50):
    return [tuple(rng.randint(-r, r) for _ in range(dim)) for _ in range(k)]


def test_cone_linking_properties_on_random_polygons():
    rng = random.Random(11)
    checked = 0
    while checked < 40:
        a, b = random_polygon(rng, rng.randint(3, 5)), random_polygon(rng, rng.randint(3, 5))
        ea, eb = polygon_edges(a), polygon_edges(b)
        try:
            oracle = projection_linking_parity(a, b)
            lk = linking_parity_cone(ea, eb)
        except (ValueError, DegeneracyError):
            continue
        checked += 1
        assert lk == oracle
        assert linking_parity_cone(eb, ea) == lk
        values = set()
        for apex in itertools.islice(apex_sequence(3, start=3), 12):
            try:
                values.add(linking_parity_cone(ea, eb, apex=apex))
            except DegeneracyError:
                pass
        assert values == {lk}
        assert cone_lift_parity(ea, eb) == lk


# -- closed manifolds -----------------------------------------------------------

def test_torus_triangulation_is_closed_surface():
    t = torus_complex()
    assert t.f_vector() == (9, 27, 18)
    assert 9 - 27 + 18 == 0


def test_closed_polygons_in_plane_meet_evenly():
    for seed in range(30):
        a, b = disjoint_union_embedding([cycle_complex(5), cycle_complex(6)], 2, seed)
        assert intersection_parity_maps(a, b) == 0


def test_closed_tori_in_r4_meet_evenly():
    for seed in range(5):
        a, b = disjoint_union_embedding([torus_complex(), torus_complex()], 4, seed)
        assert intersection_parity_maps(a, b) == 0


def test_open_paths_can_meet_oddly():
    path = SimplicialComplex.from_facets([("0", "1")])
    a = GeometricComplex(path, {"0": (0, 0), "1": (2, 2)}, 2)
    b = GeometricComplex(path, {"0": (0, 2), "1": (2, 0)}, 2)
    assert intersection_parity_maps(a, b) == 1


def test_boundary_collision_reported():
    path = SimplicialComplex.from_facets([("0", "1")])
    a = GeometricComplex(path, {"0": (0, 0), "1": (2, 2)}, 2)
    b = GeometricComplex(path, {"0": (2, 2), "1": (3, 0)}, 2)
    with pytest.raises(BoundaryCollisionError):
        intersection_parity_maps(a, b)


def test_degenerate_pair_is_identified():
    path = SimplicialComplex.from_facets([("0", "1")])
    a = GeometricComplex(path, {"0": (0, 0), "1": (2, 0)}, 2)
    b = GeometricComplex(path, {"0": (1, 1), "1": (1, -1)}, 2)
    assert intersection_parity_maps(a, b) == 1
    c = GeometricComplex(path, {"0": (1, 0), "1": (1, -1)}, 2)
    with pytest.raises(DegeneracyError):
        intersection_parity_maps(a, c)
