import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from polytope_em import linalg
from polytope_em.decomposition import (
    AWAY,
    TOWARD,
    NonGenericXi,
    ZeroPairing,
    _beta,
    arrangement_cells,
    bg_region_point,
    brianchon_gram_terms,
    decomposition_terms,
    evaluate_terms,
    find_epsilon,
    furthest_vertex,
    in_paradan_region,
    lawrence_varchenko_terms,
    subset_expansion_sides,
    phi,
    polarize,
    project,
    region_signature,
    sample_points,
    verify_decomposition,
    wall_hyperplanes,
    weighted_indicator_cone,
    weighted_indicator_polytope,
)
from polytope_em.exact import CycloNumber, cyclo
from polytope_em.polytope import builtin, cone_generators, smallest_face_containing

from conftest import SUITE, random_weights

F = Fraction


def satisfies_face_condition(P, eps):
    """Only the projection condition: no beta lands on a smaller face."""
    for face in P.face_list:
        G = smallest_face_containing(P, _beta(P, eps, face))
        if G is not None and G.facets != face.facets:
            return False
    return True


def test_project_examples():
    assert project((F(1, 3), F(2, 5)), (F(1, 3), F(2, 5)), ()) == (F(1, 3), F(2, 5))
    assert project((3, 5), (0, 0), ((1, 0),)) == (3, 0)
    assert project((0, 0), (1, 0), ((-1, 1),)) == (F(1, 2), F(1, 2))


@given(st.lists(st.fractions(-5, 5, max_denominator=9), min_size=3, max_size=3))
@settings(max_examples=50, deadline=None)
def test_project_is_orthogonal_and_idempotent(x):
    base, dirs = (1, 0, 2), ((1, 1, 0), (0, 1, -1))
    b = project(x, base, dirs)
    r = linalg.sub(x, b)
    assert all(linalg.dot(r, d) == 0 for d in dirs)
    assert project(b, base, dirs) == b


def test_region_interior_point():
    P = builtin("square")
    assert in_paradan_region(P, (F(1, 3), F(1, 5)))


def test_region_facet_hyperplane_inside():
    P = builtin("square")
    check = in_paradan_region(P, (0, F(1, 3)))
    assert not check
    assert check.witness.kind == "face"
    assert check.witness.subface.facets == frozenset({0})


def test_face_condition_does_not_imply_pairing_condition():
    # on the line of the slanted facet of T2 but outside P: every projection
    # avoids smaller faces, yet the generator of that facet pairs to zero
    P = builtin("T2")
    eps = (F(-8, 7), F(30, 7))
    assert P.slacks(eps)[2] == 0 and not P.contains(eps)
    assert satisfies_face_condition(P, eps)
    check = in_paradan_region(P, eps)
    assert not check
    assert check.witness.kind == "generator" and check.witness.facet == 2


def test_phi_examples():
    P = builtin("square")
    eps = (F(1, 4), F(1, 4))
    assert all(phi(P, eps, face) == 1 for face in P.face_list)
    assert phi(P, (F(1, 2), 3), P.face({0})) == 0
    assert phi(P, (5, 5), P.face(())) == 0


def test_polarize_interior_flips_everything():
    P = builtin("T2")
    eps = find_epsilon(P, "interior", seed=3)
    for face in P.face_list:
        cone = polarize(P, face, eps, TOWARD)
        if phi(P, eps, face):
            assert cone.m == face.codim


@pytest.mark.parametrize("name", SUITE)
def test_away_polarization_fixes_furthest_vertex(name):
    P = builtin(name)
    for seed in range(4):
        eps = find_epsilon(P, "interior", seed=seed)
        v0 = furthest_vertex(P, eps)
        face = next(f for f in P.vertex_faces() if P.vertices[f.vertices[0]] == v0)
        assert polarize(P, face, eps, AWAY).m == 0


def test_polarize_whole_space():
    P = builtin("cube")
    cone = polarize(P, P.face(()), (F(1, 3), F(1, 5), F(1, 7)))
    assert cone.m == 0 and cone.generators == ()


@pytest.mark.parametrize("name", SUITE)
@pytest.mark.parametrize("variant", [TOWARD, AWAY])
def test_polarized_generators_pair_positively(name, variant):
    P = builtin(name)
    eps = find_epsilon(P, "exterior", seed=5)
    for face in P.face_list:
        cone = polarize(P, face, eps, variant)
        beta = _beta(P, eps, face)
        pol = linalg.sub(beta, eps) if variant == TOWARD else linalg.sub(eps, beta)
        eff = cone.effective_normals(P)
        for j, a in cone.generators:
            assert linalg.dot(a, pol) > 0
            for l in face.facets:
                assert linalg.dot(a, eff[l]) == (j == l)
        # flipping back and negating the polarizing vector keeps the pairing positive
        for j, a in cone.generators:
            assert linalg.dot(linalg.scale(-1, a), linalg.scale(-1, pol)) > 0


def test_polarize_rejects_wall():
    P = builtin("square")
    with pytest.raises(ZeroPairing):
        decomposition_terms(P, (1, F(1, 3)))


def test_polytope_indicator_examples():
    P = builtin("square")
    w = [F(1, 2), F(1, 3), F(1, 5), F(1, 7)]
    assert weighted_indicator_polytope(P, [F(1, 2)] * 4, (F(1, 2), F(1, 3))) == 1
    assert weighted_indicator_polytope(P, w, (0, F(1, 2))) == w[0]
    assert weighted_indicator_polytope(P, w, (0, 0)) == w[0] * w[2]
    assert weighted_indicator_polytope(P, w, (2, 0)) == 0


def test_cone_indicator_examples():
    P = builtin("square")
    w = [F(2, 3)] * 4
    eps = (F(1, 5), F(-1, 3))
    cone = polarize(P, P.face({0, 2}), eps)
    assert cone.flipped() == frozenset({0})
    assert weighted_indicator_cone(P, cone, w, (F(-1, 2), F(1, 2))) == 1
    assert weighted_indicator_cone(P, cone, w, (F(-1, 2), 0)) == w[2]
    assert weighted_indicator_cone(P, cone, w, (0, F(1, 2))) == 1 - w[0]
    assert weighted_indicator_cone(P, cone, w, (F(1, 2), F(1, 2))) == 0


@given(st.integers(1, 6), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_subset_expansion_identity(n, seed):
    rng = random.Random(seed)
    qs = [CycloNumber(12, [F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)]) for _ in range(n)]
    lhs, rhs = subset_expansion_sides(qs)
    assert lhs == rhs


def test_subset_expansion_at_square_vertex():
    q1, q2 = F(3, 7), F(-2, 5)
    assert q1 * q2 == 1 + (q1 - 1) + (q2 - 1) + (q1 - 1) * (q2 - 1)
    P = builtin("square")
    w = [q1, F(1, 2), q2, F(1, 2)]
    total = evaluate_terms(P, brianchon_gram_terms(P), w, (0, 0))
    assert total == q1 * q2


def test_sample_policy():
    for name in SUITE:
        P = builtin(name)
        pts = sample_points(P)
        assert len(pts) >= 200
        assert set(P.vertices) <= set(pts)
        assert any(not P.contains(x) for x in pts)
        if P.d > 1:
            for i in range(P.n_facets):
                assert any(P.slacks(x)[i] == 0 and P.contains(x) for x in pts if x not in P.vertices)
        assert sample_points(P) == pts


@pytest.mark.parametrize("name", SUITE)
@pytest.mark.parametrize("kind", ["interior", "exterior", "vertex-only"])
@pytest.mark.parametrize("variant", [TOWARD, AWAY])
def test_decomposition_identity(name, kind, variant):
    P = builtin(name)
    eps = find_epsilon(P, kind, seed=11)
    w = random_weights(P.n_facets, seed=len(name))
    assert verify_decomposition(P, w, eps, variant).ok


def test_t2_dense_grid():
    P = builtin("T2")
    rng = random.Random(41)
    pts = [(F(i, 10) - F(1, 2), F(j, 8) - F(1, 2)) for i in range(41) for j in range(41)]
    for seed in range(3):
        eps = find_epsilon(P, "exterior", seed=seed)
        w = [F(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(3)]
        assert verify_decomposition(P, w, eps, TOWARD, points=pts).ok
        assert verify_decomposition(P, w, eps, AWAY, points=pts).ok


@pytest.mark.parametrize("name", SUITE)
def test_variants_agree_pointwise(name):
    P = builtin(name)
    w = random_weights(P.n_facets, seed=2)
    eps = find_epsilon(P, "exterior", seed=4)
    t1, t2 = decomposition_terms(P, eps, TOWARD), decomposition_terms(P, eps, AWAY)
    for x in sample_points(P, seed=1):
        assert evaluate_terms(P, t1, w, x) == evaluate_terms(P, t2, w, x)


def test_signs_follow_flip_count():
    P = builtin("cube")
    eps = find_epsilon(P, "exterior", seed=9)
    for t in decomposition_terms(P, eps, TOWARD):
        assert t.sign == (-1) ** t.cone.m
    for t in decomposition_terms(P, eps, AWAY):
        assert t.sign == (-1) ** (t.cone.m + t.face.dim)


@pytest.mark.parametrize("name", SUITE)
def test_vertex_only_epsilon(name):
    P = builtin(name)
    eps = find_epsilon(P, "vertex-only", seed=1)
    for t in decomposition_terms(P, eps, AWAY):
        assert t.phi == (t.face.dim == 0)


@pytest.mark.parametrize("name", SUITE)
def test_lawrence_varchenko_matches_vertex_terms(name):
    P = builtin(name)
    eps = find_epsilon(P, "vertex-only", seed=2)
    xi = linalg.sub(eps, furthest_vertex(P, eps))
    lv = lawrence_varchenko_terms(P, xi)
    away = [t for t in decomposition_terms(P, eps, AWAY) if t.phi]
    assert [t.face for t in lv] == [t.face for t in away]
    for a, b in zip(lv, away):
        assert a.cone.signs == b.cone.signs
        assert a.sign == b.sign


def test_lawrence_varchenko_classical():
    P = builtin("T2")
    terms = lawrence_varchenko_terms(P, (F(3), F(1, 7)))
    ones = [1] * 3
    for x in [(F(1, 5), F(1, 3)), (F(1, 10), F(1, 10))]:
        assert evaluate_terms(P, terms, ones, x) == 1
    assert evaluate_terms(P, terms, ones, (3, 3)) == 0
    # an xi with every pairing positive at one vertex leaves that cone alone
    v_terms = [t for t in terms if t.cone.m == 0]
    assert len(v_terms) == 1


def test_lawrence_varchenko_rejects_orthogonal_xi():
    P = builtin("square")
    with pytest.raises(NonGenericXi):
        lawrence_varchenko_terms(P, (1, 0))


@pytest.mark.parametrize("name", SUITE)
def test_classical_brianchon_gram(name):
    P = builtin(name)
    terms = brianchon_gram_terms(P)
    ones = [1] * P.n_facets
    rng = random.Random(0)
    lo, hi = P.bounding_box()
    inside = outside = 0
    while inside < 30 or outside < 30:
        x = tuple(F(rng.randint(int(20 * a) - 40, int(20 * b) + 40), 20) + F(1, 101) for a, b in zip(lo, hi))
        expected = 1 if P.contains(x) else 0
        assert evaluate_terms(P, terms, ones, x) == expected
        inside += expected
        outside += 1 - expected


def test_brianchon_gram_cancellation_outside():
    # (2, 1/2) violates only x <= 1: it sits in the cones of P, of the three
    # other edges and of the two vertices on x = 0
    P = builtin("square")
    x = (2, F(1, 2))
    hits = [t for t in brianchon_gram_terms(P) if weighted_indicator_cone(P, t.cone, [1] * 4, x)]
    assert {frozenset(t.face.facets) for t in hits} == {
        frozenset(), frozenset({0}), frozenset({2}), frozenset({3}), frozenset({0, 2}), frozenset({0, 3})}
    assert sum(t.sign for t in hits) == 0


@pytest.mark.parametrize("name", SUITE)
def test_weighted_brianchon_gram(name):
    P = builtin(name)
    w = random_weights(P.n_facets, seed=8)
    assert verify_decomposition(P, w, None, "bg").ok


@pytest.mark.parametrize("name", SUITE)
def test_brianchon_gram_region(name):
    P = builtin(name)
    eps = bg_region_point(P, seed=0)
    if eps is None:
        pytest.skip("no point with every vertex cone containing it was found")
    for t in decomposition_terms(P, eps, AWAY):
        assert t.cone.m == 0 and t.phi == 1
    bg = brianchon_gram_terms(P)
    away = decomposition_terms(P, eps, AWAY)
    assert [(t.face, t.sign) for t in bg] == [(t.face, t.sign) for t in away]


@pytest.mark.parametrize("name", ["interval", "square", "T2"])
def test_epsilon_independence_across_regions(name):
    P = builtin(name)
    w = random_weights(P.n_facets, seed=3)
    lo, hi = P.bounding_box()
    cells = arrangement_cells(P, [a - 3 for a in lo], [b + 3 for b in hi], steps=20)
    pts = sample_points(P, seed=2, n_random=10)
    reference = [weighted_indicator_polytope(P, w, x) for x in pts]
    for eps in cells:
        assert in_paradan_region(P, eps)
        terms = decomposition_terms(P, eps, TOWARD)
        assert [evaluate_terms(P, terms, w, x) for x in pts] == reference


def test_walls_cover_region_changes():
    # crossing between grid cells that share a signature never changes the
    # region data, and every wall point found by the checker lies on a listed line
    P = builtin("T2")
    planes = wall_hyperplanes(P)
    rng = random.Random(5)
    for _ in range(400):
        x = (F(rng.randint(-40, 40), 8), F(rng.randint(-40, 50), 8))
        if not in_paradan_region(P, x):
            assert any(linalg.dot(c, x) + c0 == 0 for c, c0 in planes)


def test_cells_have_distinct_regions_square():
    P = builtin("square")
    cells = arrangement_cells(P, (-3, -3), (4, 4))
    assert len(wall_hyperplanes(P)) == 4
    assert len(cells) == 9
    assert len({region_signature(P, e) for e in cells}) == 9


def test_cyclotomic_weights():
    P = builtin("T2")
    w = [cyclo(1, 3, 6), cyclo(1, 4, 4) + F(1, 2), F(2, 3)]
    eps = find_epsilon(P, "exterior", seed=1)
    assert verify_decomposition(P, w, eps, TOWARD).ok
