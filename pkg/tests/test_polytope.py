import json
from fractions import Fraction
from itertools import product

import pytest

from polytope_em import linalg
from polytope_em.polytope import (
    Empty,
    NonPrimitiveNormal,
    NotSimple,
    RedundantFacet,
    Unbounded,
    build_polytope,
    builtin,
    cone_generators,
    load_polytope_json,
    polytope_to_json,
    smallest_face_containing,
)

from conftest import SUITE

F = Fraction


def test_square_combinatorics():
    P = build_polytope([(1, 0), (-1, 0), (0, 1), (0, -1)], [0, 1, 0, 1])
    assert len(P.vertices) == 4
    assert len(P.faces) == 9
    assert sorted(f.dim for f in P.face_list) == [0] * 4 + [1] * 4 + [2]


def test_t2_combinatorics():
    P = builtin("T2")
    assert set(P.vertices) == {(0, 0), (1, 0), (0, 2)}
    assert len(P.faces) == 7


@pytest.mark.parametrize("name,faces", [("interval", 3), ("cube", 27), ("simplex3", 15)])
def test_face_counts(name, faces):
    assert len(builtin(name).faces) == faces


def test_square_pyramid_is_not_simple():
    # apex (0,0,1) lies on four facets
    normals = [(0, 0, 1), (0, -1, -1), (0, 1, -1), (-1, 0, -1), (1, 0, -1)]
    with pytest.raises(NotSimple):
        build_polytope(normals, [1, 1, 1, 1, 1])


def test_construction_errors():
    with pytest.raises(NonPrimitiveNormal):
        build_polytope([(2, 0), (-1, 0), (0, 1), (0, -1)], [0, 1, 0, 1])
    with pytest.raises(Unbounded):
        build_polytope([(1, 0), (0, 1), (1, 1)], [0, 0, 0])
    with pytest.raises(Empty):
        build_polytope([(1,), (-1,)], [-2, 1])
    with pytest.raises(RedundantFacet):
        build_polytope([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)], [0, 1, 0, 1, 5])


def test_square_vertex_generators():
    P = builtin("square")
    alpha = cone_generators(P, P.face({0, 2}))
    assert alpha == {0: (1, 0), 2: (0, 1)}


def test_t2_vertex_generators():
    P = builtin("T2")
    v = P.face({1, 2})
    assert P.vertices[v.vertices[0]] == (1, 0)
    alpha = cone_generators(P, v)
    assert alpha[1] == (F(-1, 2), 1)
    assert alpha[2] == (F(-1, 2), 0)
    # both edges leaving (1,0) are non-negative combinations
    for w in [(0, 0), (0, 2)]:
        coords = linalg.solve([list(c) for c in zip(alpha[1], alpha[2])], linalg.sub(w, (1, 0)))
        assert all(c >= 0 for c in coords)


@pytest.mark.parametrize("name", SUITE)
def test_facet_generator_is_scaled_normal(name):
    P = builtin(name)
    for i, eta in enumerate(P.normals):
        (alpha,) = cone_generators(P, P.face({i})).values()
        assert alpha == tuple(F(c, linalg.dot(eta, eta)) for c in eta)


@pytest.mark.parametrize("name", SUITE)
def test_dual_basis(name):
    P = builtin(name)
    for face in P.face_list:
        alpha = cone_generators(P, face)
        for k, l in product(face.facets, repeat=2):
            assert linalg.dot(alpha[k], P.normals[l]) == (k == l)


@pytest.mark.parametrize("name", SUITE)
def test_tangent_cone_contains_polytope(name):
    P = builtin(name)
    for face in P.face_list:
        alpha = cone_generators(P, face)
        basis = list(face.directions) + [alpha[j] for j in face.sorted_facets()]
        cols = [list(c) for c in zip(*basis)]
        for v in P.vertices:
            coords = linalg.solve(cols, linalg.sub(v, face.base))
            assert all(c >= 0 for c in coords[len(face.directions):])


@pytest.mark.parametrize("name", SUITE)
def test_face_lattice_closure(name):
    P = builtin(name)
    for A, B in product(P.face_list, repeat=2):
        contained = set(B.vertices) <= set(A.vertices)
        assert (A.facets <= B.facets) == contained


@pytest.mark.parametrize("name", SUITE)
def test_codimension_matches_active_set(name):
    P = builtin(name)
    for face in P.face_list:
        assert face.dim == P.d - face.codim
        assert len(face.directions) == face.dim


def test_smallest_face_examples():
    P = builtin("square")
    assert smallest_face_containing(P, (F(1, 2), F(1, 2))).facets == frozenset()
    assert smallest_face_containing(P, (0, F(1, 2))).facets == frozenset({0})
    assert smallest_face_containing(P, (2, 0)) is None


def test_builtins_are_integral():
    for name in SUITE:
        assert builtin(name).is_integral()


def test_simplex3_vertices():
    P = builtin("simplex3")
    assert set(P.vertices) == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 2)}


@pytest.mark.parametrize("name", SUITE)
def test_json_round_trip(name):
    P = builtin(name)
    w = [F(k + 1, 3) for k in range(P.n_facets)]
    text = json.dumps(polytope_to_json(P, w, vrep=True))
    Q, w2 = load_polytope_json(text)
    assert Q.normals == P.normals and Q.offsets == P.offsets and Q.vertices == P.vertices
    assert list(w2) == w


def test_dilation_moves_facets_outward():
    P = builtin("square")
    Q = P.dilated([F(1, 2), 0, 0, 1])
    assert Q.bounding_box() == ([F(-1, 2), 0], [1, 2])
