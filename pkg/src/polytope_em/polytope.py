"""Simple convex polytopes from an H-representation.

A polytope is the set ``{x : <x, eta_i> + lambda_i >= 0}`` for primitive
integer inward normals ``eta_i`` and rational offsets ``lambda_i``.  Facets
are indexed from 0 in the order given.  A face is identified by the frozenset
``J`` of facets containing it; the polytope itself is ``J = frozenset()``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd

from . import linalg
from .exact import fraction_str, from_json_number, parse_fraction, to_json_number

__all__ = [
    "PolytopeError",
    "NotSimple",
    "Unbounded",
    "Empty",
    "NonPrimitiveNormal",
    "RedundantFacet",
    "DegenerateNormals",
    "Face",
    "Polytope",
    "build_polytope",
    "cone_generators",
    "smallest_face_containing",
    "builtin",
    "BUILTINS",
    "load_polytope_json",
    "polytope_to_json",
]


class PolytopeError(ValueError):
    pass


class NotSimple(PolytopeError):
    pass


class Unbounded(PolytopeError):
    pass


class Empty(PolytopeError):
    pass


class NonPrimitiveNormal(PolytopeError):
    pass


class RedundantFacet(PolytopeError):
    pass


class DegenerateNormals(PolytopeError):
    pass


@dataclass(frozen=True)
class Face:
    facets: frozenset
    vertices: tuple
    dim: int
    base: tuple
    directions: tuple

    @property
    def codim(self) -> int:
        return len(self.facets)

    def sorted_facets(self) -> list:
        return sorted(self.facets)


@dataclass
class Polytope:
    d: int
    normals: tuple
    offsets: tuple
    vertices: tuple
    vertex_facets: tuple
    faces: dict = field(repr=False)

    @property
    def n_facets(self) -> int:
        return len(self.normals)

    def slacks(self, x) -> list:
        """``<x, eta_i> + lambda_i`` for every facet."""
        return [linalg.dot(x, n) + o for n, o in zip(self.normals, self.offsets)]

    def contains(self, x) -> bool:
        return all(s >= 0 for s in self.slacks(x))

    def face(self, J) -> Face:
        return self.faces[frozenset(J)]

    @cached_property
    def face_list(self) -> list:
        """All faces, the polytope first, then by increasing codimension."""
        return sorted(self.faces.values(), key=lambda f: (len(f.facets), sorted(f.facets)))

    def vertex_faces(self) -> list:
        return [f for f in self.face_list if f.dim == 0]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for v in self.vertices for c in v)

    def dilated(self, h) -> "Polytope":
        """The polytope with facet i moved outward by ``h[i]``."""
        return build_polytope(self.normals, [o + Fraction(hi) for o, hi in zip(self.offsets, h)])

    @cached_property
    def generators(self) -> dict:
        return {J: _dual_basis(self, f) for J, f in self.faces.items()}

    def bounding_box(self):
        lo = [min(v[i] for v in self.vertices) for i in range(self.d)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.d)]
        return lo, hi


def _primitive(v) -> bool:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g == 1


def _check_bounded(normals, d):
    if linalg.rank(normals) < d:
        raise Unbounded("normals do not span R^d; the polyhedron contains a line")
    # pointed recession cone {u : <u, eta_i> >= 0}; any extreme ray is cut out
    # by d-1 tight independent constraints
    for sub in combinations(range(len(normals)), d - 1):
        u = _null_vector([normals[i] for i in sub], d)
        if u is None:
            continue
        for sign in (1, -1):
            w = [sign * c for c in u]
            if all(linalg.dot(w, n) >= 0 for n in normals):
                raise Unbounded(f"recession direction {[str(c) for c in w]}")


def _null_vector(rows, d):
    if not rows:
        return [Fraction(1)] if d == 1 else None
    red, pivots = linalg.rref(rows)
    free = [c for c in range(d) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    u = [Fraction(0)] * d
    u[f] = Fraction(1)
    for r, p in enumerate(pivots):
        u[p] = -red[r][f]
    return u


def build_polytope(normals, offsets) -> Polytope:
    """Validate an H-representation and build vertices and the face lattice."""
    normals = tuple(tuple(int(c) for c in n) for n in normals)
    offsets = tuple(Fraction(o) for o in offsets)
    if not normals:
        raise Empty("no facets given")
    d = len(normals[0])
    N = len(normals)
    if len(offsets) != N:
        raise ValueError("one offset per normal is required")
    if any(len(n) != d for n in normals):
        raise ValueError("normals have inconsistent dimensions")
    for i, n in enumerate(normals):
        if not _primitive(n):
            raise NonPrimitiveNormal(f"facet {i}: normal {list(n)} is not primitive")
    if N < d + 1:
        raise Unbounded(f"{N} facets cannot bound a polytope in dimension {d}")
    _check_bounded(normals, d)

    found: dict = {}
    for sub in combinations(range(N), d):
        a = [list(map(Fraction, normals[i])) for i in sub]
        try:
            x = linalg.solve(a, [-offsets[i] for i in sub])
        except ValueError:
            continue
        x = tuple(x)
        if x in found:
            continue
        sl = [linalg.dot(x, n) + o for n, o in zip(normals, offsets)]
        if all(s >= 0 for s in sl):
            found[x] = frozenset(i for i, s in enumerate(sl) if s == 0)
    if not found:
        raise Empty("the inequalities have no feasible vertex")
    vertices = tuple(sorted(found))
    vfacets = tuple(found[v] for v in vertices)
    if len(vertices) <= d or linalg.rank([linalg.sub(v, vertices[0]) for v in vertices[1:]]) < d:
        raise Empty("polytope is not full-dimensional")
    for v, J in zip(vertices, vfacets):
        if len(J) != d:
            raise NotSimple(
                f"vertex {[str(c) for c in v]} lies on {len(J)} facets {sorted(J)}, expected {d}"
            )
    for i in range(N):
        on = [v for v, J in zip(vertices, vfacets) if i in J]
        if len(on) < d or (d > 1 and linalg.rank([linalg.sub(v, on[0]) for v in on[1:]]) < d - 1):
            raise RedundantFacet(f"facet {i} does not support a (d-1)-face")

    faces = {}
    for J0 in vfacets:
        for r in range(d + 1):
            for J in combinations(sorted(J0), r):
                J = frozenset(J)
                if J in faces:
                    continue
                idx = tuple(k for k, Jv in enumerate(vfacets) if J <= Jv)
                base = vertices[idx[0]]
                dirs = linalg.row_basis([linalg.sub(vertices[k], base) for k in idx[1:]])
                if len(dirs) != d - len(J):
                    raise NotSimple(f"face {sorted(J)} has dimension {len(dirs)}, expected {d - len(J)}")
                faces[J] = Face(J, idx, d - len(J), tuple(base), tuple(tuple(v) for v in dirs))
    return Polytope(d, normals, offsets, vertices, vfacets, faces)


def _dual_basis(P: Polytope, F: Face) -> dict:
    J = F.sorted_facets()
    if not J:
        return {}
    etas = [list(map(Fraction, P.normals[j])) for j in J]
    gram = [[linalg.dot(a, b) for b in etas] for a in etas]
    try:
        ginv = linalg.inverse(gram)
    except ValueError:
        raise DegenerateNormals(f"normals of facets {J} are linearly dependent") from None
    out = {}
    for k, j in enumerate(J):
        alpha = [Fraction(0)] * P.d
        for m in range(len(J)):
            alpha = linalg.add(alpha, linalg.scale(ginv[k][m], etas[m]))
        out[j] = tuple(alpha)
    return out


def cone_generators(P: Polytope, F: Face) -> dict:
    """Generators of the tangent cone at F, keyed by facet index.

    They are the basis of span{eta_j : j in J_F} dual to the normals, so
    ``<alpha_k, eta_l> = delta_kl``.  The tangent cone is
    ``span(F) + sum_j R_+ alpha_j``.
    """
    return P.generators[F.facets]


def smallest_face_containing(P: Polytope, x):
    """The face whose relative interior contains x, or None if x is outside P."""
    sl = P.slacks(x)
    if any(s < 0 for s in sl):
        return None
    return P.faces[frozenset(i for i, s in enumerate(sl) if s == 0)]


# --------------------------------------------------------------------------
# builtins and JSON

def _cube_facets(d):
    normals, offsets = [], []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        normals.append(tuple(e))
        offsets.append(0)
        e = [0] * d
        e[i] = -1
        normals.append(tuple(e))
        offsets.append(1)
    return normals, offsets


BUILTINS = {
    # [0, 3]
    "interval": ([(1,), (-1,)], [0, 3]),
    "square": _cube_facets(2),
    "cube": _cube_facets(3),
    # conv{(0,0), (1,0), (0,2)}; the cone at (1,0) has index 2
    "T2": ([(1, 0), (0, 1), (-2, -1)], [0, 0, 2]),
    # conv{0, e1, e2, 2 e3}; the cones at e1 and e2 have index 2
    "simplex3": ([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-2, -2, -1)], [0, 0, 0, 2]),
}


def builtin(name: str) -> Polytope:
    try:
        normals, offsets = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin polytope {name!r}; choose from {sorted(BUILTINS)}") from None
    return build_polytope(normals, offsets)


def polytope_to_json(P: Polytope, weights=None, vrep: bool = False) -> dict:
    obj = {
        "d": P.d,
        "facets": [
            {"normal": list(n), "offset": fraction_str(o)} for n, o in zip(P.normals, P.offsets)
        ],
    }
    if weights is not None:
        obj["weights"] = [to_json_number(q) for q in weights]
    if vrep:
        obj["vertices"] = [[fraction_str(c) for c in v] for v in P.vertices]
    return obj


def load_polytope_json(obj):
    """Parse the JSON polytope format; returns (polytope, weights or None)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    normals = [f["normal"] for f in obj["facets"]]
    offsets = [parse_fraction(str(f["offset"])) for f in obj["facets"]]
    P = build_polytope(normals, offsets)
    if int(obj.get("d", P.d)) != P.d:
        raise ValueError("declared dimension does not match the normals")
    weights = obj.get("weights")
    if weights is not None:
        weights = [from_json_number(w) for w in weights]
        if len(weights) != P.n_facets:
            raise ValueError("one weight per facet is required")
    return P, weights
