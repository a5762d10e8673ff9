"""Weighted decompositions of the indicator of a simple polytope into
polarized tangent cones.

For a point ``eps`` in a Paradan region, every face span ``Delta`` gets a
tangent cone whose generators are flipped to pair positively with
``beta(eps, Delta) - eps`` ("toward" variant) or ``eps - beta(eps, Delta)``
("away" variant).  The signed, weighted sum of the cone indicators whose
projection lands in P reproduces the weighted indicator of P at every point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor

from . import linalg
from .exact import simplify, to_json_number, fraction_str
from .polytope import Face, Polytope, cone_generators, smallest_face_containing

__all__ = [
    "TOWARD",
    "AWAY",
    "UNPOLARIZED",
    "ZeroPairing",
    "NonGenericXi",
    "IdentityViolation",
    "Wall",
    "RegionCheck",
    "PolarizedCone",
    "Term",
    "project",
    "in_paradan_region",
    "phi",
    "polarize",
    "weighted_indicator_polytope",
    "weighted_indicator_cone",
    "decomposition_terms",
    "evaluate_terms",
    "brianchon_gram_terms",
    "lawrence_varchenko_terms",
    "sample_points",
    "verify_decomposition",
    "DecompositionReport",
    "subset_expansion_sides",
    "region_signature",
    "find_epsilon",
    "bg_region_point",
    "furthest_vertex",
    "wall_hyperplanes",
    "arrangement_cells",
]

TOWARD = "toward"
AWAY = "away"
UNPOLARIZED = "none"


class ZeroPairing(ValueError):
    pass


class NonGenericXi(ValueError):
    pass


class IdentityViolation(AssertionError):
    def __init__(self, report):
        super().__init__(f"{len(report.violations)} decomposition identity violation(s)")
        self.report = report


@dataclass(frozen=True)
class Wall:
    """Why a point is not in a Paradan region.

    ``kind == "face"``: the projection onto ``span`` lands on the lower
    dimensional face ``subface``.  ``kind == "generator"``: the polarizing
    vector at ``span`` is orthogonal to the generator of facet ``facet``.
    """

    span: Face
    kind: str
    subface: Face | None = None
    facet: int | None = None

    def to_json(self) -> dict:
        return {
            "span_facets": sorted(self.span.facets),
            "kind": self.kind,
            "subface_facets": None if self.subface is None else sorted(self.subface.facets),
            "facet": self.facet,
        }


@dataclass(frozen=True)
class RegionCheck:
    ok: bool
    witness: Wall | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class PolarizedCone:
    face: Face
    beta: tuple | None
    signs: tuple  # ((facet, +1/-1), ...) in facet order
    generators: tuple  # ((facet, alpha_plus), ...)
    variant: str

    @property
    def m(self) -> int:
        return sum(1 for _, s in self.signs if s < 0)

    def sign_of(self, j: int) -> int:
        return dict(self.signs)[j]

    def flipped(self) -> frozenset:
        return frozenset(j for j, s in self.signs if s < 0)

    def effective_normals(self, P: Polytope) -> dict:
        return {j: tuple(s * c for c in P.normals[j]) for j, s in self.signs}


@dataclass(frozen=True)
class Term:
    face: Face
    sign: int
    cone: PolarizedCone
    phi: int


def project(eps, base, directions) -> tuple:
    """Orthogonal projection of eps onto ``base + span(directions)``."""
    eps = [Fraction(c) for c in eps]
    if not directions:
        return tuple(Fraction(c) for c in base)
    dirs = [list(v) for v in directions]
    gram = [[linalg.dot(a, b) for b in dirs] for a in dirs]
    diff = linalg.sub(eps, base)
    coef = linalg.solve(gram, [linalg.dot(v, diff) for v in dirs])
    out = [Fraction(c) for c in base]
    for c, v in zip(coef, dirs):
        out = linalg.add(out, linalg.scale(c, v))
    return tuple(out)


def _beta(P: Polytope, eps, F: Face) -> tuple:
    if not F.facets:
        return tuple(Fraction(c) for c in eps)
    return project(eps, F.base, F.directions)


def in_paradan_region(P: Polytope, eps) -> RegionCheck:
    """Check eps against every wall; returns the first violated wall."""
    eps = tuple(Fraction(c) for c in eps)
    for F in P.face_list:
        beta = _beta(P, eps, F)
        G = smallest_face_containing(P, beta)
        if G is not None and G.facets != F.facets:
            return RegionCheck(False, Wall(F, "face", subface=G))
        pol = linalg.sub(beta, eps)
        for j, alpha in cone_generators(P, F).items():
            if linalg.dot(pol, alpha) == 0:
                return RegionCheck(False, Wall(F, "generator", facet=j))
    return RegionCheck(True)


def phi(P: Polytope, eps, F: Face) -> int:
    return int(P.contains(_beta(P, eps, F)))


def polarize(P: Polytope, F: Face, eps, variant: str = TOWARD) -> PolarizedCone:
    if variant not in (TOWARD, AWAY):
        raise ValueError(f"unknown polarization variant {variant!r}")
    eps = tuple(Fraction(c) for c in eps)
    beta = _beta(P, eps, F)
    pol = linalg.sub(beta, eps) if variant == TOWARD else linalg.sub(eps, beta)
    signs, gens = [], []
    for j, alpha in sorted(cone_generators(P, F).items()):
        p = linalg.dot(alpha, pol)
        if p == 0:
            raise ZeroPairing(f"generator of facet {j} at face {sorted(F.facets)} is orthogonal to the polarizing vector")
        s = 1 if p > 0 else -1
        signs.append((j, s))
        gens.append((j, tuple(s * c for c in alpha)))
    return PolarizedCone(F, beta, tuple(signs), tuple(gens), variant)


def _unpolarized(P: Polytope, F: Face) -> PolarizedCone:
    gens = tuple(sorted(cone_generators(P, F).items()))
    return PolarizedCone(F, None, tuple((j, 1) for j, _ in gens), gens, UNPOLARIZED)


def weighted_indicator_polytope(P: Polytope, w, x):
    F = smallest_face_containing(P, x)
    if F is None:
        return Fraction(0)
    value = Fraction(1)
    for j in F.facets:
        value = value * w[j]
    return simplify(value)


def _cone_value(cone: PolarizedCone, w, slacks):
    value = Fraction(1)
    for j, s in cone.signs:
        c = s * slacks[j]
        if c < 0:
            return Fraction(0)
        if c == 0:
            value = value * (w[j] if s > 0 else 1 - w[j])
    return value


def weighted_indicator_cone(P: Polytope, cone: PolarizedCone, w, x):
    """Weighted indicator of ``span(F) + sum R_+ alpha^+_j``.

    A cone facet carries q_j, or 1 - q_j when its generator was flipped.
    """
    return simplify(_cone_value(cone, w, P.slacks(x)))


def decomposition_terms(P: Polytope, eps, variant: str = TOWARD) -> list:
    check = in_paradan_region(P, eps)
    if not check:
        w = check.witness
        raise ZeroPairing(f"eps is on a wall: {w.to_json()}")
    terms = []
    for F in P.face_list:
        cone = polarize(P, F, eps, variant)
        e = cone.m if variant == TOWARD else cone.m + F.dim
        terms.append(Term(F, -1 if e % 2 else 1, cone, phi(P, eps, F)))
    return terms


def brianchon_gram_terms(P: Polytope) -> list:
    return [Term(F, -1 if F.dim % 2 else 1, _unpolarized(P, F), 1) for F in P.face_list]


def lawrence_varchenko_terms(P: Polytope, xi) -> list:
    xi = [Fraction(c) for c in xi]
    terms = []
    for F in P.vertex_faces():
        signs, gens = [], []
        for j, alpha in sorted(cone_generators(P, F).items()):
            p = linalg.dot(xi, alpha)
            if p == 0:
                raise NonGenericXi(f"xi is orthogonal to the generator of facet {j} at vertex {F.vertices[0]}")
            s = 1 if p > 0 else -1
            signs.append((j, s))
            gens.append((j, tuple(s * c for c in alpha)))
        cone = PolarizedCone(F, None, tuple(signs), tuple(gens), "xi")
        terms.append(Term(F, -1 if cone.m % 2 else 1, cone, 1))
    return terms


def evaluate_terms(P: Polytope, terms, w, x, breakdown: bool = False):
    """Sum of sign * phi * cone indicator at x."""
    slacks = P.slacks(x)
    total = Fraction(0)
    parts = []
    for t in terms:
        if not t.phi:
            if breakdown:
                parts.append(Fraction(0))
            continue
        v = _cone_value(t.cone, w, slacks)
        if v:
            total = total + (v if t.sign > 0 else -v)
        if breakdown:
            parts.append(simplify(t.sign * v))
    total = simplify(total)
    return (total, parts) if breakdown else total


def subset_expansion_sides(qs):
    """Both sides of prod q_i = 1 + sum_{J nonempty} prod_{j in J} (q_j - 1)."""
    lhs = Fraction(1)
    for q in qs:
        lhs = lhs * q
    rhs = Fraction(1)
    n = len(qs)
    for r in range(1, n + 1):
        for J in combinations(range(n), r):
            t = Fraction(1)
            for j in J:
                t = t * (qs[j] - 1)
            rhs = rhs + t
    return simplify(lhs), simplify(rhs)


# --------------------------------------------------------------------------
# sample points and verification

def _convex_point(rng, pts):
    ws = [rng.randint(1, 9) for _ in pts]
    tot = sum(ws)
    d = len(pts[0])
    return tuple(sum(Fraction(w, tot) * p[i] for w, p in zip(ws, pts)) for i in range(d))


def sample_points(P: Polytope, seed: int = 0, n_random: int = 40, min_points: int = 200) -> list:
    """Fixed sample policy: vertices, face centroids, facet points, a half-integer
    grid around P, random interior/exterior points, and points on facet
    hyperplanes outside P."""
    rng = random.Random(seed)
    pts: list = []
    seen = set()

    def push(x):
        x = tuple(Fraction(c) for c in x)
        if x not in seen:
            seen.add(x)
            pts.append(x)

    for v in P.vertices:
        push(v)
    for F in P.face_list:
        vs = [P.vertices[k] for k in F.vertices]
        push(tuple(sum(v[i] for v in vs) / len(vs) for i in range(P.d)))
    for F in P.face_list:
        if F.dim == P.d - 1:
            vs = [P.vertices[k] for k in F.vertices]
            for _ in range(3):
                push(_convex_point(rng, vs))
            # on the facet hyperplane, outside P
            c = tuple(sum(v[i] for v in vs) / len(vs) for i in range(P.d))
            for dvec in F.directions:
                push(linalg.add(c, linalg.scale(Fraction(3), dvec)))
    lo, hi = P.bounding_box()
    axes = []
    for a, b in zip(lo, hi):
        start = Fraction((2 * a).__floor__() - 1, 2)
        stop = Fraction((2 * b).__ceil__() + 1, 2)
        n = int((stop - start) * 2) + 1
        axes.append([start + Fraction(k, 2) for k in range(n)])
    for x in product(*axes):
        push(x)
    for _ in range(n_random):
        push(_convex_point(rng, P.vertices))
    # exterior and mixed points, always enough to reach min_points
    target = max(len(pts) + n_random, min_points)
    while len(pts) < target:
        push(tuple(Fraction(rng.randint(floor(97 * (a - 1)), ceil(97 * (b + 1))), 97) for a, b in zip(lo, hi)))
    return pts


@dataclass
class DecompositionReport:
    variant: str
    eps: tuple | None
    n_points: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "epsilon": None if self.eps is None else [fraction_str(c) for c in self.eps],
            "points_checked": self.n_points,
            "ok": self.ok,
            "violations": [
                {
                    "x": [fraction_str(c) for c in v["x"]],
                    "lhs": to_json_number(v["lhs"]),
                    "rhs": to_json_number(v["rhs"]),
                    "terms": [
                        {"face": sorted(t.face.facets), "sign": t.sign, "phi": t.phi,
                         "flipped": sorted(t.cone.flipped()), "value": to_json_number(c)}
                        for t, c in zip(v["terms"], v["contributions"])
                    ],
                }
                for v in self.violations
            ],
        }


def verify_decomposition(P: Polytope, w, eps, variant: str = TOWARD, points=None,
                         terms=None, strict: bool = False) -> DecompositionReport:
    """Check the weighted decomposition pointwise at every sample point.

    ``variant`` is "toward", "away", "bg" (Brianchon-Gram) or "lv"
    (Lawrence-Varchenko, ``eps`` is then the polarizing vector xi).
    """
    if terms is None:
        if variant == "bg":
            terms = brianchon_gram_terms(P)
        elif variant == "lv":
            terms = lawrence_varchenko_terms(P, eps)
        else:
            terms = decomposition_terms(P, eps, variant)
    if points is None:
        points = sample_points(P)
    report = DecompositionReport(variant, None if eps is None else tuple(Fraction(c) for c in eps), len(points))
    for x in points:
        lhs = weighted_indicator_polytope(P, w, x)
        rhs, parts = evaluate_terms(P, terms, w, x, breakdown=True)
        if lhs != rhs:
            report.violations.append({"x": x, "lhs": lhs, "rhs": rhs, "terms": terms, "contributions": parts})
    if strict and report.violations:
        raise IdentityViolation(report)
    return report


# --------------------------------------------------------------------------
# choosing eps

def region_signature(P: Polytope, eps) -> tuple:
    """phi and toward-flip pattern at every face; constant on a Paradan region."""
    sig = []
    for F in P.face_list:
        cone = polarize(P, F, eps, TOWARD)
        sig.append((phi(P, eps, F), tuple(s for _, s in cone.signs)))
    return tuple(sig)


def furthest_vertex(P: Polytope, eps) -> tuple:
    eps = [Fraction(c) for c in eps]
    return max(P.vertices, key=lambda v: (linalg.dot(linalg.sub(v, eps), linalg.sub(v, eps)), v))


def find_epsilon(P: Polytope, kind: str = "interior", seed: int = 0, tries: int = 500) -> tuple:
    """A certified point of some Paradan region.

    kind: "interior" (inside P), "exterior" (outside P), or "vertex-only"
    (far away so that only vertex projections land in P).
    """
    rng = random.Random(seed)
    lo, hi = P.bounding_box()
    for attempt in range(tries):
        if kind == "interior":
            eps = _convex_point(rng, P.vertices)
        elif kind == "exterior":
            eps = tuple(Fraction(rng.randint(floor(8 * a) - 16, ceil(8 * b) + 16), 8) + Fraction(1, 97) for a, b in zip(lo, hi))
            if P.contains(eps):
                continue
        elif kind == "vertex-only":
            u = [Fraction(rng.randint(-50, 50), rng.randint(1, 7)) + Fraction(1, 101 + k) for k in range(P.d)]
            R = 8 + attempt
            c = _convex_point(rng, P.vertices)
            eps = tuple(ci + R * ui for ci, ui in zip(c, u))
            if any(phi(P, eps, F) for F in P.face_list if F.dim > 0):
                continue
        else:
            raise ValueError(f"unknown kind {kind!r}")
        if in_paradan_region(P, eps):
            return eps
    raise RuntimeError(f"no {kind} Paradan point found after {tries} tries")


def bg_region_point(P: Polytope, seed: int = 0, tries: int = 400):
    """A point of int(P_d ∩ P), where every vertex sees it inside the cone of
    its inward normals; None if the search fails (the region may be empty)."""
    rng = random.Random(seed)
    for _ in range(tries):
        eps = _convex_point(rng, P.vertices)
        good = True
        for F in P.vertex_faces():
            v = P.vertices[F.vertices[0]]
            if any(linalg.dot(linalg.sub(eps, v), a) <= 0 for a in cone_generators(P, F).values()):
                good = False
                break
        if good and in_paradan_region(P, eps):
            return eps
    return None


# --------------------------------------------------------------------------
# the wall arrangement

def _affine_functional(fn, d):
    """(c, c0) with fn(x) = <c, x> + c0 for an affine fn on Q^d."""
    zero = [Fraction(0)] * d
    c0 = fn(zero)
    c = []
    for i in range(d):
        e = list(zero)
        e[i] = Fraction(1)
        c.append(fn(e) - c0)
    return tuple(c), c0


def _normalize_hyperplane(c, c0):
    piv = next(x for x in c if x)
    return tuple(x / piv for x in c), c0 / piv


def wall_hyperplanes(P: Polytope) -> list:
    """Affine hyperplanes (c, c0), meaning <c, x> + c0 = 0, whose union contains
    every wall; each Paradan region is a union of cells of this arrangement."""
    out = []
    seen = set()

    def add(fn):
        c, c0 = _affine_functional(fn, P.d)
        if not any(c):
            if c0 == 0:
                raise RuntimeError("degenerate wall covering the whole space")
            return
        h = _normalize_hyperplane(c, c0)
        if h not in seen:
            seen.add(h)
            out.append(h)

    for F in P.face_list:
        for j in range(P.n_facets):
            if j not in F.facets and (F.facets | {j}) in P.faces:
                add(lambda x, F=F, j=j: linalg.dot(_beta(P, x, F), P.normals[j]) + P.offsets[j])
        for j, alpha in cone_generators(P, F).items():
            add(lambda x, F=F, alpha=alpha: linalg.dot(linalg.sub(_beta(P, x, F), x), alpha))
    return out


def arrangement_cells(P: Polytope, lo, hi, steps: int = 24) -> list:
    """One certified point per cell of the wall arrangement met by a grid on the
    box [lo, hi]; the grid is offset so it avoids the walls generically."""
    planes = wall_hyperplanes(P)
    axes = []
    for k, (a, b) in enumerate(zip(lo, hi)):
        a, b = Fraction(a), Fraction(b)
        off = Fraction(1, 2 * steps + 1 + 2 * k)
        axes.append([a + (b - a) * (Fraction(i) + off) / steps for i in range(steps)])
    cells = {}
    for x in product(*axes):
        sig = []
        for c, c0 in planes:
            v = linalg.dot(c, x) + c0
            if v == 0:
                sig = None
                break
            sig.append(v > 0)
        if sig is None:
            continue
        cells.setdefault(tuple(sig), x)
    return [cells[s] for s in sorted(cells)]
