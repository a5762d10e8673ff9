"""Exact weighted Euler-Maclaurin sums of polynomials over simple integral
polytopes.

The lattice sum is obtained by applying products of twisted Todd-type
operators in the dilation variables h_1..h_N to the polynomial
``h -> integral of p over P(h)`` and evaluating at h = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import linalg
from .decomposition import (
    AWAY,
    TOWARD,
    in_paradan_region,
    polarize,
    sample_points,
    verify_decomposition,
)
from .exact import (
    CycloNumber,
    MultiPoly,
    TruncatedSeries,
    q_series,
    simplify,
    to_json_number,
    twist_series,
)
from .lattice import (
    gamma_boundary,
    gamma_group,
    lambda_value,
    weighted_lattice_sum,
    working_order,
)
from .polytope import Face, Polytope

__all__ = [
    "TriangulationFailure",
    "GammaNotBoundary",
    "NonIntegralVertex",
    "MismatchWithOracle",
    "triangulate",
    "dilated_vertex",
    "dilated_integral",
    "integrate",
    "EmOperator",
    "build_operator",
    "apply_operator",
    "operator_terms",
    "em_main_term",
    "em_exact_polynomial_sum",
    "default_k",
    "em_variant_consistency",
]


class TriangulationFailure(RuntimeError):
    pass


class GammaNotBoundary(ValueError):
    pass


class NonIntegralVertex(ValueError):
    pass


class MismatchWithOracle(AssertionError):
    def __init__(self, value, oracle):
        super().__init__(f"formula gives {value!r}, lattice sum gives {oracle!r}")
        self.value = value
        self.oracle = oracle


# --------------------------------------------------------------------------
# symbolic integration over P(h)

def _subfaces(P: Polytope, F: Face) -> list:
    """Faces of dimension dim F - 1 contained in F."""
    out = []
    for j in range(P.n_facets):
        if j in F.facets:
            continue
        J = F.facets | {j}
        if J in P.faces:
            out.append(P.faces[J])
    return out


def triangulate(P: Polytope, reverse: bool = False) -> list:
    """Pulling triangulation of P as a list of vertex-index tuples.

    Each face is coned from its lowest-index vertex (highest with
    ``reverse``) over the triangulations of its facets not containing it.
    """
    pick = max if reverse else min
    memo: dict = {}

    def tri(F: Face):
        if F.facets in memo:
            return memo[F.facets]
        if F.dim == 0:
            out = [F.vertices]
        else:
            v = pick(F.vertices)
            out = [(v,) + s for G in _subfaces(P, F) if v not in G.vertices for s in tri(G)]
        memo[F.facets] = out
        return out

    return tri(P.face(()))


def dilated_vertex(P: Polytope, k: int, nvars: int) -> list:
    """Coordinates of vertex k of P(h) as affine MultiPolys in h_0..h_{N-1}
    (padded with zeros to ``nvars`` variables)."""
    J = sorted(P.vertex_facets[k])
    M = [list(map(Fraction, P.normals[j])) for j in J]
    Minv = linalg.inverse(M)
    coords = []
    for i in range(P.d):
        c = MultiPoly.constant(nvars, P.vertices[k][i])
        for col, j in enumerate(J):
            c = c - MultiPoly.variable(nvars, j, Minv[i][col])
        coords.append(c)
    return coords


def _det_poly(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for c in range(n):
        minor = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = rows[0][c] * _det_poly(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _substitute(p: MultiPoly, images: list, nvars: int) -> MultiPoly:
    powers = [[MultiPoly.constant(nvars, 1)] for _ in images]
    out = MultiPoly(nvars)
    for e, c in p.terms.items():
        term = MultiPoly.constant(nvars, c)
        for i, k in enumerate(e):
            while len(powers[i]) <= k:
                powers[i].append(powers[i][-1] * images[i])
            if k:
                term = term * powers[i][k]
        out = out + term
    return out


def dilated_integral(P: Polytope, p: MultiPoly, reverse: bool = False) -> MultiPoly:
    """``h -> integral of p over P(h)`` as a polynomial in h_0..h_{N-1}.

    Valid for h near 0, where P(h) keeps the combinatorics of P.
    """
    if p.nvars != P.d:
        raise ValueError(f"polynomial has {p.nvars} variables, polytope dimension is {P.d}")
    N, d = P.n_facets, P.d
    nv = N + d
    verts = {}
    total = MultiPoly(nv)
    for simplex in triangulate(P, reverse):
        for k in simplex:
            if k not in verts:
                verts[k] = dilated_vertex(P, k, nv)
        x0 = verts[simplex[0]]
        edges = [[a - b for a, b in zip(verts[k], x0)] for k in simplex[1:]]
        jac = _det_poly(edges)
        s = jac.constant_term()
        if not s:
            raise TriangulationFailure(f"degenerate simplex {simplex}")
        if s < 0:
            jac = -jac
        # x = x0 + sum_i t_i (x_i - x0); t_i is variable N + i
        images = []
        for c in range(d):
            img = x0[c]
            for i, e in enumerate(edges):
                img = img + e[c] * MultiPoly.variable(nv, N + i)
            images.append(img)
        # the Jacobian only involves h, so integrate t out first
        total = total + _integrate_t(_substitute(p, images, nv), N, d) * jac
    return MultiPoly(N, {e[:N]: c for e, c in total.terms.items()})


def _integrate_t(f: MultiPoly, N: int, d: int) -> MultiPoly:
    """Integrate the t-variables over the standard simplex (Dirichlet)."""
    out = {}
    for e, c in f.terms.items():
        a = e[N:]
        num = 1
        for ai in a:
            num *= factorial(ai)
        val = c * Fraction(num, factorial(sum(a) + d))
        key = e[:N] + (0,) * d
        out[key] = out.get(key, 0) + val
    return MultiPoly(N + d, out)


def integrate(P: Polytope, p: MultiPoly):
    """Exact integral of p over P."""
    return dilated_integral(P, p).constant_term()


# --------------------------------------------------------------------------
# operators

@dataclass(frozen=True)
class EmOperator:
    """prod_j N_j(d/dh_j) for one face and one boundary group element."""

    face: Face
    gamma: tuple
    k: int
    lambdas: tuple
    factors: tuple

    def to_json(self) -> dict:
        return {
            "face": sorted(self.face.facets),
            "gamma": [str(b) for b in self.gamma],
            "k": self.k,
            "lambdas": [to_json_number(x) for x in self.lambdas],
            "factors": [f.to_json() for f in self.factors],
        }


def build_operator(P: Polytope, face: Face, gamma, k: int, w, L: int | None = None) -> EmOperator:
    if k < 1:
        raise ValueError("truncation order k must be at least 1")
    g = gamma_group(P, face)
    gamma = tuple(Fraction(b) for b in gamma)
    if gamma not in gamma_boundary(g):
        raise GammaNotBoundary(f"{[str(b) for b in gamma]} is not a boundary element at face {sorted(face.facets)}")
    if L is None:
        L = working_order(P)
    lambdas, factors = [], []
    for j in range(P.n_facets):
        if j in face.facets:
            lam = lambda_value(g, gamma, j, L)
            factors.append(twist_series(w[j], lam, k))
        else:
            lam = Fraction(1)
            factors.append(q_series(w[j], 2 * (k // 2)))
        lambdas.append(lam)
    return EmOperator(face, gamma, k, tuple(lambdas), tuple(factors))


def apply_operator(op: EmOperator, F: MultiPoly):
    """(op F)(0): each h^a contributes coeff * prod_j [S^{a_j}] N_j * a_j!."""
    total = Fraction(0)
    for e, c in F.terms.items():
        v = c
        for a, series in zip(e, op.factors):
            v = v * series[a] * factorial(a)
            if not v:
                break
        if v:
            total = total + v
    return simplify(total)


def operator_terms(P: Polytope, w, k: int) -> list:
    """Every operator of the exact formula, the polytope itself first."""
    L = working_order(P)
    ops = []
    for F in P.face_list:
        for gamma in gamma_boundary(gamma_group(P, F)):
            ops.append(build_operator(P, F, gamma, k, w, L))
    return ops


def default_k(P: Polytope, p: MultiPoly) -> int:
    return p.degree() + P.d + 1


def _check_integral(P: Polytope):
    if not P.is_integral():
        bad = next(v for v in P.vertices if any(c.denominator != 1 for c in v))
        raise NonIntegralVertex(f"vertex {[str(c) for c in bad]} is not integral")


def em_main_term(P: Polytope, w, p: MultiPoly, k: int | None = None, integral=None,
                 breakdown: bool = False):
    """Sum over faces and boundary group elements of the operator applied to
    the dilated integral, evaluated at h = 0 (no oracle check)."""
    _check_integral(P)
    if len(w) != P.n_facets:
        raise ValueError("one weight per facet is required")
    if k is None:
        k = default_k(P, p)
    if integral is None:
        integral = dilated_integral(P, p)
    parts = []
    total = Fraction(0)
    for op in operator_terms(P, w, k):
        v = apply_operator(op, integral)
        parts.append((op, v))
        total = total + v
    total = simplify(total)
    return (total, parts) if breakdown else total


def em_exact_polynomial_sum(P: Polytope, w, p: MultiPoly, k: int | None = None):
    """Weighted lattice sum of p over P from the exact formula; raises
    MismatchWithOracle if it disagrees with brute-force enumeration."""
    value = em_main_term(P, w, p, k)
    oracle = weighted_lattice_sum(P, w, p)
    if value != oracle:
        raise MismatchWithOracle(value, oracle)
    return value


# --------------------------------------------------------------------------
# consistency across decomposition variants and eps

@dataclass
class ConsistencyReport:
    checks: dict = field(default_factory=dict)
    value: object = None
    oracle: object = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and self.value == self.oracle

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": dict(sorted(self.checks.items())),
            "value": to_json_number(self.value),
            "oracle": to_json_number(self.oracle),
        }


def _reflected_factor(q, lam, k: int) -> TruncatedSeries:
    """The factor written for the reflected variable -h with weight 1 - q
    and inverse root of unity, then re-expressed in h."""
    if lam == 1:
        return q_series(1 - q, 2 * (k // 2)).negate_variable()
    inv = lam.inverse() if isinstance(lam, CycloNumber) else 1 / lam
    return twist_series(1 - q, inv, k).negate_variable()


def em_variant_consistency(P: Polytope, w, p: MultiPoly, eps1, eps2, k: int | None = None,
                           seed: int = 0, n_dilations: int = 3) -> ConsistencyReport:
    """Check the pieces that make the grouped formula independent of the
    decomposition variant and of eps.

    * vanishing: an operator of face D' kills any polynomial that only
      depends on h_j for j in J_D, as soon as J_D' is not inside J_D;
    * reflection: every factor equals its reflected form (weights 1 - q,
      inverse roots, variable -h);
    * dilation: both polarizations and both eps decompose P(h) for small
      rational h with the same polarization pattern as at h = 0;
    * the grouped value matches the lattice sum.
    """
    if k is None:
        k = default_k(P, p)
    rep = ConsistencyReport()
    integral = dilated_integral(P, p)
    ops = operator_terms(P, w, k)

    vanish = True
    for op in ops:
        for D in P.face_list:
            if op.face.facets <= D.facets:
                continue
            local = integral.restrict(D.facets)
            if apply_operator(op, local) != 0:
                vanish = False
            if not any(op.factors[j][0] == 0 for j in op.face.facets - D.facets):
                vanish = False
    rep.checks["vanishing"] = vanish

    reflect = True
    for op in ops:
        for j, (lam, f) in enumerate(zip(op.lambdas, op.factors)):
            if _reflected_factor(w[j], lam, k) != f:
                reflect = False
    rep.checks["reflection"] = reflect

    rng = random.Random(seed)
    dil = True
    for eps in (eps1, eps2):
        if not in_paradan_region(P, eps):
            dil = False
            continue
        for _ in range(n_dilations):
            h = [Fraction(rng.randint(-3, 3), 1000) for _ in range(P.n_facets)]
            Ph = P.dilated(h)
            if not in_paradan_region(Ph, eps):
                dil = False
                continue
            pts = sample_points(Ph, seed=seed, n_random=10, min_points=60)
            for variant in (TOWARD, AWAY):
                same = all(
                    polarize(P, F, eps, variant).signs == polarize(Ph, Ph.face(F.facets), eps, variant).signs
                    for F in P.face_list
                )
                if not same or not verify_decomposition(Ph, w, eps, variant, points=pts).ok:
                    dil = False
    rep.checks["dilation"] = dil

    rep.value = em_main_term(P, w, p, k, integral=integral)
    rep.oracle = weighted_lattice_sum(P, w, p)
    return rep
