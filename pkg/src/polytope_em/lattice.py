"""Integer lattice algebra: Smith normal form, the finite groups attached to
face cones, their root-of-unity data, and brute-force lattice sums."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import ceil, floor, gcd

from . import linalg
from .exact import cyclo, simplify
from .polytope import Face, Polytope
from .decomposition import weighted_indicator_polytope

__all__ = [
    "IncompatibleOrder",
    "smith_normal_form",
    "GammaGroup",
    "gamma_group",
    "gamma_boundary",
    "lambda_value",
    "working_order",
    "gamma_vector",
    "b_coordinates",
    "character_average",
    "enumerate_lattice_points",
    "weighted_lattice_sum",
]


class IncompatibleOrder(ValueError):
    pass


def smith_normal_form(A):
    """Return (D, U, V) with U @ A @ V == D, U and V unimodular, D diagonal
    with non-negative entries each dividing the next."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                return D, U, V
            _, pi, pj = min(nz)
            swap_rows(D, t, pi)
            swap_rows(U, t, pi)
            swap_cols(D, t, pj)
            swap_cols(V, t, pj)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    D[i] = [a - q * b for a, b in zip(D[i], D[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    for row in D:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is not None:
                i = bad[0]
                D[t] = [a + b for a, b in zip(D[t], D[i])]
                U[t] = [a + b for a, b in zip(U[t], U[i])]
                continue
            break
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return D, U, V


@dataclass(frozen=True)
class GammaGroup:
    """Integer vectors in span{eta_j : j in J} modulo the Z-span of those
    normals.  An element is stored as the vector b in [0, 1)^J with
    sum_j b_j eta_j integral."""

    face: Face
    facets: tuple
    invariants: tuple
    elements: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def b_of(self, element, j: int) -> Fraction:
        """b_j of an element; zero for facets outside J."""
        if j in self.facets:
            return element[self.facets.index(j)]
        return Fraction(0)


def _frac_part(x: Fraction) -> Fraction:
    return x - floor(x)


def gamma_group(P: Polytope, F: Face) -> GammaGroup:
    J = tuple(F.sorted_facets())
    if not J:
        return GammaGroup(F, J, (), ((),))
    A = [list(P.normals[j]) for j in J]
    D, U, _ = smith_normal_form(A)
    r = len(J)
    diag = [D[i][i] for i in range(r)]
    if any(x == 0 for x in diag):
        raise ValueError(f"normals of facets {list(J)} are dependent")
    # b^T A integral  <=>  c = b^T U^{-1} has c_i * diag_i integral; b^T = c U
    elements = []
    for ks in product(*(range(x) for x in diag)):
        c = [Fraction(k, x) for k, x in zip(ks, diag)]
        b = tuple(_frac_part(sum((c[i] * U[i][col] for i in range(r)), Fraction(0))) for col in range(r))
        elements.append(b)
    elements.sort(key=lambda b: (any(b), b))
    return GammaGroup(F, J, tuple(diag), tuple(elements))


def gamma_boundary(g: GammaGroup) -> list:
    """Elements with every b_j non-integral (the identity when J is empty)."""
    return [b for b in g.elements if all(x.denominator != 1 for x in b)]


def lambda_value(g: GammaGroup, element, j: int, L: int):
    """e^{2 pi i b_j} inside Q(zeta_L); exactly 1 for facets outside J."""
    b = g.b_of(element, j)
    if L % b.denominator:
        raise IncompatibleOrder(f"b_j = {b} needs an order divisible by {b.denominator}, got {L}")
    return simplify(cyclo(b.numerator, b.denominator, L))


def working_order(P: Polytope) -> int:
    """lcm of the denominators of every b_j over every face of P."""
    L = 1
    for F in P.face_list:
        for b in gamma_group(P, F).elements:
            for x in b:
                L = L * x.denominator // gcd(L, x.denominator)
    return L


def gamma_vector(P: Polytope, g: GammaGroup, element) -> tuple:
    """The integral vector sum_j b_j eta_j representing an element."""
    out = [Fraction(0)] * P.d
    for bj, j in zip(element, g.facets):
        out = linalg.add(out, linalg.scale(bj, P.normals[j]))
    return tuple(out)


def b_coordinates(P: Polytope, facets, vec) -> dict:
    """Coordinates of vec against {eta_j : j in facets}; vec must lie in their span."""
    facets = sorted(facets)
    etas = [list(map(Fraction, P.normals[j])) for j in facets]
    gram = [[linalg.dot(a, b) for b in etas] for a in etas]
    coef = linalg.solve(gram, [linalg.dot(e, vec) for e in etas])
    recon = [Fraction(0)] * P.d
    for c, e in zip(coef, etas):
        recon = linalg.add(recon, linalg.scale(c, e))
    if recon != [Fraction(c) for c in vec]:
        raise ValueError("vector is not in the span of the given normals")
    return dict(zip(facets, coef))


def character_average(g: GammaGroup, coords, L: int):
    """(1/|Gamma|) sum_gamma e^{2 pi i sum_j b_j m_j} for integer coordinates m
    of a point of the alpha-lattice."""
    total = Fraction(0)
    for b in g.elements:
        t = sum((bj * m for bj, m in zip(b, coords)), Fraction(0))
        t = _frac_part(t)
        total = total + cyclo(t.numerator, t.denominator, L)
    return simplify(total / g.order)


def enumerate_lattice_points(P: Polytope) -> list:
    lo, hi = P.bounding_box()
    ranges = [range(ceil(a), floor(b) + 1) for a, b in zip(lo, hi)]
    return [x for x in product(*ranges) if P.contains(x)]


def weighted_lattice_sum(P: Polytope, w, f):
    """sum over integer points x of P of w(x) f(x)."""
    terms = (weighted_indicator_polytope(P, w, x) * f(*x) for x in enumerate_lattice_points(P))
    return simplify(reduce(lambda a, b: a + b, terms, Fraction(0)))
