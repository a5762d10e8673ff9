"""One-dimensional weighted and twisted Euler-Maclaurin identities, checked
exactly on compactly supported splines.

Every side of every identity is a finite sum of polynomial integrals over
pieces of a common refinement of the integer grid and the spline
breakpoints, so all comparisons are equalities of field elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import ceil, comb, factorial, floor

from .exact import (
    CycloNumber,
    MultiPoly,
    TruncatedSeries,
    bernoulli_polynomial,
    cyclo,
    parse_fraction,
    q_series,
    root_of_unity_order,
    simplify,
    to_json_number,
    twist_series,
)
from . import linalg

__all__ = [
    "SmoothnessTooLow",
    "LambdaIsOne",
    "Spline1D",
    "bspline",
    "cox_de_boor",
    "spline_from_json",
    "periodic_bernoulli",
    "PeriodicPiece",
    "bernoulli_piece",
    "q_lambda",
    "q_lambda_at_zero",
    "twisted_todd_coefficient",
    "root_of_unity",
    "integrate_periodic",
    "IdentityReport",
    "em_interval",
    "em_halfray",
    "em_halfray_left",
    "em_line",
    "em_twisted_halfray",
    "em_twisted_halfray_left",
    "em_sector_tensor",
    "em_regular_sector",
]


class SmoothnessTooLow(ValueError):
    pass


class LambdaIsOne(ValueError):
    pass


# --------------------------------------------------------------------------
# dense univariate polynomials: coefficient lists, lowest degree first

def _trim(p):
    p = [simplify(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def _padd(p, r):
    n = max(len(p), len(r))
    return _trim([(p[i] if i < len(p) else 0) + (r[i] if i < len(r) else 0) for i in range(n)])


def _pscale(c, p):
    return _trim([c * a for a in p])


def _pmul(p, r):
    if not p or not r:
        return []
    out = [Fraction(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                out[i + j] = out[i + j] + a * b
    return _trim(out)


def _peval(p, x):
    v = Fraction(0)
    for c in reversed(p):
        v = v * x + c
    return simplify(v)


def _pderiv(p):
    return _trim([i * p[i] for i in range(1, len(p))])


def _pantideriv(p):
    return _trim([Fraction(0)] + [c / (i + 1) for i, c in enumerate(p)])


def _pcompose_linear(p, alpha, beta):
    """p(alpha x + beta)."""
    out = []
    lin = [beta, alpha]
    power = [Fraction(1)]
    for c in p:
        out = _padd(out, _pscale(c, power))
        power = _pmul(power, lin)
    return out


def _pintegral(p, lo, hi):
    P = _pantideriv(p)
    return simplify(_peval(P, hi) - _peval(P, lo))


# --------------------------------------------------------------------------
# splines

class Spline1D:
    """Compactly supported piecewise polynomial.

    ``pieces[i]`` is the polynomial (in the global variable x) used on
    ``[breakpoints[i], breakpoints[i+1])``; the function is 0 outside the
    support.  ``smoothness`` is the declared class C^m (-1: discontinuous).
    """

    __slots__ = ("breakpoints", "pieces", "smoothness")

    def __init__(self, breakpoints, pieces, smoothness: int):
        bps = [Fraction(b) for b in breakpoints]
        if len(pieces) != len(bps) - 1:
            raise ValueError("need one piece per breakpoint interval")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        self.breakpoints = tuple(bps)
        self.pieces = tuple(tuple(_trim(p)) for p in pieces)
        self.smoothness = int(smoothness)

    @property
    def support(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def degree(self) -> int:
        return max((len(p) - 1 for p in self.pieces), default=0)

    def _piece_index(self, x):
        bps = self.breakpoints
        if x < bps[0] or x >= bps[-1]:
            return None
        lo, hi = 0, len(bps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bps[mid] <= x:
                lo = mid
            else:
                hi = mid
        return lo

    def __call__(self, x):
        x = Fraction(x)
        i = self._piece_index(x)
        if i is None:
            return Fraction(0)
        return _peval(self.pieces[i], x)

    def derivative(self, r: int = 1) -> "Spline1D":
        pieces = [list(p) for p in self.pieces]
        for _ in range(r):
            pieces = [_pderiv(p) for p in pieces]
        return Spline1D(self.breakpoints, pieces, max(self.smoothness - r, -1))

    def eval_derivative(self, r: int, x):
        """f^{(r)}(x), using the right-hand piece at a breakpoint."""
        if r > self.smoothness + 1:
            raise SmoothnessTooLow(f"f^({r}) needs class C^{r - 1}, spline is C^{self.smoothness}")
        return self.derivative(r)(x)

    def integral(self, lo=None, hi=None):
        """Integral over [lo, hi] (defaults: the support)."""
        a, b = self.support
        lo = a if lo is None else max(Fraction(lo), a)
        hi = b if hi is None else min(Fraction(hi), b)
        total = Fraction(0)
        for (u, v), p in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            u, v = max(u, lo), min(v, hi)
            if u < v:
                total = total + _pintegral(p, u, v)
        return simplify(total)

    def refine(self, points) -> "Spline1D":
        """Same function on a finer breakpoint list (points outside the support extend it by 0)."""
        pts = sorted(set(self.breakpoints) | {Fraction(p) for p in points})
        pieces = []
        for u, v in zip(pts, pts[1:]):
            i = self._piece_index(u)
            pieces.append(list(self.pieces[i]) if i is not None and v <= self.breakpoints[-1] else [])
        return Spline1D(pts, pieces, self.smoothness)

    def __add__(self, other: "Spline1D") -> "Spline1D":
        pts = set(self.breakpoints) | set(other.breakpoints)
        a, b = self.refine(pts), other.refine(pts)
        return Spline1D(a.breakpoints, [_padd(p, r) for p, r in zip(a.pieces, b.pieces)],
                        min(self.smoothness, other.smoothness))

    def __mul__(self, c) -> "Spline1D":
        return Spline1D(self.breakpoints, [_pscale(c, p) for p in self.pieces], self.smoothness)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def shifted(self, s) -> "Spline1D":
        """x -> f(x - s)."""
        s = Fraction(s)
        return Spline1D([b + s for b in self.breakpoints],
                        [_pcompose_linear(p, Fraction(1), -s) for p in self.pieces], self.smoothness)

    def reflected(self) -> "Spline1D":
        """x -> f(-x)."""
        bps = [-b for b in reversed(self.breakpoints)]
        pieces = [_pcompose_linear(p, Fraction(-1), Fraction(0)) for p in reversed(self.pieces)]
        return Spline1D(bps, pieces, self.smoothness)

    def integer_points(self, lo=None, hi=None) -> range:
        a, b = self.support
        lo = a if lo is None else max(Fraction(lo), a)
        hi = b if hi is None else min(Fraction(hi), b)
        return range(ceil(lo), floor(hi) + 1)

    def check_smoothness(self) -> bool:
        """Do the pieces (with 0 outside) match up to the declared order?"""
        pieces = [[]] + [list(p) for p in self.pieces] + [[]]
        for r in range(self.smoothness + 1):
            for i, x in enumerate(self.breakpoints):
                if _peval(pieces[i], x) != _peval(pieces[i + 1], x):
                    return False
            pieces = [_pderiv(p) for p in pieces]
        return True

    def to_json(self) -> dict:
        return {
            "breakpoints": [str(b) for b in self.breakpoints],
            "pieces": [[to_json_number(c) for c in p] for p in self.pieces],
            "smoothness": self.smoothness,
        }

    def __repr__(self):
        return f"Spline1D(support={[str(x) for x in self.support]}, C^{self.smoothness}, {len(self.pieces)} pieces)"


def _cardinal_pieces(n: int) -> list:
    """Pieces of the cardinal B-spline of order n on [j, j+1), j = 0..n-1,
    from the truncated power formula."""
    pieces = []
    for j in range(n):
        p = []
        for i in range(j + 1):
            term = _pscale(Fraction((-1) ** i * comb(n, i), factorial(n - 1)),
                           _pcompose_linear([Fraction(0)] * (n - 1) + [Fraction(1)], Fraction(1), Fraction(-i)))
            p = _padd(p, term)
        pieces.append(p)
    return pieces


def bspline(n: int, shift=0, scale: int = 1) -> Spline1D:
    """Cardinal B-spline of order n (degree n - 1, class C^{n-2}) composed with
    x -> (x - shift) / scale; support [shift, shift + n * scale]."""
    if n < 1:
        raise ValueError("order must be at least 1")
    if scale < 1 or int(scale) != scale:
        raise ValueError("scale must be a positive integer")
    shift = Fraction(shift)
    pieces = [_pcompose_linear(p, Fraction(1, scale), -shift / scale) for p in _cardinal_pieces(n)]
    bps = [shift + scale * j for j in range(n + 1)]
    return Spline1D(bps, pieces, n - 2)


def cox_de_boor(n: int, x) -> Fraction:
    """Cardinal B-spline of order n at x by the Cox-de Boor recursion."""
    x = Fraction(x)

    def N(i, k):
        if k == 1:
            return Fraction(1) if i <= x < i + 1 else Fraction(0)
        return ((x - i) * N(i, k - 1) + (i + k - x) * N(i + 1, k - 1)) / (k - 1)

    return N(0, n)


def spline_from_json(obj) -> Spline1D:
    """{"breakpoints", "pieces", "smoothness"} | {"bspline": {order, shift, scale}}
    | {"combo": [{"coeff": c, "spline": {...}}, ...]} | "bspline:n[:shift[:scale]]"."""
    if isinstance(obj, str):
        parts = obj.split(":")
        if parts[0] != "bspline" or len(parts) < 2:
            raise ValueError(f"unrecognized spline literal {obj!r}")
        shift = parse_fraction(parts[2]) if len(parts) > 2 else 0
        scale = int(parts[3]) if len(parts) > 3 else 1
        return bspline(int(parts[1]), shift, scale)
    if "bspline" in obj:
        b = obj["bspline"]
        return bspline(int(b["order"]), parse_fraction(str(b.get("shift", 0))), int(b.get("scale", 1)))
    if "combo" in obj:
        items = [spline_from_json(it["spline"]) * parse_fraction(str(it.get("coeff", 1))) for it in obj["combo"]]
        if not items:
            raise ValueError("empty spline combination")
        return reduce(lambda a, b: a + b, items)
    pieces = [[parse_fraction(str(c)) for c in p] for p in obj["pieces"]]
    s = Spline1D([parse_fraction(str(b)) for b in obj["breakpoints"]], pieces, int(obj["smoothness"]))
    if not s.check_smoothness():
        raise ValueError("spline pieces do not match the declared smoothness")
    return s


# --------------------------------------------------------------------------
# periodic kernels

def periodic_bernoulli(m: int, x) -> Fraction:
    """B_m({x}) / m!."""
    if m < 1:
        raise ValueError("m must be at least 1")
    x = Fraction(x)
    return bernoulli_polynomial(m, x - floor(x)) / factorial(m)


@dataclass(frozen=True)
class PeriodicPiece:
    """Period-K function given by one polynomial in t = x - n in [0, 1) for
    each residue n mod K."""

    period: int
    pieces: tuple

    def __call__(self, x):
        x = Fraction(x)
        n = floor(x)
        return _peval(self.pieces[n % self.period], x - n)

    def at_zero(self):
        p = self.pieces[0]
        return p[0] if p else Fraction(0)

    def mean_integral(self):
        """Integral over one full period [0, K]."""
        return simplify(sum((_pintegral(p, 0, 1) for p in self.pieces), Fraction(0)))

    def to_json(self) -> dict:
        return {"period": self.period, "pieces": [[to_json_number(c) for c in p] for p in self.pieces]}


def _next_kernel(prev: PeriodicPiece) -> PeriodicPiece:
    """Continuous antiderivative of ``prev`` with zero integral over a period."""
    K = prev.period
    anti = [_pantideriv(p) for p in prev.pieces]
    # piece n is C_0 + s_n + anti_n(t), s_n = sum_{i<n} anti_i(1)
    s, offsets = Fraction(0), []
    for a in anti:
        offsets.append(s)
        s = s + _peval(a, 1)
    rest = sum((o + _pintegral(a, 0, 1) for o, a in zip(offsets, anti)), Fraction(0))
    c0 = -rest / K
    return PeriodicPiece(K, tuple(tuple(_padd(a, [c0 + o])) for a, o in zip(anti, offsets)))


_KERNELS: dict = {}


def bernoulli_piece(m: int) -> PeriodicPiece:
    """P_m built by the antiderivative recursion from P_1 = {x} - 1/2."""
    if m < 1:
        raise ValueError("m must be at least 1")
    key = ("P", m)
    if key not in _KERNELS:
        if m == 1:
            _KERNELS[key] = PeriodicPiece(1, ((Fraction(-1, 2), Fraction(1)),))
        else:
            _KERNELS[key] = _next_kernel(bernoulli_piece(m - 1))
    return _KERNELS[key]


def root_of_unity(j: int, K: int):
    """e^{2 pi i j / K} as an exact field element (rational when possible)."""
    return simplify(cyclo(j, K, K))


def _lambda_order(lam) -> int:
    lam = simplify(lam)
    if lam == 1:
        raise LambdaIsOne("lambda = 1: use the untwisted identities")
    if isinstance(lam, CycloNumber):
        K = root_of_unity_order(lam)
        if K is None:
            raise ValueError(f"{lam!r} is not a root of unity")
        return K
    if lam == -1:
        return 2
    raise ValueError(f"{lam} is not a root of unity")


def q_lambda(m: int, lam) -> PeriodicPiece:
    """Q_{m,lambda}: Q_1 = lambda/(1 - lambda) * lambda^n on [n, n+1), then
    continuous zero-mean antiderivatives."""
    if m < 1:
        raise ValueError("m must be at least 1")
    lam = simplify(lam)
    K = _lambda_order(lam)
    key = ("Q", m, lam.order if isinstance(lam, CycloNumber) else 1,
           lam.coeffs if isinstance(lam, CycloNumber) else lam)
    if key not in _KERNELS:
        if m == 1:
            c = lam / (1 - lam)
            pieces, pw = [], Fraction(1)
            for _ in range(K):
                pieces.append(tuple(_trim([c * pw])))
                pw = pw * lam
            _KERNELS[key] = PeriodicPiece(K, tuple(pieces))
        else:
            _KERNELS[key] = _next_kernel(q_lambda(m - 1, lam))
    return _KERNELS[key]


def q_lambda_at_zero(m: int, lam):
    return simplify(q_lambda(m, lam).at_zero())


def twisted_todd_coefficient(m: int, lam):
    """Coefficient of s^(m-1) in the Taylor series of 1/(1 - lambda e^{-s})."""
    _lambda_order(lam)
    denom = 1 - TruncatedSeries.exp(-1, m - 1) * simplify(lam)
    return denom.inverse()[m - 1]


# --------------------------------------------------------------------------
# exact integrals of kernel times spline

def integrate_periodic(kernel: PeriodicPiece, f: Spline1D, lo=None, hi=None):
    """Integral of kernel(x) f(x) over [lo, hi] intersected with the support of f."""
    a, b = f.support
    lo = a if lo is None else max(Fraction(lo), a)
    hi = b if hi is None else min(Fraction(hi), b)
    if lo >= hi:
        return Fraction(0)
    cuts = sorted({lo, hi} | {Fraction(n) for n in range(ceil(lo), floor(hi) + 1)}
                  | {x for x in f.breakpoints if lo < x < hi})
    total = Fraction(0)
    for u, v in zip(cuts, cuts[1:]):
        n = floor(u)
        i = f._piece_index(u)
        if i is None:
            continue
        kp = _pcompose_linear(list(kernel.pieces[n % kernel.period]), Fraction(1), Fraction(-n))
        total = total + _pintegral(_pmul(kp, list(f.pieces[i])), u, v)
    return simplify(total)


# --------------------------------------------------------------------------
# identities

@dataclass
class IdentityReport:
    kind: str
    params: dict
    lhs: object
    main: object
    remainder: object
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return simplify(self.main + self.remainder) == simplify(self.lhs) and all(
            v for k, v in self.extra.items() if k.startswith("check_")
        )

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, (Fraction, int, CycloNumber)):
                return to_json_number(simplify(v))
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {
            "kind": self.kind,
            "params": {k: enc(v) for k, v in sorted(self.params.items())},
            "lhs": enc(self.lhs),
            "main": enc(self.main),
            "remainder": enc(self.remainder),
            "ok": self.ok,
            **{k: enc(v) for k, v in sorted(self.extra.items())},
        }


def _ray_operator(q, m: int) -> TruncatedSeries:
    """Weighted Todd operator for remainder order m: even part truncated at
    2 floor(m/2), linear term (q - 1/2) S always kept (needed when m = 1)."""
    k2 = 2 * (m // 2)
    return q_series(q, k2) if k2 else TruncatedSeries([1, simplify(q - Fraction(1, 2))])


def _require(f: Spline1D, m: int):
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > f.smoothness:
        raise SmoothnessTooLow(f"m = {m} exceeds the smoothness C^{f.smoothness} of the test function")


def _right_ray_jet(f: Spline1D, a, order: int) -> list:
    """r-th h-derivative at 0 of the integral of f over [a - h, oo), r = 0..order."""
    out = [f.integral(lo=a)]
    for r in range(1, order + 1):
        out.append(simplify((-1) ** (r - 1) * f.eval_derivative(r - 1, a)))
    return out


def _left_ray_jet(f: Spline1D, a, order: int) -> list:
    """r-th h-derivative at 0 of the integral of f over (-oo, a + h]."""
    out = [f.integral(hi=a)]
    for r in range(1, order + 1):
        out.append(f.eval_derivative(r - 1, a))
    return out


def _apply_series(series: TruncatedSeries, jet: list):
    """series(d/dh) applied to a function with the given derivatives at 0."""
    total = Fraction(0)
    for r in range(min(series.order, len(jet) - 1) + 1):
        if series[r] and jet[r]:
            total = total + series[r] * jet[r]
    return simplify(total)


def _apply_multi(series_list, poly: MultiPoly):
    total = Fraction(0)
    for e, c in poly.terms.items():
        v = c
        for a, s in zip(e, series_list):
            v = v * s[a] * factorial(a)
        total = total + v
    return simplify(total)


def _taylor_poly(nvars: int, var: int, jet: list) -> MultiPoly:
    p = MultiPoly(nvars)
    for r, c in enumerate(jet):
        if r == 0:
            continue
        e = [0] * nvars
        e[var] = r
        p = p + MultiPoly.monomial(e, Fraction(1, factorial(r)) * c)
    return p


def em_interval(f: Spline1D, a: int, b: int, q_a, q_b, m: int) -> IdentityReport:
    """q_a f(a) + f(a+1) + ... + f(b-1) + q_b f(b) against the weighted Todd
    operators applied to the integral over [a - h1, b + h2], plus
    (-1)^(m-1) times the integral of P_m f^(m) over [a, b]."""
    _require(f, m)
    if not (int(a) == a and int(b) == b and a < b):
        raise ValueError("need integers a < b")
    a, b = int(a), int(b)
    k2 = 2 * (m // 2)
    q_a, q_b = simplify(q_a), simplify(q_b)
    lhs = q_a * f(a) + q_b * f(b) + sum((f(n) for n in range(a + 1, b)), Fraction(0))
    # h-polynomial of the integral over [a - h1, b + h2]: no mixed terms
    order = max(k2, 1)
    left = _right_ray_jet(f, a, order)
    right = _left_ray_jet(f, b, order)
    G = MultiPoly.constant(2, f.integral(a, b)) + _taylor_poly(2, 0, left) + _taylor_poly(2, 1, right)
    main = _apply_multi([_ray_operator(q_a, m), _ray_operator(q_b, m)], G)
    rem = (-1) ** (m - 1) * integrate_periodic(bernoulli_piece(m), f.derivative(m), a, b)
    return IdentityReport("interval", {"a": a, "b": b, "q_a": q_a, "q_b": q_b, "m": m},
                          simplify(lhs), main, simplify(rem))


def em_halfray(f: Spline1D, a: int, q, m: int) -> IdentityReport:
    """q f(a) + f(a+1) + ... on [a, oo)."""
    _require(f, m)
    a = int(a)
    k2 = 2 * (m // 2)
    q = simplify(q)
    lhs = q * f(a) + sum((f(n) for n in f.integer_points(lo=a + 1)), Fraction(0))
    main = _apply_series(_ray_operator(q, m), _right_ray_jet(f, a, max(k2, 1)))
    rem = (-1) ** (m - 1) * integrate_periodic(bernoulli_piece(m), f.derivative(m), lo=a)
    return IdentityReport("halfray", {"a": a, "q": q, "m": m}, simplify(lhs), main, simplify(rem))


def em_halfray_left(f: Spline1D, a: int, q, m: int) -> IdentityReport:
    """q f(a) + f(a-1) + ... on (-oo, a]."""
    _require(f, m)
    a = int(a)
    k2 = 2 * (m // 2)
    q = simplify(q)
    lhs = q * f(a) + sum((f(n) for n in f.integer_points(hi=a - 1)), Fraction(0))
    main = _apply_series(_ray_operator(q, m), _left_ray_jet(f, a, max(k2, 1)))
    rem = (-1) ** (m - 1) * integrate_periodic(bernoulli_piece(m), f.derivative(m), hi=a)
    return IdentityReport("halfray_left", {"a": a, "q": q, "m": m}, simplify(lhs), main, simplify(rem))


def em_line(f: Spline1D, m: int) -> IdentityReport:
    """Sum of f over Z against its integral plus (-1)^(m-1) int P_m f^(m)."""
    _require(f, m)
    lhs = sum((f(n) for n in f.integer_points()), Fraction(0))
    rem = (-1) ** (m - 1) * integrate_periodic(bernoulli_piece(m), f.derivative(m))
    return IdentityReport("line", {"m": m}, simplify(lhs), f.integral(), simplify(rem))


def _twisted_sum(f: Spline1D, lam, q):
    total = q * f(0)
    for n in f.integer_points(lo=1):
        v = f(n)
        if v:
            total = total + (lam ** n) * v
    return simplify(total)


def em_twisted_halfray(f: Spline1D, lam, q, k: int) -> IdentityReport:
    """q f(0) + sum_{n >= 1} lambda^n f(n) against N_q^{k,lambda}(d/dh) applied
    to the integral over [-h, oo), plus (-1)^(k-1) int_0^oo Q_{k,lambda} f^(k)."""
    lam = simplify(lam)
    K = _lambda_order(lam)
    if k < 1:
        raise ValueError("k must be at least 1")
    _require(f, k)
    q = simplify(q)
    lhs = _twisted_sum(f, lam, q)
    main = _apply_series(twist_series(q, lam, k), _right_ray_jet(f, 0, k))
    rem = (-1) ** (k - 1) * integrate_periodic(q_lambda(k, lam), f.derivative(k), lo=0)
    return IdentityReport("twisted", {"lambda": lam, "order": K, "q": q, "k": k},
                          lhs, main, simplify(rem))


def em_twisted_halfray_left(f: Spline1D, lam, q, k: int) -> IdentityReport:
    """q f(0) + sum_{n <= -1} lambda^n f(n).

    The main term uses N_{1-q}^{k,lambda}(-d/dh) on the integral over
    (-oo, h]; the remainder comes from the right-ray identity for f(-x)
    with lambda^{-1}.  ``check_reflection`` records that this main term
    equals the right-ray main term of the reflected problem.
    """
    lam = simplify(lam)
    K = _lambda_order(lam)
    _require(f, k)
    q = simplify(q)
    inv = lam.inverse() if isinstance(lam, CycloNumber) else 1 / lam
    inv = simplify(inv)
    g = f.reflected()
    mirror = em_twisted_halfray(g, inv, q, k)
    series = twist_series(1 - q, lam, k).negate_variable()
    main = _apply_series(series, _left_ray_jet(f, 0, k))
    lhs = q * f(0)
    for n in f.integer_points(hi=-1):
        v = f(n)
        if v:
            lhs = lhs + (inv ** (-n)) * v
    return IdentityReport("twisted_left", {"lambda": lam, "order": K, "q": q, "k": k},
                          simplify(lhs), main, mirror.remainder,
                          {"check_reflection": main == mirror.main and simplify(lhs) == mirror.lhs})


def _sector_enumeration(J, fs, qs):
    """Directly enumerated weighted sum of prod f_i over the standard J-sector."""
    axes = []
    for i, f in enumerate(fs):
        pts = f.integer_points(lo=0 if i in J else None)
        axes.append(list(pts))
    total = Fraction(0)
    for x in product(*axes):
        v = Fraction(1)
        for i, xi in enumerate(x):
            v = v * fs[i](xi)
            if not v:
                break
            if i in J and xi == 0:
                v = v * qs[i]
        if v:
            total = total + v
    return simplify(total)


def em_sector_tensor(J, fs, qs, m: int) -> IdentityReport:
    """Weighted sum of a tensor product f = prod f_i(x_i) over the standard
    sector {x_j >= 0, j in J}.

    The main term is the product of weighted Todd operators in h_J applied to
    the integral over the shifted sector; the remainder is the sum of all
    cross terms of the per-axis identities.  ``check_enumeration`` compares
    the left side with a direct lattice enumeration.
    """
    J = sorted(set(J))
    d = len(fs)
    if any(j < 0 or j >= d for j in J):
        raise ValueError("sector axes out of range")
    qs = {j: simplify(qs[j]) for j in J}
    k2 = 2 * (m // 2)
    per_axis = []
    for i, f in enumerate(fs):
        per_axis.append(em_halfray(f, 0, qs[i], m) if i in J else em_line(f, m))
    lhs = reduce(lambda a, r: a * r.lhs, per_axis, Fraction(1))
    # integral over the shifted sector as a polynomial in h_J (one var per axis)
    G = MultiPoly.constant(d, 1)
    series = []
    for i, f in enumerate(fs):
        if i in J:
            G = G * (MultiPoly.constant(d, f.integral(lo=0)) + _taylor_poly(d, i, _right_ray_jet(f, 0, max(k2, 1))))
            series.append(_ray_operator(qs[i], m))
        else:
            G = G * f.integral()
            series.append(TruncatedSeries([1]))
    main = _apply_multi(series, G)
    total = reduce(lambda a, r: a * (r.main + r.remainder), per_axis, Fraction(1))
    rem = simplify(total - main)
    direct = _sector_enumeration(J, fs, qs)
    return IdentityReport("sector", {"J": J, "q": [qs[j] for j in J], "m": m},
                          simplify(lhs), main, rem,
                          {"check_enumeration": direct == simplify(lhs), "enumerated": direct})


def em_regular_sector(J, M, b, fs, qs, m: int) -> IdentityReport:
    """Regular sector C = M S_J + b with M unimodular and b integral, for
    f = g o A^{-1} where g = prod f_i is a tensor product.

    The identity is the standard-sector one for g; ``check_enumeration``
    enumerates C directly in x-coordinates with facet weights.
    """
    M = [[int(c) for c in row] for row in M]
    d = len(M)
    if abs(linalg.det(M)) != 1:
        raise ValueError("the linear part must be unimodular")
    b = [Fraction(c) for c in b]
    if any(c.denominator != 1 for c in b):
        raise ValueError("the translation must be integral")
    rep = em_sector_tensor(J, fs, qs, m)
    Minv = linalg.inverse(M)
    # bounding box of A(support box)
    boxes = [f.support for f in fs]
    corners = [linalg.add(linalg.matvec(M, list(c)), b) for c in product(*boxes)]
    lo = [floor(min(c[i] for c in corners)) for i in range(d)]
    hi = [ceil(max(c[i] for c in corners)) for i in range(d)]
    total = Fraction(0)
    for x in product(*(range(a, z + 1) for a, z in zip(lo, hi))):
        y = linalg.matvec(Minv, linalg.sub(list(x), b))
        if any(y[j] < 0 for j in J):
            continue
        v = Fraction(1)
        for i, yi in enumerate(y):
            v = v * fs[i](yi)
            if not v:
                break
        if not v:
            continue
        for j in J:
            if y[j] == 0:
                v = v * simplify(qs[j])
        total = total + v
    rep.kind = "regular_sector"
    rep.params["M"] = [[str(c) for c in row] for row in M]
    rep.params["b"] = [str(c) for c in b]
    rep.extra["check_enumeration"] = rep.extra["check_enumeration"] and simplify(total) == rep.lhs
    rep.extra["enumerated"] = simplify(total)
    return rep
