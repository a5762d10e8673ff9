"""Exact number systems: rationals, Bernoulli numbers, cyclotomic fields,
truncated power series and sparse multivariate polynomials.

Rationals are plain :class:`fractions.Fraction` objects.  Everything else in
this module is built on top of them and never rounds.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd
from numbers import Rational

__all__ = [
    "Fraction",
    "as_fraction",
    "fraction_str",
    "parse_fraction",
    "bernoulli_number",
    "bernoulli_polynomial",
    "cyclotomic_polynomial",
    "CycloNumber",
    "cyclo",
    "simplify",
    "to_json_number",
    "from_json_number",
    "TruncatedSeries",
    "q_series",
    "todd_series",
    "twist_series",
    "MultiPoly",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, CycloNumber):
        return x.to_fraction()
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip())


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    # b_0 .. b_n with b_1 = -1/2, from sum_{j<=m} C(m+1, j) b_j = 0
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * b[j] for j in range(m))
        b.append(-s / (m + 1))
    return tuple(b)


def bernoulli_number(m: int) -> Fraction:
    """Bernoulli number b_m with b_1 = -1/2, so that S/(1 - e^{-S}) = 1 + S/2 + ..."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return _bernoulli_table(m)[m]


def bernoulli_polynomial(m: int, x) -> Fraction:
    x = as_fraction(x)
    b = _bernoulli_table(m)
    return sum((comb(m, j) * b[j] * x ** (m - j) for j in range(m + 1)), Fraction(0))


# --------------------------------------------------------------------------
# cyclotomic fields

def _poly_divmod_int(num: list, den: list) -> tuple[list, list]:
    # exact division of integer polynomials (low->high), den monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return q, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("order must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple:
    """Row e holds the reduction of x^e modulo Phi_n, for 0 <= e < n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce by the monic phi
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(rows)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class CycloNumber:
    """Element of Q(zeta_L), stored in the power basis modulo Phi_L.

    Two elements of the same order are equal iff their coefficient tuples are
    equal.  Elements of different orders are compared after lifting both to
    the lcm of the orders.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if order < 1:
            raise ValueError("order must be positive")
        deg = len(cyclotomic_polynomial(order)) - 1
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) < deg:
            coeffs = coeffs + (Fraction(0),) * (deg - len(coeffs))
        elif len(coeffs) > deg:
            coeffs = _reduce(order, coeffs)
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def rational(cls, r, order: int = 1) -> "CycloNumber":
        deg = len(cyclotomic_polynomial(order)) - 1
        return cls(order, (Fraction(r),) + (Fraction(0),) * (deg - 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def lift(self, order: int) -> "CycloNumber":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{order})")
        step = order // self.order
        table = _power_table(order)
        out = [Fraction(0)] * (len(table[0]))
        for i, c in enumerate(self.coeffs):
            if c:
                for t, v in enumerate(table[(i * step) % order]):
                    if v:
                        out[t] += c * v
        return CycloNumber(order, out)

    def _coerce(self, other):
        if isinstance(other, CycloNumber):
            if other.order == self.order:
                return self, other
            n = _lcm(self.order, other.order)
            return self.lift(n), other.lift(n)
        if isinstance(other, (int, Fraction)):
            return self, CycloNumber.rational(other, self.order)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNumber(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNumber(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.order, [c * other for c in self.coeffs])
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.order
        prod: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] = prod.get(i + j, 0) + x * y
        return CycloNumber(n, _reduce_sparse(n, prod))

    __rmul__ = __mul__

    def galois(self, t: int) -> "CycloNumber":
        """Image under zeta -> zeta^t (t coprime to the order)."""
        n = self.order
        if gcd(t, n) != 1:
            raise ValueError("t must be coprime to the order")
        table = _power_table(n)
        out = [Fraction(0)] * self.degree
        for i, c in enumerate(self.coeffs):
            if c:
                for k, v in enumerate(table[(i * t) % n]):
                    if v:
                        out[k] += c * v
        return CycloNumber(n, out)

    def conjugate(self) -> "CycloNumber":
        return self.galois(-1 % self.order if self.order > 1 else 1)

    def inverse(self) -> "CycloNumber":
        if not any(self.coeffs):
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycloNumber.rational(1 / self.coeffs[0], self.order)
        n = self.order
        other = CycloNumber.rational(1, n)
        for t in range(2, n):
            if gcd(t, n) == 1:
                other = other * self.galois(t)
        norm = (self * other).to_fraction()
        return other * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.order, [c / other for c in self.coeffs])
        if isinstance(other, CycloNumber):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloNumber.rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycloNumber):
            a, b = self._coerce(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def to_complex(self) -> complex:
        """Floating-point value, for display only."""
        import cmath

        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        if self.is_rational():
            return f"CycloNumber({self.coeffs[0]})"
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"CycloNumber[{self.order}]({' + '.join(terms)})"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [fraction_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloNumber":
        return cls(int(obj["order"]), [parse_fraction(c) for c in obj["coeffs"]])


def _reduce(n: int, coeffs) -> tuple:
    return _reduce_sparse(n, {i: c for i, c in enumerate(coeffs) if c})


def _reduce_sparse(n: int, terms: dict) -> tuple:
    table = _power_table(n)
    out = [Fraction(0)] * len(table[0])
    for e, c in terms.items():
        if c:
            for k, v in enumerate(table[e % n]):
                if v:
                    out[k] += c * v
    return tuple(out)


def cyclo(j: int, K: int, L: int) -> CycloNumber:
    """The root of unity e^{2 pi i j / K} inside Q(zeta_L); requires K | L."""
    if K < 1 or L < 1 or L % K:
        raise ValueError(f"cyclo needs K | L, got K={K}, L={L}")
    table = _power_table(L)
    return CycloNumber(L, table[(j * (L // K)) % L])


def root_of_unity_order(x: CycloNumber) -> int | None:
    """Multiplicative order of x if x is a root of unity of order dividing 2*L."""
    n = x.order
    limit = 2 * n
    one = CycloNumber.rational(1, n)
    p = x
    for k in range(1, limit + 1):
        if p == one:
            return k
        p = p * x
    return None


def simplify(x):
    """Fraction if x is a rational field element, otherwise x unchanged."""
    if isinstance(x, CycloNumber) and x.is_rational():
        return x.coeffs[0]
    if isinstance(x, int):
        return Fraction(x)
    return x


def to_json_number(x):
    x = simplify(x)
    if isinstance(x, Fraction):
        return fraction_str(x)
    return x.to_json()


def from_json_number(obj):
    if isinstance(obj, dict):
        return simplify(CycloNumber.from_json(obj))
    if isinstance(obj, (int, str)):
        return Fraction(obj)
    raise ValueError(f"not an exact number: {obj!r}")


# --------------------------------------------------------------------------
# truncated power series in one formal variable S

class TruncatedSeries:
    """c_0 + c_1 S + ... + c_k S^k, with ring operations truncated at order k."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order: int | None = None):
        coeffs = [simplify(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        coeffs = coeffs[: order + 1] + [Fraction(0)] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    def __getitem__(self, r: int):
        if 0 <= r <= self.order:
            return self.coeffs[r]
        return Fraction(0)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, order)

    def _other(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries([other], self.order)

    def __add__(self, other):
        other = self._other(other)
        k = min(self.order, other.order)
        return TruncatedSeries([self[i] + other[i] for i in range(k + 1)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs])
        k = min(self.order, other.order)
        out = []
        for n in range(k + 1):
            s = Fraction(0)
            for i in range(n + 1):
                a, b = self[i], other[n - i]
                if a and b:
                    s = s + a * b
            out.append(s)
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = 1 / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            s = Fraction(0)
            for i in range(1, n + 1):
                if self[i]:
                    s = s + self[i] * out[n - i]
            out.append(-s * inv0)
        return TruncatedSeries(out)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            k = min(self.order, other.order)
            return self.truncate(k) * other.truncate(k).inverse()
        return TruncatedSeries([c / other for c in self.coeffs])

    def shift(self, n: int = 1) -> "TruncatedSeries":
        """Multiply by S^n; the order grows by n."""
        return TruncatedSeries([Fraction(0)] * n + list(self.coeffs), self.order + n)

    def negate_variable(self) -> "TruncatedSeries":
        """The series in -S."""
        return TruncatedSeries([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    @classmethod
    def exp(cls, a, order: int) -> "TruncatedSeries":
        """e^{aS}."""
        return cls([simplify(a**n) / factorial(n) if n else Fraction(1) for n in range(order + 1)])

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            k = max(self.order, other.order)
            return all(self[i] == other[i] for i in range(k + 1))
        return NotImplemented

    def __repr__(self):
        return f"TruncatedSeries({list(self.coeffs)!r})"

    def to_json(self) -> list:
        return [to_json_number(c) for c in self.coeffs]


def todd_series(order: int) -> TruncatedSeries:
    """S / (1 - e^{-S}) up to S^order, by series division."""
    one_minus_exp = -(TruncatedSeries.exp(-1, order + 1) - 1)
    quotient = TruncatedSeries(one_minus_exp.coeffs[1:], order)
    return quotient.inverse()


def q_series(q, k2: int) -> TruncatedSeries:
    """Weighted Todd polynomial 1 + (q - 1/2) S + sum_{j <= k2/2} b_{2j}/(2j)! S^{2j},
    truncated at order k2 (so k2 = 0 gives the constant 1)."""
    if k2 < 0 or k2 % 2:
        raise ValueError("truncation order must be an even non-negative integer")
    coeffs = [Fraction(1), simplify(q - Fraction(1, 2))]
    for n in range(2, k2 + 1):
        coeffs.append(bernoulli_number(n) / factorial(n) if n % 2 == 0 else Fraction(0))
    return TruncatedSeries(coeffs, k2)


def twist_series(q, lam, k: int) -> TruncatedSeries:
    """Truncation at order k of (q - 1) S + S / (1 - lam e^{-S}).

    For lam = 1 this is the weighted Todd polynomial of order 2*floor(k/2).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    lam = simplify(lam)
    if lam == 1:
        return q_series(q, 2 * (k // 2))
    if isinstance(lam, CycloNumber):
        if root_of_unity_order(lam) is None:
            raise ValueError(f"{lam!r} is not a root of unity in its field")
    elif lam != -1:
        raise ValueError(f"{lam!r} is not a root of unity")
    if k == 0:
        return TruncatedSeries([Fraction(0)])
    denom = 1 - TruncatedSeries.exp(-1, k - 1) * lam
    t = denom.inverse().shift(1).truncate(k)
    lin = TruncatedSeries([0, q - 1], k)
    return t + lin


# --------------------------------------------------------------------------
# sparse multivariate polynomials

class MultiPoly:
    """Sparse polynomial: {exponent tuple: coefficient}, zero terms never stored."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError("exponent length does not match variable count")
                c = simplify(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int, coeff=1) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): coeff})

    @classmethod
    def monomial(cls, exponents, coeff=1) -> "MultiPoly":
        return cls(len(exponents), {tuple(exponents): coeff})

    def copy(self) -> "MultiPoly":
        p = MultiPoly(self.nvars)
        p.terms = dict(self.terms)
        return p

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = MultiPoly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = MultiPoly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            other = simplify(other)
            if not other:
                return MultiPoly(self.nvars)
            p = MultiPoly(self.nvars)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, i: int, times: int = 1) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i] >= times:
                f = 1
                for t in range(times):
                    f *= e[i] - t
                ne = list(e)
                ne[i] -= times
                out[tuple(ne)] = c * f
        return MultiPoly(self.nvars, out)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError("wrong number of arguments")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x**k
            total = total + v
        return simplify(total)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def independent_of(self, i: int) -> bool:
        return all(e[i] == 0 for e in self.terms)

    def restrict(self, keep) -> "MultiPoly":
        """Set every variable whose index is not in ``keep`` to zero."""
        keep = set(keep)
        return MultiPoly(
            self.nvars,
            {e: c for e, c in self.terms.items() if all(k == 0 or i in keep for i, k in enumerate(e))},
        )

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and (self - other).is_zero()
        if isinstance(other, (int, Fraction, CycloNumber)):
            return (self - other).is_zero()
        return NotImplemented

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.terms!r})"

    def to_json(self) -> list:
        return [
            {"exponents": list(e), "coeff": to_json_number(c)}
            for e, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, items, nvars: int | None = None) -> "MultiPoly":
        items = list(items)
        if nvars is None:
            if not items:
                raise ValueError("cannot infer variable count from an empty polynomial")
            nvars = len(items[0]["exponents"])
        return cls(nvars, {tuple(it["exponents"]): from_json_number(it["coeff"]) for it in items})
