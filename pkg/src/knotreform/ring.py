"""Exact arithmetic in Q[q^(+-1/2), l^(+-1/2)] and its fraction field.

Exponents are stored doubled, so ``q^(1/2)`` is the key ``(1, 0)`` and
``l^(-3/2)`` is ``(0, -3)``.  Coefficients are :class:`fractions.Fraction`.

Besides ring arithmetic this module provides the Adams substitution
``psi_d`` (every exponent multiplied by ``d``), the formal expansion in
``y`` with ``q = e^y`` and ``l`` kept symbolic, and rewriting of
q <-> 1/q symmetric polynomials in the variable ``z = (q^1/2 - q^-1/2)^2``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import factorial, gcd
from numbers import Rational
from typing import Iterable, Mapping

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring as _sympy_ring

from .errors import EssentialSingularity, NotZExpressible, ZeroDenominator

__all__ = [
    "LaurentQL",
    "RatFn",
    "YSeries",
    "ONE",
    "ZERO",
    "QH",
    "LH",
    "S",
    "Z",
    "monomial",
    "q_pow",
    "l_pow",
    "as_laurent",
    "as_ratfn",
    "lql_arith",
    "ratfn_normalize",
    "adams",
    "expand_y",
    "rewrite_in_z",
    "from_z",
]

_POLY_RING, _X, _Y = _sympy_ring("x,y", ZZ)


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class LaurentQL:
    """Immutable Laurent polynomial in q^(1/2) and l^(1/2) with rational coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        t = {}
        if terms:
            for (a, b), c in terms.items():
                c = _frac(c)
                if c:
                    t[(int(a), int(b))] = c
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> LaurentQL:
        obj = cls.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and (0, 0) in self._t)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._t.get((0, 0), Fraction(0))

    def coefficient(self, eq: int, el: int) -> Fraction:
        return self._t.get((eq, el), Fraction(0))

    def q_exponents(self) -> set[int]:
        return {a for a, _ in self._t}

    def l_exponents(self) -> set[int]:
        return {b for _, b in self._t}

    def is_l_only(self) -> bool:
        return all(a == 0 for a, _ in self._t)

    def min_exponents(self) -> tuple[int, int]:
        return min(a for a, _ in self._t), min(b for _, b in self._t)

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self._t.values())

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce_lql(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._t:
            return self
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k)
            if v is None:
                t[k] = c
            else:
                v += c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return LaurentQL._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQL._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = _coerce_lql(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_lql(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        if isinstance(other, (int, Rational)) and not isinstance(other, LaurentQL):
            c = _frac(other)
            if not c:
                return ZERO
            return LaurentQL._raw({k: v * c for k, v in self._t.items()})
        other = _coerce_lql(other)
        if other is NotImplemented:
            return NotImplemented
        t: dict = {}
        for (a1, b1), c1 in self._t.items():
            for (a2, b2), c2 in other._t.items():
                k = (a1 + a2, b1 + b2)
                t[k] = t.get(k, 0) + c1 * c2
        return LaurentQL._raw({k: v for k, v in t.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ZeroDenominator("negative power of a non-monomial Laurent polynomial")
            ((a, b), c), = self._t.items()
            return LaurentQL._raw({(a * n, b * n): Fraction(1) / c ** (-n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, LaurentQL):
            c = _frac(other)
            if not c:
                raise ZeroDenominator("division by zero")
            return self * (1 / c)
        return RatFn(self, other)

    def __rtruediv__(self, other):
        return RatFn(other, self)

    def __eq__(self, other):
        if isinstance(other, LaurentQL):
            return self._t == other._t
        if isinstance(other, RatFn):
            return other == self
        if isinstance(other, (int, Rational)):
            return self._t == ({(0, 0): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- transformations ----------------------------------------------
    def scale_exponents(self, dq: int, dl: int) -> LaurentQL:
        """Return the polynomial with every (q, l) exponent multiplied by (dq, dl)."""
        return LaurentQL._raw({(a * dq, b * dl): c for (a, b), c in self._t.items()})

    def shift(self, dq: int, dl: int) -> LaurentQL:
        """Multiply by q^(dq/2) l^(dl/2)."""
        return LaurentQL._raw({(a + dq, b + dl): c for (a, b), c in self._t.items()})

    def adams(self, d: int) -> LaurentQL:
        return self.scale_exponents(d, d)

    def mirror(self) -> LaurentQL:
        return self.scale_exponents(-1, -1)

    def l_coefficients(self) -> dict[int, LaurentQL]:
        """Split into l-exponent groups: {doubled l-exponent: polynomial in q only}."""
        out: dict[int, dict] = {}
        for (a, b), c in self._t.items():
            out.setdefault(b, {})[(a, 0)] = c
        return {b: LaurentQL._raw(t) for b, t in out.items()}

    def q_coefficients(self) -> dict[int, LaurentQL]:
        """Split into q-exponent groups: {doubled q-exponent: polynomial in l only}."""
        out: dict[int, dict] = {}
        for (a, b), c in self._t.items():
            out.setdefault(a, {})[(0, b)] = c
        return {a: LaurentQL._raw(t) for a, t in out.items()}

    def evaluate(self, qh, lh):
        """Evaluate at q^(1/2) = qh, l^(1/2) = lh (exact for Fraction inputs)."""
        total = 0
        for (a, b), c in self._t.items():
            total += c * _power(qh, a) * _power(lh, b)
        return total

    def __repr__(self):
        from .textio import format_laurent

        return f"LaurentQL({format_laurent(self)!r})"


def _power(x, n):
    if n >= 0:
        return x**n
    return Fraction(1) / x ** (-n)


def _coerce_lql(x):
    if isinstance(x, LaurentQL):
        return x
    if isinstance(x, RatFn):
        return NotImplemented
    if isinstance(x, (int, Rational)):
        c = _frac(x)
        return LaurentQL._raw({(0, 0): c} if c else {})
    return NotImplemented


def monomial(eq: int, el: int, coeff=1) -> LaurentQL:
    """The monomial coeff * q^(eq/2) * l^(el/2)."""
    return LaurentQL({(eq, el): coeff})


def q_pow(eq: int) -> LaurentQL:
    return monomial(eq, 0)


def l_pow(el: int) -> LaurentQL:
    return monomial(0, el)


ZERO = LaurentQL._raw({})
ONE = LaurentQL._raw({(0, 0): Fraction(1)})
QH = q_pow(1)
LH = l_pow(1)
S = QH - q_pow(-1)
Z = LaurentQL({(2, 0): 1, (0, 0): -2, (-2, 0): 1})  # s^2


def lql_arith(a: LaurentQL, b: LaurentQL, op: str) -> LaurentQL:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def as_laurent(x) -> LaurentQL:
    if isinstance(x, LaurentQL):
        return x
    if isinstance(x, RatFn):
        if x.den != ONE:
            raise ValueError("rational function is not a Laurent polynomial")
        return x.num
    return _coerce_lql(x)


# -- gcd machinery (sympy sparse polynomials over ZZ) ---------------------

def _to_zz(p: LaurentQL):
    """Write a polynomial (min exponents 0) as content * primitive integer poly."""
    dens = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in p._t.values()), 1)
    ints = {k: int(c * dens) for k, c in p._t.items()}
    g = reduce(gcd, ints.values(), 0)
    content = Fraction(g, dens)
    return content, _POLY_RING.from_dict({k: v // g for k, v in ints.items()})


def _from_zz(poly, shift=(0, 0), scale=Fraction(1)) -> LaurentQL:
    da, db = shift
    return LaurentQL._raw({(a + da, b + db): scale * int(c) for (a, b), c in poly.items()})


def _canonical(num: LaurentQL, den: LaurentQL) -> tuple[LaurentQL, LaurentQL]:
    if not den._t:
        raise ZeroDenominator("zero denominator")
    if not num._t:
        return ZERO, ONE
    if den.is_monomial():
        ((a, b), c), = den._t.items()
        return LaurentQL._raw({(x - a, y - b): v / c for (x, y), v in num._t.items()}), ONE
    na, nb = num.min_exponents()
    da, db = den.min_exponents()
    num_p = num.shift(-na, -nb)
    den_p = den.shift(-da, -db)
    cn, N = _to_zz(num_p)
    cd, D = _to_zz(den_p)
    _, N2, D2 = N.cofactors(D)
    lead_key = max(D2.keys())
    lead = int(D2[lead_key])
    scale = cn / cd / lead
    new_num = _from_zz(N2, (na - da, nb - db), scale)
    new_den = _from_zz(D2, (0, 0), Fraction(1, lead))
    if new_den.is_monomial():
        # cancellation left a constant denominator (monic, exponents 0)
        return new_num, ONE
    return new_num, new_den


class RatFn:
    """Reduced quotient num/den of Laurent polynomials.

    Canonical form: ``den`` is an ordinary polynomial in q^(1/2), l^(1/2) with
    no monomial factor, its lexicographically greatest term has coefficient 1,
    and gcd(num, den) = 1.  Two values are equal iff their canonical parts are.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=ZERO, den=ONE, *, _canonical_form: bool = False):
        if isinstance(num, RatFn) or isinstance(den, RatFn):
            num, den = _divide_mixed(num, den)
            _canonical_form = True
        num = _coerce_lql(num)
        den = _coerce_lql(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RatFn requires Laurent polynomial or rational operands")
        if not _canonical_form:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _make(cls, num, den) -> RatFn:
        obj = cls.__new__(cls)
        obj.num, obj.den = _canonical(num, den)
        obj._hash = None
        return obj

    @classmethod
    def _trusted(cls, num, den) -> RatFn:
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def _sum_over(cls, num, den) -> RatFn:
        # num = a + b*den with gcd(a, den) = 1 stays coprime to den
        if not num._t:
            return cls._trusted(ZERO, ONE)
        return cls._trusted(num, den)

    def is_zero(self) -> bool:
        return not self.num._t

    def __bool__(self):
        return bool(self.num._t)

    def is_laurent(self) -> bool:
        return self.den == ONE

    def as_laurent(self) -> LaurentQL:
        return as_laurent(self)

    def __add__(self, other):
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num._t:
            return self
        if not self.num._t:
            return other
        if self.den == other.den:
            if self.den == ONE:
                return RatFn._trusted(self.num + other.num, ONE)
            return RatFn._make(self.num + other.num, self.den)
        if other.den == ONE:
            return RatFn._sum_over(self.num + other.num * self.den, self.den)
        if self.den == ONE:
            return RatFn._sum_over(self.num * other.den + other.num, other.den)
        return RatFn._make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn._trusted(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, (LaurentQL, RatFn)):
            c = _frac(other)
            if not c:
                return RatFn._trusted(ZERO, ONE)
            return RatFn._trusted(self.num * c, self.den)
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num._t or not other.num._t:
            return RatFn._trusted(ZERO, ONE)
        if self.den == ONE and other.den == ONE:
            return RatFn._trusted(self.num * other.num, ONE)
        if other.num.is_monomial() and other.den == ONE:
            return RatFn._trusted(self.num * other.num, self.den)
        if self.num.is_monomial() and self.den == ONE:
            return RatFn._trusted(self.num * other.num, other.den)
        return RatFn._make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num._t:
            raise ZeroDenominator("division by zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def inverse(self) -> RatFn:
        if not self.num._t:
            raise ZeroDenominator("inverse of zero")
        return RatFn._make(self.den, self.num)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        # powers of a reduced fraction stay reduced; only the monic/shift
        # normalization needs re-checking, which holds for powers as well
        return RatFn._trusted(self.num**n, self.den**n) if self.den != ONE else RatFn._trusted(self.num**n, ONE)

    def __eq__(self, other):
        if isinstance(other, RatFn):
            return self.den == other.den and self.num == other.num
        other = _coerce_lql(other)
        if other is NotImplemented:
            return NotImplemented
        return self.den == ONE and self.num == other

    def __hash__(self):
        if self._hash is None:
            if self.den == ONE:
                self._hash = hash(self.num)
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def adams(self, d: int) -> RatFn:
        if d == 1:
            return self
        # exponent scaling is an injective ring map that keeps coprimality,
        # monicity and the zero minimal exponents of den
        return RatFn._trusted(self.num.adams(d), self.den.adams(d))

    def scale_exponents(self, dq: int, dl: int) -> RatFn:
        return RatFn._make(self.num.scale_exponents(dq, dl), self.den.scale_exponents(dq, dl))

    def mirror(self) -> RatFn:
        """Substitute (q, l) -> (1/q, 1/l)."""
        return self.scale_exponents(-1, -1)

    def evaluate(self, qh, lh):
        return self.num.evaluate(qh, lh) / self.den.evaluate(qh, lh)

    def __repr__(self):
        from .textio import format_expr

        return f"RatFn({format_expr(self)!r})"


def _coerce_ratfn(x):
    if isinstance(x, RatFn):
        return x
    x = _coerce_lql(x)
    if x is NotImplemented:
        return x
    return RatFn._trusted(x, ONE)


def _divide_mixed(num, den):
    a = _coerce_ratfn(num)
    b = _coerce_ratfn(den)
    if a is NotImplemented or b is NotImplemented:
        raise TypeError("unsupported operand for RatFn")
    r = a / b
    return r.num, r.den


def as_ratfn(x) -> RatFn:
    r = _coerce_ratfn(x)
    if r is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to RatFn")
    return r


def ratfn_normalize(num: LaurentQL, den: LaurentQL) -> RatFn:
    return RatFn(num, den)


def adams(f, d: int):
    """psi_d: multiply every q and l exponent by d."""
    if d < 1:
        raise ValueError("Adams operation needs d >= 1")
    if isinstance(f, (RatFn, LaurentQL)):
        return f.adams(d)
    return as_ratfn(f).adams(d)


# -- y-expansion --------------------------------------------------------

class YSeries:
    """Truncated Laurent series sum_{n=valuation}^{order} c_n y^n.

    Each coefficient is a Laurent polynomial in l^(1/2) only.  Terms above
    ``order`` are unknown, not zero.
    """

    __slots__ = ("valuation", "order", "coeffs")

    def __init__(self, coeffs: Iterable[LaurentQL], valuation: int = 0, order: int | None = None):
        coeffs = [as_laurent(c) for c in coeffs]
        if order is None:
            order = valuation + len(coeffs) - 1
        if len(coeffs) != max(order - valuation + 1, 0):
            raise ValueError("coefficient count does not match valuation/order")
        self.valuation = valuation
        self.order = order
        self.coeffs = coeffs

    def __getitem__(self, n: int) -> LaurentQL:
        if n > self.order:
            raise IndexError(f"y^{n} lies beyond truncation order {self.order}")
        if n < self.valuation:
            return ZERO
        return self.coeffs[n - self.valuation]

    def leading_power(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return self.valuation + i
        return None

    def truncate(self, order: int) -> YSeries:
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return YSeries(self.coeffs[: max(order - self.valuation + 1, 0)], self.valuation, order)

    def __add__(self, other: YSeries) -> YSeries:
        order = min(self.order, other.order)
        val = min(self.valuation, other.valuation)
        return YSeries([self[n] + other[n] for n in range(val, order + 1)], val, order)

    def __neg__(self):
        return YSeries([-c for c in self.coeffs], self.valuation, self.order)

    def __sub__(self, other: YSeries) -> YSeries:
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, YSeries):
            c = as_laurent(other)
            return YSeries([x * c for x in self.coeffs], self.valuation, self.order)
        val = self.valuation + other.valuation
        # accuracy: every product term with a known factor must be known
        order = min(self.order + other.valuation, other.order + self.valuation)
        out = []
        for n in range(val, order + 1):
            acc = ZERO
            for i in range(self.valuation, n - other.valuation + 1):
                a = self[i]
                if a:
                    b = other[n - i]
                    if b:
                        acc = acc + a * b
            out.append(acc)
        return YSeries(out, val, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, YSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        lo = min(self.valuation, other.valuation)
        return all(self[n] == other[n] for n in range(lo, self.order + 1))

    def __repr__(self):
        from .textio import format_laurent

        parts = [f"({format_laurent(c)})*y^{self.valuation + i}" for i, c in enumerate(self.coeffs) if c]
        return f"YSeries({' + '.join(parts) or '0'} + O(y^{self.order + 1}))"


class _YCoefficients:
    """Lazily computed y-expansion coefficients of a Laurent polynomial under q = e^y."""

    def __init__(self, p: LaurentQL):
        self.groups = [(Fraction(a, 2), c) for a, c in p.q_coefficients().items()]
        self.cache: dict[int, LaurentQL] = {}

    def __call__(self, n: int) -> LaurentQL:
        if n < 0:
            return ZERO
        v = self.cache.get(n)
        if v is None:
            fact = factorial(n)
            v = ZERO
            for a, c in self.groups:
                w = a**n / fact
                if w:
                    v = v + c * w
            self.cache[n] = v
        return v

    def valuation(self) -> int:
        # sum_i c_i e^{a_i y} with m distinct a_i vanishes to order m only if
        # all c_i vanish (Vandermonde), so the first nonzero term is below m
        for n in range(len(self.groups)):
            if self(n):
                return n
        raise ZeroDenominator("zero polynomial has no y-valuation")


def expand_y(f, K: int) -> YSeries:
    """Laurent expansion of f in y (q^(a/2) -> e^(a y/2)), exact to order y^K."""
    f = as_ratfn(f)
    if f.is_zero():
        return YSeries([ZERO] * (K + 1), 0, K)
    num = _YCoefficients(f.num)
    den = _YCoefficients(f.den)
    vn = num.valuation()
    p = den.valuation()
    lead = den(p)
    if not lead.is_monomial():
        raise EssentialSingularity(
            "leading y-coefficient of the denominator is not a unit in Q[l^(+-1/2)]"
        )
    inv = lead ** -1
    start = vn - p
    count = K - start + 1
    quot: list[LaurentQL] = []
    for i in range(max(count, 0)):
        acc = num(vn + i)
        for j in range(1, i + 1):
            dj = den(p + j)
            if dj:
                acc = acc - dj * quot[i - j]
        quot.append(acc * inv)
    if count <= 0:
        return YSeries([], K + 1, K)
    return YSeries(quot, start, K)


# -- rewriting in z = s^2 -------------------------------------------------

_Z_POWERS = [ONE]


def _z_power(g: int) -> LaurentQL:
    while len(_Z_POWERS) <= g:
        _Z_POWERS.append(_Z_POWERS[-1] * Z)
    return _Z_POWERS[g]


def rewrite_in_z(p) -> list[LaurentQL]:
    """Write p = sum_g c_g(l) z^g with z = q - 2 + 1/q.

    Returns [c_0, ..., c_G] (each an l-only Laurent polynomial).  Raises
    NotZExpressible if p is not invariant under q <-> 1/q or carries odd
    powers of q^(1/2).
    """
    p = as_laurent(p)
    if any(a % 2 for a in p.q_exponents()):
        raise NotZExpressible("polynomial has half-integer powers of q")
    coeffs: dict[int, LaurentQL] = {}
    rest = p
    while rest:
        qs = rest.q_exponents()
        top, bot = max(qs), min(qs)
        if top != -bot:
            raise NotZExpressible(f"q-degree range [{bot / 2}, {top / 2}] is not symmetric")
        g = top // 2
        lead = LaurentQL._raw({(0, b): c for (a, b), c in rest.items() if a == top})
        coeffs[g] = lead
        rest = rest - lead * _z_power(g)
    if not coeffs:
        return []
    return [coeffs.get(g, ZERO) for g in range(max(coeffs) + 1)]


def from_z(coeffs: Iterable[LaurentQL]) -> LaurentQL:
    total = ZERO
    for g, c in enumerate(coeffs):
        if c:
            total = total + as_laurent(c) * _z_power(g)
    return total
