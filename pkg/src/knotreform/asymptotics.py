"""Genus expansion of connected invariants at q = e^(ix), l fixed.

Series are computed in y = ix so every coefficient stays rational.  The
expansion is

    weight(k) W^(c)_k = i^h sum_g x^(2g-2+h) F_g(l),     h = sum_alpha |k^alpha|,

and with x = -iy the y-coefficient of order 2g-2+h equals (-1)^(g-1) F_g.
That dictionary is :data:`CONVENTION`; :func:`calibrated_sign` multiplies it
by one global sign fixed by demanding agreement with the closed unknot
formula at g = 0, d = 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping

from .errors import ConsistencyViolation, ResidualQDependence
from .extract import IntegerTable, class_basis_integers, class_polynomial, class_prefactor
from .links import unknot_table
from .reformulate import (
    KTuple,
    connected_from_table,
    ktuple_divide,
    ktuple_divides,
    ktuple_length,
    ktuple_sizes,
    ktuple_weight,
)
from .ring import ZERO, LaurentQL, RatFn, as_ratfn, expand_y, monomial
from .symmgroup import divisors

CONVENTION = "y = i x; F_g = sign * (-1)^(g-1) * [y^(2g-2+h)] (prod |C|/l!) W^(c)"


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = +1/2 (Akiyama-Tanigawa); only even n matter here."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a = [Fraction(1, m + 1) for m in range(n + 1)]
    for m in range(n + 1):
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def unknot_closed_form(g: int, d: int) -> LaurentQL:
    """(1 - 2^(1-2g)) |B_2g| / (2g)! * d^(2g-2) * (l^(d/2) - l^(-d/2))."""
    if g < 0 or d < 1:
        raise ValueError("need g >= 0 and d >= 1")
    c = (1 - Fraction(2) ** (1 - 2 * g)) * abs(bernoulli(2 * g)) / factorial(2 * g)
    c *= Fraction(d) ** (2 * g - 2)
    return (monomial(0, d) - monomial(0, -d)) * c


def _genus_coefficients(value: RatFn, h: int, g_max: int, k) -> dict[int, LaurentQL]:
    order = 2 * g_max - 2 + h
    series = expand_y(value, order)
    lead = series.leading_power()
    out = {}
    if lead is None:
        return out
    if lead < h - 2:
        raise ResidualQDependence(
            f"class tuple {k}: pole of order {-lead} exceeds the genus-zero bound {2 - h}"
        )
    for n in range(lead, order + 1):
        c = series[n]
        if not c:
            continue
        if (n - h) % 2:
            raise ResidualQDependence(f"class tuple {k}: y^{n} has the wrong parity for a genus expansion")
        g = (n - h + 2) // 2
        out[g] = c if g % 2 else -c  # (-1)^(g-1)
    return out


@dataclass
class GenusTable:
    entries: dict = field(default_factory=dict)  # (KTuple, g) -> LaurentQL in l
    sign: int = 1
    convention: str = CONVENTION

    def __getitem__(self, key) -> LaurentQL:
        return self.entries.get(key, ZERO)


def genus_expand(Wc: Mapping[KTuple, RatFn], g_max: int, sign: int | None = None) -> GenusTable:
    """F_{g,k}(l) for 0 <= g <= g_max and every class tuple in ``Wc``."""
    if sign is None:
        sign = calibrated_sign()
    table = GenusTable(sign=sign)
    for k, w in Wc.items():
        if not w:
            continue
        h = ktuple_length(k)
        for g, c in _genus_coefficients(w * ktuple_weight(k), h, g_max, k).items():
            if c:
                table.entries[(k, g)] = c * sign
    return table


def unit_class(d: int) -> KTuple:
    """The one-component class tuple with a single d-cycle."""
    return (tuple([0] * (d - 1) + [1]),)


@lru_cache(maxsize=None)
def calibrated_sign() -> int:
    """Global sign making the unknot's g = 0, d = 1 term agree with the closed form."""
    Wc = connected_from_table(unknot_table(1), 1)
    raw = genus_expand(Wc, 0, sign=1)[(unit_class(1), 0)]
    target = unknot_closed_form(0, 1)
    if raw == target:
        return 1
    if raw == -target:
        return -1
    raise ConsistencyViolation(f"unknot genus-zero term {raw} is not +-{target}")


@dataclass
class UnknotCell:
    d: int
    g: int
    expanded: LaurentQL
    closed_form: LaurentQL

    @property
    def match(self) -> bool:
        return self.expanded == self.closed_form

    @property
    def magnitude_match(self) -> bool:
        return self.expanded == self.closed_form or self.expanded == -self.closed_form


@dataclass
class UnknotReport:
    sign: int
    convention: str
    cells: list

    @property
    def ok(self) -> bool:
        return all(c.match for c in self.cells)

    @property
    def magnitudes_ok(self) -> bool:
        return all(c.magnitude_match for c in self.cells)


def unknot_check(g_max: int = 3, d_max: int = 3) -> UnknotReport:
    """Compare the unknot's genus expansion with the closed form for d <= d_max, g <= g_max."""
    Wc = connected_from_table(unknot_table(d_max), d_max)
    table = genus_expand({unit_class(d): Wc[unit_class(d)] for d in range(1, d_max + 1)}, g_max)
    cells = [
        UnknotCell(d, g, table[(unit_class(d), g)], unknot_closed_form(g, d))
        for d in range(1, d_max + 1)
        for g in range(g_max + 1)
    ]
    return UnknotReport(table.sign, table.convention, cells)


@dataclass
class ResummationReport:
    checked: list
    g_max: int


def resummed_connected(n: Mapping, k: KTuple) -> RatFn:
    """sum_{d | k} d^(|k|-1) psi_d( prefactor(k/d) * sum n_{k/d,g,Q} z^g l^Q )."""
    h = ktuple_length(k)
    acc = as_ratfn(ZERO)
    for d in divisors(max(ktuple_sizes(k))):
        if not ktuple_divides(d, k):
            continue
        kd = ktuple_divide(k, d)
        poly = class_polynomial(n, kd)
        if poly:
            acc = acc + (class_prefactor(kd) * poly).adams(d) * d ** (h - 1)
    return acc


def resummation_check(N: IntegerTable, Wc: Mapping[KTuple, RatFn], g_max: int) -> ResummationReport:
    """Genus expansion of W^(c) against the one rebuilt from the integers, order by order.

    Only class tuples with every slot non-zero are compared, matching the
    rep tuples for which integers are extracted.
    """
    n = class_basis_integers(N)
    checked = []
    for k, w in Wc.items():
        if not all(k):
            continue
        h = ktuple_length(k)
        weight = ktuple_weight(k)
        lhs = _genus_coefficients(w * weight, h, g_max, k)
        rhs = _genus_coefficients(resummed_connected(n, k) * weight, h, g_max, k)
        for g in range(g_max + 1):
            a, b = lhs.get(g, ZERO), rhs.get(g, ZERO)
            if a != b:
                raise ConsistencyViolation(f"class tuple {k}, genus {g}: expansion {a} but resummation gives {b}")
        checked.append(k)
    return ResummationReport(checked, g_max)
