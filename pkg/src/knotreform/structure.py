"""Structure of link HOMFLY polynomials in powers of s = q^(1/2) - q^(-1/2).

* :func:`decompose` writes P = sum_g p_{2g+1-L}(l) s^(2g+1-L).
* :func:`lm_check` tests the Lickorish-Millett factorization of the lowest
  coefficient through the component knots.
* :func:`strhom_check` forms the connected invariant of the all-fundamental
  coloring and tests that its low s-powers vanish; for three components it
  also evaluates the induced identity expressing p~_0 of the link through
  its sublinks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import NotZExpressible, StructureViolation
from .links import (
    U,
    LinkPresentation,
    analyze_braid,
    fundamental_table,
    homfly,
    sublink,
)
from .reformulate import FormalSeries, build_Z, ktuple_weight
from .ring import ONE, S, ZERO, LaurentQL, RatFn, as_ratfn, l_pow, rewrite_in_z

#: Coefficient of the (p_2 p_0 p_0) term in the three-component identity.
#: The two-step expansion of W^(c) gives 1 (see ``lasteq_terms``).
LASTEQ_P2_COEFF = 1


@dataclass
class HomflyDecomposition:
    L: int
    p: dict  # s-power -> l-only LaurentQL
    lk: int

    def __getitem__(self, k: int) -> LaurentQL:
        return self.p.get(k, ZERO)

    @property
    def lowest_power(self) -> int | None:
        nz = [k for k, v in self.p.items() if v]
        return min(nz) if nz else None

    def parity_ok(self) -> bool:
        return all((k - (1 - self.L)) % 2 == 0 for k, v in self.p.items() if v)

    def tilde(self, k: int) -> LaurentQL:
        """p~_k = l^lk p_k."""
        return self[k] * l_pow(2 * self.lk)


def decompose(P, pres: LinkPresentation | int, lk: int | None = None) -> HomflyDecomposition:
    """Split P into s-power coefficients; ``pres`` may be a presentation or the component count."""
    if isinstance(pres, LinkPresentation):
        L, lk = pres.L, pres.total_lk
    else:
        L, lk = pres, (lk or 0)
    X = as_ratfn(P) * S ** (L - 1) if L >= 1 else as_ratfn(P)
    if X.den != ONE:
        raise StructureViolation("s^(L-1) P is not a Laurent polynomial", witness=X)
    try:
        coeffs = rewrite_in_z(X.num)
    except NotZExpressible as exc:
        raise StructureViolation(f"s^(L-1) P is not a polynomial in s^2: {exc}", witness=X) from None
    p = {2 * g + 1 - L: c for g, c in enumerate(coeffs) if c}
    return HomflyDecomposition(L, p, lk)


@dataclass
class LMReport:
    ok: bool
    L: int
    lk: int
    lowest_power: int | None
    parity_ok: bool
    lhs: LaurentQL
    rhs: LaurentQL
    decomposition: HomflyDecomposition = field(repr=False, default=None)


def lm_check(pres: LinkPresentation) -> LMReport:
    """p_{1-L} = l^(-lk) (l^1/2 - l^-1/2)^(L-1) prod_alpha p_0(K_alpha)."""
    dec = decompose(homfly(pres.braid), pres)
    rhs = l_pow(-2 * pres.total_lk) * U ** (pres.L - 1)
    for a in range(pres.L):
        knot = sublink(pres, [a]) if pres.L > 1 else pres
        rhs = rhs * decompose(homfly(knot.braid), knot)[0]
    lhs = dec[1 - pres.L]
    ok = lhs == rhs and dec.lowest_power == 1 - pres.L and dec.parity_ok()
    return LMReport(ok, pres.L, pres.total_lk, dec.lowest_power, dec.parity_ok(), lhs, rhs, dec)


def connected_fundamental(pres: LinkPresentation) -> RatFn:
    """W^(c) of the all-fundamental coloring, from the free energy truncated at one box."""
    table = fundamental_table(pres)
    F = build_Z(table, 1).log()
    key = ((1,),) * pres.L
    return F[key] / ktuple_weight(key)


@dataclass
class StrhomReport:
    ok: bool
    L: int
    ptilde_c: dict  # s-power -> RatFn in l
    vanishing: dict  # s-power -> bool for the required range
    lasteq: dict | None = None


def _ptilde_connected(Wc: RatFn, L: int) -> dict[int, RatFn]:
    Y = as_ratfn(Wc) * S**L
    if Y.den != ONE:
        raise StructureViolation("s^L W^(c) is not a Laurent polynomial", witness=Y)
    try:
        coeffs = rewrite_in_z(Y.num)
    except NotZExpressible as exc:
        raise StructureViolation(f"s^L W^(c) is not a polynomial in s^2: {exc}", witness=Y) from None
    return {2 * g + 1 - L: RatFn(c, U) for g, c in enumerate(coeffs)}


def lasteq_terms(pres: LinkPresentation) -> dict:
    """Pieces of the three-component identity for p~_0 of the link.

    Returns ``lhs = p~_0(L)``, ``pair = sum_a p_0(K_a) p~_1(L_bc)`` and
    ``triple = sum_a p_2(K_a) p_0(K_b) p_0(K_c)``, so the identity reads
    ``lhs = u * pair - c * u^2 * triple``.
    """
    if pres.L != 3:
        raise ValueError("the identity concerns three-component links")
    dec = decompose(homfly(pres.braid), pres)
    knots = [decompose(homfly(sublink(pres, [a]).braid), 1) for a in range(3)]
    pair, triple = ZERO, ZERO
    for a in range(3):
        b, c = (x for x in range(3) if x != a)
        sub = sublink(pres, [b, c])
        pair = pair + knots[a][0] * decompose(homfly(sub.braid), sub).tilde(1)
        triple = triple + knots[a][2] * knots[b][0] * knots[c][0]
    return {"lhs": dec.tilde(0), "pair": pair, "triple": triple}


def lasteq_holds(pres: LinkPresentation, coeff: int = LASTEQ_P2_COEFF) -> bool:
    t = lasteq_terms(pres)
    return t["lhs"] == U * t["pair"] - U * U * t["triple"] * coeff


def strhom_check(pres: LinkPresentation) -> StrhomReport:
    """Vanishing of p~^(c)_k for k = 1-L, 3-L, ..., L-3."""
    L = pres.L
    pt = _ptilde_connected(connected_fundamental(pres), L)
    required = range(1 - L, L - 2, 2)
    vanishing = {k: not pt.get(k, as_ratfn(ZERO)) for k in required}
    ok = all(vanishing.values())
    last = None
    if L == 3:
        t = lasteq_terms(pres)
        last = {
            "lhs": t["lhs"],
            "rhs": U * t["pair"] - U * U * t["triple"] * LASTEQ_P2_COEFF,
            "holds": lasteq_holds(pres),
        }
        ok = ok and last["holds"]
    return StrhomReport(ok, L, pt, vanishing, last)


def all_sublinks(pres: LinkPresentation):
    for size in range(1, pres.L + 1):
        for keep in combinations(range(pres.L), size):
            yield keep, (sublink(pres, keep) if size < pres.L else pres)
