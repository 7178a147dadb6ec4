"""Integer invariants N_{(R..),g,Q} hidden in the reformulated invariants.

The ansatz is

    f_R = s^(L-2) sum_{R''} prod_alpha M_{R_alpha R''_alpha} P_{R''},
    P_{R''} = sum_{g,Q} N_{R'',g,Q} z^g l^Q,       z = s^2,

with the mixing matrix ``M_{R,R''} = sum_{R'} C_{R R' R''} S_{R'}(q)``.
Extraction runs this backwards and stops with a
:class:`~knotreform.errors.ConjectureViolation` at the first step whose
output does not have the predicted shape.  Only rep tuples with every slot
non-trivial are extracted: tuples with trivial slots belong to the sublinks
and are extracted from the sublink's own table.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

from .errors import ConjectureViolation, NotZExpressible, SingularMatrix
from .reformulate import (
    FTable,
    KTuple,
    RepTuple,
    f_class_basis,
    ktuple_length,
    ktuple_sizes,
    master_rhs,
    tuple_character,
)
from .ring import ONE, S, ZERO, LaurentQL, RatFn, as_ratfn, from_z, monomial, q_pow, rewrite_in_z
from .symmgroup import cg_coefficient, hook_monomial, kvectors, partitions

# -- mixing matrices -------------------------------------------------------------


def _gauss_inverse(rows: list[list[RatFn]]) -> list[list[RatFn]]:
    n = len(rows)
    a = [list(r) + [as_ratfn(ONE if i == j else ZERO) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise SingularMatrix(f"mixing matrix is singular (column {col})")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class MixingMatrix:
    ell: int
    labels: tuple
    matrix: tuple
    inverse: tuple

    def entry(self, R, R2) -> RatFn:
        return self.matrix[self.labels.index(tuple(R))][self.labels.index(tuple(R2))]

    def inverse_entry(self, R2, R) -> RatFn:
        return self.inverse[self.labels.index(tuple(R2))][self.labels.index(tuple(R))]


@lru_cache(maxsize=None)
def mixing_matrix(ell: int) -> MixingMatrix:
    """M_{R,R''} = sum_{R'} C_{R R' R''} S_{R'}(q) over partitions of ell, with its inverse."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    labels = partitions(ell)
    rows = []
    for R in labels:
        row = []
        for R2 in labels:
            acc = ZERO
            for R1 in labels:
                s = hook_monomial(R1)
                if s:
                    c = cg_coefficient(R, R1, R2)
                    if c:
                        acc = acc + s * c
            row.append(as_ratfn(acc))
        rows.append(row)
    inv = _gauss_inverse(rows)
    return MixingMatrix(ell, labels, tuple(map(tuple, rows)), tuple(map(tuple, inv)))


# -- integer tables --------------------------------------------------------------


@dataclass
class IntegerTable:
    """N values keyed by (rep tuple, g, 2Q); absent keys are zero."""

    L: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {
            (tuple(tuple(R) for R in reps), int(g), int(twoQ)): int(n)
            for (reps, g, twoQ), n in self.entries.items()
            if n
        }

    def get(self, reps, g: int, Q) -> int:
        """N_{reps,g,Q} with Q given as a number (e.g. Fraction(1, 2) or 3)."""
        twoQ = 2 * Q
        if twoQ != int(twoQ):
            raise ValueError("Q must be an integer or half-integer")
        return self.entries.get((tuple(tuple(R) for R in reps), g, int(twoQ)), 0)

    def reps(self) -> list:
        return sorted({k[0] for k in self.entries})

    def for_reps(self, reps) -> dict[tuple[int, int], int]:
        reps = tuple(tuple(R) for R in reps)
        return {(g, tq): n for (r, g, tq), n in self.entries.items() if r == reps}

    def parity(self, reps) -> str | None:
        """'integer' or 'half-integer' for the Q values of one rep tuple; None if empty."""
        kinds = {"half-integer" if tq % 2 else "integer" for (g, tq) in self.for_reps(reps)}
        if len(kinds) > 1:
            return "mixed"
        return kinds.pop() if kinds else None

    def __eq__(self, other):
        return isinstance(other, IntegerTable) and self.L == other.L and self.entries == other.entries

    def __len__(self):
        return len(self.entries)


def _s_power(n: int) -> RatFn:
    return as_ratfn(S**n) if n >= 0 else RatFn(ONE, S ** (-n))


def _ansatz_polynomial(f: FTable, target: RepTuple) -> RatFn:
    """s^(2-L) sum_R prod_alpha Minv[target_alpha, R_alpha] f_R."""
    L = f.L
    mats = [mixing_matrix(sum(R2)) for R2 in target]
    acc = as_ratfn(ZERO)
    for R in product(*(m.labels for m in mats)):
        v = f[R]
        if not v:
            continue
        coeff = as_ratfn(ONE)
        for m, R2, R1 in zip(mats, target, R):
            coeff = coeff * m.inverse_entry(R2, R1)
            if not coeff:
                break
        if coeff:
            acc = acc + coeff * v
    return acc * _s_power(2 - L)


def extract_reps(f: FTable, target: RepTuple) -> dict[tuple[int, int], int]:
    """N_{target,g,Q} as {(g, 2Q): N}; raises ConjectureViolation on any shape failure."""
    target = tuple(tuple(R) for R in target)
    P = _ansatz_polynomial(f, target)
    if P.den != ONE:
        raise ConjectureViolation(target, "denominator", P, "ansatz polynomial keeps a non-monomial denominator")
    poly = P.num
    if not poly.has_integer_coefficients():
        raise ConjectureViolation(target, "integrality", P, "non-integer coefficient")
    parities = {el % 2 for el in poly.l_exponents()}
    if len(parities) > 1:
        raise ConjectureViolation(target, "Q-parity", P, "Q values mix integers and half-integers")
    try:
        coeffs = rewrite_in_z(poly)
    except NotZExpressible as exc:
        raise ConjectureViolation(target, "z-expansion", P, str(exc)) from None
    out = {}
    for g, c in enumerate(coeffs):
        for (_, el), n in c.items():
            out[(g, el)] = int(n)
    return out


def full_support_reps(f: FTable) -> list[RepTuple]:
    sizes = {tuple(sum(R) for R in k) for k in f.entries}
    out = set()
    for sz in sizes:
        if all(sz):
            out.update(product(*(partitions(n) for n in sz)))
    return sorted(out)


def extract_integers(f: FTable, reps: Iterable[RepTuple] | None = None) -> IntegerTable:
    """Run the ansatz backwards for every full-support rep tuple (or the given ones)."""
    targets = full_support_reps(f) if reps is None else [tuple(tuple(R) for R in r) for r in reps]
    entries = {}
    for target in targets:
        for (g, tq), n in extract_reps(f, target).items():
            entries[(target, g, tq)] = n
    return IntegerTable(f.L, entries)


def polynomial_of(N: IntegerTable, reps) -> LaurentQL:
    """P_R = sum N_{R,g,Q} z^g l^Q."""
    by_g: dict[int, LaurentQL] = {}
    for (g, tq), n in N.for_reps(reps).items():
        by_g[g] = by_g.get(g, ZERO) + monomial(0, tq, n)
    if not by_g:
        return ZERO
    return from_z([by_g.get(g, ZERO) for g in range(max(by_g) + 1)])


def resynthesize(N: IntegerTable, L: int | None = None) -> FTable:
    """Forward ansatz: f_R = s^(L-2) sum_{R''} prod M_{R R''} P_{R''}."""
    L = N.L if L is None else L
    out: dict = {}
    pref = _s_power(L - 2)
    for target in N.reps():
        P = polynomial_of(N, target)
        if not P:
            continue
        mats = [mixing_matrix(sum(R2)) for R2 in target]
        for R in product(*(m.labels for m in mats)):
            coeff = as_ratfn(ONE)
            for m, R1, R2 in zip(mats, R, target):
                coeff = coeff * m.entry(R1, R2)
                if not coeff:
                    break
            if coeff:
                term = coeff * P * pref
                out[R] = out[R] + term if R in out else term
    return FTable(L, out)


# -- class basis ---------------------------------------------------------------------


def class_basis_integers(N: IntegerTable) -> dict[tuple[KTuple, int, int], int]:
    """n_{k,g,Q} = sum_R prod chi_{R_alpha}(k^alpha) N_{R,g,Q}."""
    out: dict = {}
    sizes = {tuple(sum(R) for R in reps) for reps in N.reps()}
    for sz in sizes:
        for k in product(*(kvectors(n) for n in sz)):
            for (reps, g, tq), n in N.entries.items():
                if tuple(sum(R) for R in reps) != sz:
                    continue
                c = tuple_character(reps, k)
                if c:
                    key = (k, g, tq)
                    out[key] = out.get(key, 0) + c * n
    return {k: v for k, v in out.items() if v}


def class_basis_f(f: FTable, ks: Iterable[KTuple]) -> dict[KTuple, RatFn]:
    return {k: f_class_basis(f, k) for k in ks}


def class_prefactor(k: KTuple) -> RatFn:
    """(-1)^(|k| - L) prod_j (q^(j/2) - q^(-j/2))^(sum_alpha k_j^alpha) / s^2.

    The sign comes from sum_R chi_R(k) S_R(q) = (-1)^(|k|-1) prod_j [j]_-^(k_j) / s,
    one factor per component.
    """
    num = ONE
    for v in k:
        for j, kj in enumerate(v, start=1):
            if kj:
                num = num * (q_pow(j) - q_pow(-j)) ** kj
    if (ktuple_length(k) - len(k)) % 2:
        num = -num
    return RatFn(num, S * S)


def class_polynomial(n: Mapping, k: KTuple) -> LaurentQL:
    by_g: dict[int, LaurentQL] = {}
    for (kk, g, tq), v in n.items():
        if kk == k:
            by_g[g] = by_g.get(g, ZERO) + monomial(0, tq, v)
    if not by_g:
        return ZERO
    return from_z([by_g.get(g, ZERO) for g in range(max(by_g) + 1)])


@dataclass
class ClassStructureReport:
    checked_f: list = field(default_factory=list)
    checked_w: list = field(default_factory=list)


def verify_class_structure(f: FTable, N: IntegerTable, Wc: Mapping[KTuple, RatFn] | None = None) -> ClassStructureReport:
    """Check the class-basis shape of f against the integers, and the divisor sum against W^(c).

    Raises ConjectureViolation on the first mismatch.
    """
    n = class_basis_integers(N)
    report = ClassStructureReport()
    sizes = sorted({tuple(sum(R) for R in reps) for reps in f.entries if all(reps)})
    for sz in sizes:
        for k in product(*(kvectors(x) for x in sz)):
            lhs = f_class_basis(f, k)
            rhs = class_prefactor(k) * class_polynomial(n, k)
            if lhs != rhs:
                raise ConjectureViolation(k, "class-structure", lhs - rhs, "f_k differs from the integer resummation")
            report.checked_f.append(k)
            if Wc is not None and k in Wc:
                pred = master_rhs(f, k)
                if pred != Wc[k]:
                    raise ConjectureViolation(k, "divisor-sum", Wc[k] - pred, "connected invariant mismatch")
                report.checked_w.append(k)
    return report
