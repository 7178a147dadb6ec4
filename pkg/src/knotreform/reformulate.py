"""Generating functional, free energy and the reformulated invariants f_R.

A :class:`FormalSeries` is a truncated element of the tensor product of L
rings of symmetric functions, written in the power-sum basis
``Upsilon_k = prod_j p_j^{k_j}``.  Keys are KTuples: one class vector per
component.  Every series carries its truncation context ``(L, lmax)`` and
refuses to combine with a series from a different context.

Two independent routes lead from W to f:

* :func:`f_from_master` peels the divisor sum of the master relation off the
  connected invariants, size by size, and then undoes the character
  transform;
* :func:`f_explicit` evaluates the closed Moebius / logarithm double sum
  directly from the W table, enumerating ordered sequences of class tuples.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import prod
from typing import Callable, Iterable, Iterator, Mapping

from .errors import BadConstantTerm, IncompleteTable, TruncationMismatch
from .ring import ONE, ZERO, RatFn, as_ratfn
from .symmgroup import (
    class_weight,
    character,
    divides,
    divisors,
    kvec_add,
    kvec_divide,
    kvec_length,
    kvec_size,
    kvec_stretch,
    kvectors,
    moebius,
    partitions,
)

DEFAULT_LMAX = 3

KTuple = tuple
RepTuple = tuple


# -- index helpers -----------------------------------------------------------


def zero_ktuple(L: int) -> KTuple:
    return ((),) * L


def ktuple_sizes(k: KTuple) -> tuple[int, ...]:
    return tuple(kvec_size(v) for v in k)


def ktuple_length(k: KTuple) -> int:
    """Total number of cycles, sum_alpha |k^(alpha)| (the number of holes)."""
    return sum(kvec_length(v) for v in k)


def ktuple_weight(k: KTuple) -> Fraction:
    """prod_alpha |C(k^(alpha))| / ell_alpha!"""
    return prod((class_weight(v) for v in k), start=Fraction(1))


def ktuple_divides(d: int, k: KTuple) -> bool:
    return all(divides(d, v) for v in k)


def ktuple_divide(k: KTuple, d: int) -> KTuple:
    return tuple(kvec_divide(v, d) for v in k)


def ktuple_stretch(k: KTuple, d: int) -> KTuple:
    return tuple(kvec_stretch(v, d) for v in k)


def tuple_character(reps: RepTuple, k: KTuple) -> int:
    v = 1
    for R, kv in zip(reps, k):
        v *= character(R, kv)
        if not v:
            break
    return v


def size_vectors(L: int, lmax: int) -> list[tuple[int, ...]]:
    """All (ell_1..ell_L) in [0, lmax]^L except zero, ordered by total then lexicographically."""
    out = [s for s in product(range(lmax + 1), repeat=L) if any(s)]
    return sorted(out, key=lambda s: (sum(s), s))


def ktuples_of_sizes(sizes: Iterable[int]) -> list[KTuple]:
    return list(product(*(kvectors(n) for n in sizes)))


def reptuples_of_sizes(sizes: Iterable[int]) -> list[RepTuple]:
    return list(product(*(partitions(n) for n in sizes)))


def all_ktuples(L: int, lmax: int) -> list[KTuple]:
    return [k for s in size_vectors(L, lmax) for k in ktuples_of_sizes(s)]


def all_reptuples(L: int, lmax: int) -> list[RepTuple]:
    return [r for s in size_vectors(L, lmax) for r in reptuples_of_sizes(s)]


# -- formal series -------------------------------------------------------------


class FormalSeries:
    """Truncated series sum_K c_K prod_alpha Upsilon_{K^alpha}(V_alpha)."""

    __slots__ = ("L", "lmax", "coeffs")

    def __init__(self, L: int, lmax: int, coeffs: Mapping[KTuple, object] | None = None):
        self.L = L
        self.lmax = lmax
        self.coeffs: dict[KTuple, RatFn] = {}
        for k, v in (coeffs or {}).items():
            k = tuple(tuple(x) for x in k)
            if len(k) != L:
                raise ValueError(f"key {k} does not have {L} slots")
            if any(kvec_size(x) > lmax for x in k):
                continue
            v = as_ratfn(v)
            if v:
                self.coeffs[k] = v

    @classmethod
    def one(cls, L, lmax):
        return cls(L, lmax, {zero_ktuple(L): ONE})

    def _check(self, other: FormalSeries):
        if not isinstance(other, FormalSeries):
            raise TypeError("expected a FormalSeries")
        if (self.L, self.lmax) != (other.L, other.lmax):
            raise TruncationMismatch(
                f"series contexts differ: (L={self.L}, lmax={self.lmax}) vs (L={other.L}, lmax={other.lmax})"
            )

    def __getitem__(self, k: KTuple) -> RatFn:
        return self.coeffs.get(tuple(tuple(x) for x in k), as_ratfn(ZERO))

    def constant_term(self) -> RatFn:
        return self[zero_ktuple(self.L)]

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return FormalSeries(self.L, self.lmax, out)

    def __neg__(self):
        return FormalSeries(self.L, self.lmax, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> FormalSeries:
        return FormalSeries(self.L, self.lmax, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        lmax = self.lmax
        for k1, v1 in self.coeffs.items():
            s1 = ktuple_sizes(k1)
            for k2, v2 in other.coeffs.items():
                if any(a + b > lmax for a, b in zip(s1, ktuple_sizes(k2))):
                    continue
                k = tuple(kvec_add(a, b) for a, b in zip(k1, k2))
                p = v1 * v2
                out[k] = out[k] + p if k in out else p
        return FormalSeries(self.L, lmax, out)

    __rmul__ = __mul__

    def adams(self, d: int) -> FormalSeries:
        """psi_d: coefficients get q -> q^d, l -> l^d and Upsilon_k(V) -> Upsilon_k(V^d)."""
        out = {}
        for k, v in self.coeffs.items():
            if any(kvec_size(x) * d > self.lmax for x in k):
                continue
            out[ktuple_stretch(k, d)] = v.adams(d)
        return FormalSeries(self.L, self.lmax, out)

    def _max_order(self) -> int:
        return self.L * self.lmax

    def log(self) -> FormalSeries:
        """log(1 + A), exact within the truncation."""
        if self.constant_term() != ONE:
            raise BadConstantTerm("log needs constant term 1")
        A = self - FormalSeries.one(self.L, self.lmax)
        result = FormalSeries(self.L, self.lmax)
        power = FormalSeries.one(self.L, self.lmax)
        for m in range(1, self._max_order() + 1):
            power = power * A
            if not power.coeffs:
                break
            result = result + power.scale(Fraction((-1) ** (m - 1), m))
        return result

    def exp(self) -> FormalSeries:
        if self.constant_term():
            raise BadConstantTerm("exp needs zero constant term")
        result = FormalSeries.one(self.L, self.lmax)
        term = FormalSeries.one(self.L, self.lmax)
        for m in range(1, self._max_order() + 1):
            term = (term * self).scale(Fraction(1, m))
            if not term.coeffs:
                break
            result = result + term
        return result

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (self.L, self.lmax) == (other.L, other.lmax) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"FormalSeries(L={self.L}, lmax={self.lmax}, {len(self.coeffs)} terms)"


def plethystic_exp(F: FormalSeries) -> FormalSeries:
    """Exp(F) = exp(sum_d psi_d(F) / d)."""
    if F.constant_term():
        raise BadConstantTerm("plethystic exponential needs zero constant term")
    acc = FormalSeries(F.L, F.lmax)
    for d in range(1, F.lmax + 1):
        acc = acc + F.adams(d).scale(Fraction(1, d))
    return acc.exp()


def plethystic_log(Z: FormalSeries) -> FormalSeries:
    """Log(Z) = sum_d mu(d)/d log(psi_d Z)."""
    if Z.constant_term() != ONE:
        raise BadConstantTerm("plethystic logarithm needs constant term 1")
    acc = FormalSeries(Z.L, Z.lmax)
    for d in range(1, Z.lmax + 1):
        mu = moebius(d)
        if mu:
            acc = acc + Z.adams(d).log().scale(Fraction(mu, d))
    return acc


# -- W tables to series ---------------------------------------------------------


def class_basis(W, lmax: int | None = None) -> dict[KTuple, RatFn]:
    """W_k = sum_R prod_alpha chi_{R_alpha}(C(k^alpha)) W_R for every nonzero KTuple."""
    L = W.L
    if lmax is None:
        lmax = W.lmax()
    out = {}
    for sizes in size_vectors(L, lmax):
        reps = reptuples_of_sizes(sizes)
        vals = {R: W[R] for R in reps}
        for k in ktuples_of_sizes(sizes):
            acc = as_ratfn(ZERO)
            for R, v in vals.items():
                c = tuple_character(R, k)
                if c:
                    acc = acc + v * c
            out[k] = acc
    return out


def build_Z(W, lmax: int | None = None) -> FormalSeries:
    if lmax is None:
        lmax = W.lmax()
    coeffs = {zero_ktuple(W.L): ONE}
    for k, v in class_basis(W, lmax).items():
        coeffs[k] = v * ktuple_weight(k)
    return FormalSeries(W.L, lmax, coeffs)


def free_energy(Z: FormalSeries) -> FormalSeries:
    return Z.log()


def connected_invariants(F: FormalSeries) -> dict[KTuple, RatFn]:
    """W^(c)_k: free-energy coefficients with the class weights divided out."""
    return {k: F[k] / ktuple_weight(k) for k in all_ktuples(F.L, F.lmax)}


def connected_from_table(W, lmax: int | None = None) -> dict[KTuple, RatFn]:
    Z = build_Z(W, lmax)
    return connected_invariants(free_energy(Z))


# -- f tables --------------------------------------------------------------------


class FTable:
    """Reformulated invariants f_(R1..RL); missing keys are zero."""

    def __init__(self, L: int, entries: Mapping[RepTuple, object] | None = None):
        self.L = L
        self.entries: dict[RepTuple, RatFn] = {}
        for k, v in (entries or {}).items():
            k = tuple(tuple(R) for R in k)
            if all(not R for R in k):
                raise ValueError("the all-trivial rep tuple has no f")
            self.entries[k] = as_ratfn(v)

    def __getitem__(self, reps) -> RatFn:
        return self.entries.get(tuple(tuple(R) for R in reps), as_ratfn(ZERO))

    def __iter__(self):
        return iter(self.entries)

    def items(self):
        return self.entries.items()

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, FTable) or self.L != other.L:
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self[k] == other[k] for k in keys)

    def nonzero(self) -> dict[RepTuple, RatFn]:
        return {k: v for k, v in self.entries.items() if v}

    def __repr__(self):
        return f"FTable(L={self.L}, {len(self.entries)} entries)"


def f_class_basis(f: FTable, k: KTuple) -> RatFn:
    """f_k = sum_R prod chi_{R_alpha}(C(k^alpha)) f_R."""
    acc = as_ratfn(ZERO)
    for R in reptuples_of_sizes(ktuple_sizes(k)):
        if all(not x for x in R):
            continue
        c = tuple_character(R, k)
        if c:
            v = f[R]
            if v:
                acc = acc + v * c
    return acc


def _class_to_reps(values: Mapping[KTuple, RatFn], sizes) -> dict[RepTuple, RatFn]:
    # character orthogonality on the product of symmetric groups
    out = {}
    for R in reptuples_of_sizes(sizes):
        acc = as_ratfn(ZERO)
        for k, v in values.items():
            c = tuple_character(R, k)
            if c and v:
                acc = acc + v * (ktuple_weight(k) * c)
        out[R] = acc
    return out


def f_from_master(Wc: Mapping[KTuple, RatFn], L: int, lmax: int) -> FTable:
    """Solve the master relation for f, smallest total size first."""
    f = FTable(L)
    for sizes in size_vectors(L, lmax):
        residual = {}
        for k in ktuples_of_sizes(sizes):
            try:
                value = Wc[k]
            except KeyError:
                raise IncompleteTable(f"connected invariant for class tuple {k} is missing") from None
            h = ktuple_length(k)
            for d in divisors(max(sizes))[1:]:
                if ktuple_divides(d, k):
                    inner = f_class_basis(f, ktuple_divide(k, d))
                    if inner:
                        value = value - inner.adams(d) * d ** (h - 1)
            residual[k] = value
        for R, v in _class_to_reps(residual, sizes).items():
            f.entries[R] = v
    return f


def master_rhs(f: FTable, k: KTuple) -> RatFn:
    """sum_{d | k} d^(|k| - 1) psi_d(f_{k/d}): the connected invariant predicted by f."""
    h = ktuple_length(k)
    acc = as_ratfn(ZERO)
    for d in divisors(max(ktuple_sizes(k))):
        if ktuple_divides(d, k):
            inner = f_class_basis(f, ktuple_divide(k, d))
            if inner:
                acc = acc + inner.adams(d) * d ** (h - 1)
    return acc


def _compositions(K: KTuple, m: int) -> Iterator[tuple[KTuple, ...]]:
    """Ordered m-tuples of nonzero class tuples summing entrywise to K."""
    if m == 1:
        if any(K):
            yield (K,)
        return
    # choose the first part as any nonzero sub-tuple leaving something nonzero
    ranges = [range(x + 1) for v in K for x in v]
    shape = [len(v) for v in K]
    for flat in product(*ranges):
        if not any(flat):
            continue
        part, rest, pos = [], [], 0
        for v, n in zip(K, shape):
            a = flat[pos : pos + n]
            part.append(_strip(a))
            rest.append(_strip(tuple(x - y for x, y in zip(v, a))))
            pos += n
        rest = tuple(rest)
        if not any(rest):
            continue
        for tail in _compositions(rest, m - 1):
            yield (tuple(part),) + tail


def _strip(v) -> tuple:
    v = list(v)
    while v and v[-1] == 0:
        v.pop()
    return tuple(v)


def f_explicit(W, lmax: int | None = None) -> FTable:
    """Closed-form inversion: Moebius sum over d, log-series sum over m, class sequences."""
    L = W.L
    if lmax is None:
        lmax = W.lmax()
    Wk = class_basis(W, lmax)

    @lru_cache(maxsize=None)
    def log_coefficient(K: KTuple) -> RatFn:
        # sum_m (-1)^(m-1)/m sum_{K_1+..+K_m = K} prod_j weight(K_j) W_{K_j}
        total = as_ratfn(ZERO)
        for m in range(1, ktuple_length(K) + 1):
            acc = as_ratfn(ZERO)
            for seq in _compositions(K, m):
                term = as_ratfn(ONE)
                for part in seq:
                    term = term * (Wk[part] * ktuple_weight(part))
                    if not term:
                        break
                acc = acc + term
            if acc:
                total = total + acc * Fraction((-1) ** (m - 1), m)
        return total

    f = FTable(L)
    for sizes in size_vectors(L, lmax):
        targets = reptuples_of_sizes(sizes)
        vals = {R: as_ratfn(ZERO) for R in targets}
        for d in divisors(max(sizes)):
            mu = moebius(d)
            if not mu or any(n % d for n in sizes):
                continue
            for K in ktuples_of_sizes([n // d for n in sizes]):
                g = log_coefficient(K)
                if not g:
                    continue
                g = g.adams(d) * Fraction(mu, d)
                Kd = ktuple_stretch(K, d)
                for R in targets:
                    c = tuple_character(R, Kd)
                    if c:
                        vals[R] = vals[R] + g * c
        f.entries.update(vals)
    return f


def f_series(f: FTable, lmax: int) -> FormalSeries:
    """sum_R f_R prod_alpha Tr_{R_alpha} V_alpha expanded in the power-sum basis."""
    coeffs = {}
    for k in all_ktuples(f.L, lmax):
        v = f_class_basis(f, k)
        if v:
            coeffs[k] = v * ktuple_weight(k)
    return FormalSeries(f.L, lmax, coeffs)


def reformulate(W, lmax: int | None = None, route: str = "master") -> FTable:
    """f table of an invariant table through the chosen inversion route."""
    if lmax is None:
        lmax = W.lmax()
    if route == "master":
        return f_from_master(connected_from_table(W, lmax), W.L, lmax)
    if route == "explicit":
        return f_explicit(W, lmax)
    raise ValueError(f"unknown route {route!r}")
