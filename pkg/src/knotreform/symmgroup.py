"""Partitions, class vectors and symmetric-group characters.

Partitions are plain tuples of weakly decreasing positive ints; ``()`` is the
trivial representation.  A class vector ``k = (k_1, k_2, ...)`` counts
``k_j`` cycles of length ``j`` and is stored as a tuple with trailing zeros
stripped, so the zero vector is ``()``.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence

from . import _cache
from .errors import NotDivisible, SizeMismatch
from .ring import ZERO, LaurentQL, monomial

Partition = tuple
KVector = tuple


# -- partitions -----------------------------------------------------------

def as_partition(rows: Iterable[int]) -> Partition:
    p = tuple(int(r) for r in rows)
    if any(r <= 0 for r in p) or any(a < b for a, b in zip(p, p[1:])):
        raise ValueError(f"not a partition: {p}")
    return p


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n in reverse-lexicographic order ((n) first)."""
    if n == 0:
        return ((),)
    out = []

    def rec(remaining, max_part, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, max_part), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


def conjugate(p: Partition) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for r in p if r > i) for i in range(p[0]))


def cells(p: Partition) -> Iterator[tuple[int, int]]:
    for i, r in enumerate(p):
        for j in range(r):
            yield i, j


def contents(p: Partition) -> list[int]:
    return [j - i for i, j in cells(p)]


def hook_lengths(p: Partition) -> list[int]:
    conj = conjugate(p)
    return [(p[i] - j) + (conj[j] - i) - 1 for i, j in cells(p)]


def dimension(p: Partition) -> int:
    """Number of standard Young tableaux (hook length formula)."""
    n = sum(p)
    return factorial(n) // prod(hook_lengths(p), start=1)


def is_hook(p: Partition) -> bool:
    return len(p) <= 1 or all(r == 1 for r in p[1:])


# -- class vectors --------------------------------------------------------

def kvec(*entries: int) -> KVector:
    k = list(entries)
    while k and k[-1] == 0:
        k.pop()
    if any(x < 0 for x in k):
        raise ValueError("class vector entries must be non-negative")
    return tuple(k)


def kvec_size(k: KVector) -> int:
    """ell = sum_j j k_j."""
    return sum((j + 1) * kj for j, kj in enumerate(k))


def kvec_length(k: KVector) -> int:
    """|k| = sum_j k_j, the number of cycles."""
    return sum(k)


def kvec_from_cycle_type(cycle_type: Iterable[int]) -> KVector:
    cycle_type = list(cycle_type)
    if not cycle_type:
        return ()
    k = [0] * max(cycle_type)
    for c in cycle_type:
        k[c - 1] += 1
    return tuple(k)


def cycle_type(k: KVector) -> Partition:
    return tuple(j + 1 for j in reversed(range(len(k))) for _ in range(k[j]))


@lru_cache(maxsize=None)
def kvectors(n: int) -> tuple[KVector, ...]:
    """Class vectors of S_n, ordered by their cycle type in reverse-lex order."""
    return tuple(kvec_from_cycle_type(p) for p in partitions(n))


def kvec_add(a: KVector, b: KVector) -> KVector:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def class_size(k: KVector) -> int:
    """|C(k)| = ell! / (prod_j k_j! j^k_j)."""
    n = kvec_size(k)
    denom = 1
    for j, kj in enumerate(k, start=1):
        denom *= factorial(kj) * j**kj
    return factorial(n) // denom


def class_weight(k: KVector) -> Fraction:
    """|C(k)| / ell!, i.e. 1 / z_k."""
    return Fraction(class_size(k), factorial(kvec_size(k)))


def divides(d: int, k: KVector) -> bool:
    return all(kj == 0 or (j % d == 0) for j, kj in enumerate(k, start=1))


def kvec_divide(k: KVector, d: int) -> KVector:
    """k_{1/d}: (k_{1/d})_i = k_{d i}; requires every nonzero k_j to have d | j."""
    if d < 1:
        raise ValueError("d must be positive")
    if not divides(d, k):
        raise NotDivisible(f"{d} does not divide class vector {k}")
    return kvec(*(k[i - 1] for i in range(d, len(k) + 1, d)))


def kvec_stretch(k: KVector, d: int) -> KVector:
    """k_d: entry k_i moved to position d i."""
    if d < 1:
        raise ValueError("d must be positive")
    out = [0] * (len(k) * d)
    for i, ki in enumerate(k, start=1):
        out[d * i - 1] = ki
    return kvec(*out)


# -- characters -----------------------------------------------------------

_char_lock = threading.Lock()
_char_memo = _cache.PersistentMemo("characters")


def _beta_set(p: Partition, n: int) -> tuple[int, ...]:
    # first-column hook lengths with n beads
    return tuple(sorted((p[i] if i < len(p) else 0) + (n - 1 - i) for i in range(n)))


def _mn(p: Partition, cycles: tuple[int, ...]) -> int:
    """Murnaghan-Nakayama recursion, removing the longest cycle first."""
    if not cycles:
        return 1 if not p else 0
    key = (p, cycles)
    v = _char_memo.get(key)
    if v is not None:
        return v
    r = cycles[0]
    rest = cycles[1:]
    n = len(p)
    beads = _beta_set(p, n)
    bead_set = set(beads)
    total = 0
    for b in beads:
        t = b - r
        if t < 0 or t in bead_set:
            continue
        # removing a rim hook of length r <-> sliding bead b down to b - r;
        # its height is the number of beads strictly in between
        height = sum(1 for x in beads if t < x < b)
        new_beads = sorted((bead_set - {b}) | {t}, reverse=True)
        new_p = tuple(x - (n - 1 - i) for i, x in enumerate(new_beads))
        new_p = tuple(x for x in new_p if x > 0)
        total += (-1) ** height * _mn(new_p, rest)
    with _char_lock:
        _char_memo[key] = total
    return total


def character(R: Partition, k: KVector) -> int:
    """chi_R evaluated on the conjugacy class C(k)."""
    R = tuple(R)
    if sum(R) != kvec_size(k):
        raise SizeMismatch(f"partition {R} has size {sum(R)} but class {k} has size {kvec_size(k)}")
    return _mn(R, cycle_type(k))


def tuple_character(reps: Sequence[Partition], ks: Sequence[KVector]) -> int:
    """prod_alpha chi_{R_alpha}(C(k^(alpha)))."""
    v = 1
    for R, k in zip(reps, ks):
        v *= character(R, k)
        if not v:
            return 0
    return v


@lru_cache(maxsize=None)
def cg_coefficient(R1: Partition, R2: Partition, R3: Partition) -> int:
    """C_{R R' R''} = sum_k |C(k)|/ell! chi_R chi_R' chi_R''."""
    n = sum(R1)
    if sum(R2) != n or sum(R3) != n:
        raise SizeMismatch("Clebsch-Gordan coefficient needs three partitions of equal size")
    total = Fraction(0)
    for k in kvectors(n):
        total += class_weight(k) * character(R1, k) * character(R2, k) * character(R3, k)
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral Clebsch-Gordan coefficient {total}")
    return int(total)


def hook_monomial(R: Partition) -> LaurentQL:
    """S_R(q) = (-1)^d q^(-(ell-1)/2 + d) for the hook (ell-d, 1^d), zero otherwise."""
    R = tuple(R)
    if not R:
        return monomial(0, 0)
    if not is_hook(R):
        return ZERO
    ell = sum(R)
    d = ell - R[0]
    # doubled exponent of q
    return monomial(-(ell - 1) + 2 * d, 0, (-1) ** d)


def moebius(d: int) -> int:
    if d < 1:
        raise ValueError("Moebius function needs d >= 1")
    sign = 1
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            sign = -sign
        p += 1
    if d > 1:
        sign = -sign
    return sign


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- Frobenius change of basis --------------------------------------------

def rep_to_class(a: Mapping[Partition, object], n: int | None = None) -> dict[KVector, object]:
    """c(k) = sum_R chi_R(k) a(R) |C(k)|/ell!  (missing R count as zero)."""
    if n is None:
        sizes = {sum(R) for R in a}
        if len(sizes) != 1:
            raise SizeMismatch("representations of different sizes")
        n = sizes.pop()
    for R in a:
        if sum(R) != n:
            raise SizeMismatch(f"partition {R} is not of size {n}")
    out = {}
    for k in kvectors(n):
        w = class_weight(k)
        acc = 0
        for R, v in a.items():
            c = character(R, k)
            if c:
                acc = acc + v * (c * w)
        out[k] = acc
    return out


def class_to_rep(c: Mapping[KVector, object], n: int | None = None) -> dict[Partition, object]:
    """Inverse of :func:`rep_to_class`: a(R) = sum_k chi_R(k) c(k)."""
    if n is None:
        sizes = {kvec_size(k) for k in c}
        if len(sizes) != 1:
            raise SizeMismatch("class vectors of different sizes")
        n = sizes.pop()
    for k in c:
        if kvec_size(k) != n:
            raise SizeMismatch(f"class vector {k} is not of size {n}")
    out = {}
    for R in partitions(n):
        acc = 0
        for k, v in c.items():
            ch = character(R, k)
            if ch:
                acc = acc + v * ch
        out[R] = acc
    return out


def rep_tuples(sizes: Sequence[int]) -> list[tuple[Partition, ...]]:
    return list(product(*(partitions(n) for n in sizes)))


def class_tuples(sizes: Sequence[int]) -> list[tuple[KVector, ...]]:
    return list(product(*(kvectors(n) for n in sizes)))
