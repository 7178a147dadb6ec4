"""Braid closures, the HOMFLY polynomial and fundamental/colored invariant tables.

HOMFLY is computed in the Hecke algebra H_n: a braid word is pushed into the
basis ``T_w`` (w a permutation in one-line notation) using the quadratic
relation implied by the skein rule, and the Ocneanu-Markov trace is then
evaluated recursively on basis elements.  Trace values are kept as
polynomials in ``delta = (l^1/2 - l^-1/2)/(q^1/2 - q^-1/2)`` and only turned
into a rational function at the very end.

Skein rule: ``l^(1/2) P(L+) - l^(-1/2) P(L-) = (q^(1/2) - q^(-1/2)) P(L0)``,
unknot = 1.  With this rule the built-in trefoil and Hopf invariants are
reproduced by the words ``[1, 1, 1]`` and ``[1, 1]`` only if a positive braid
letter is read as a *negative* crossing, hence ``CROSSING_SIGN = -1``.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import _cache
from .errors import IncompleteTable, UnknownFixture
from .ring import ONE, S, ZERO, LaurentQL, RatFn, as_ratfn, l_pow, monomial
from .symmgroup import contents, hook_lengths, partitions

CROSSING_SIGN = -1

#: l^(1/2) - l^(-1/2)
U = monomial(0, 1) - monomial(0, -1)
DELTA = RatFn(U, S)


# -- braid words and presentations ------------------------------------------


@dataclass(frozen=True)
class BraidWord:
    strands: int
    word: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(x) for x in self.word))
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        for x in self.word:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"letter {x} invalid on {self.strands} strands")

    @classmethod
    def parse(cls, text: str) -> BraidWord:
        """Parse ``"<strands>:<comma separated letters>"``, e.g. ``"2:1,1,1"``."""
        head, sep, tail = text.partition(":")
        if not sep:
            raise ValueError(f"braid spec {text!r} lacks ':'")
        try:
            n = int(head)
            word = tuple(int(t) for t in tail.replace(" ", "").split(",") if t)
        except ValueError:
            raise ValueError(f"malformed braid spec {text!r}") from None
        return cls(n, word)

    def mirror(self) -> BraidWord:
        return BraidWord(self.strands, tuple(-x for x in self.word))

    def __str__(self):
        return f"{self.strands}:{','.join(map(str, self.word))}"


def disjoint_union(a: BraidWord, b: BraidWord) -> BraidWord:
    """Place ``b`` to the right of ``a``; the closure is the split union."""
    shift = a.strands
    return BraidWord(a.strands + b.strands, a.word + tuple(x + shift if x > 0 else x - shift for x in b.word))


@dataclass(frozen=True)
class LinkPresentation:
    braid: BraidWord
    components: tuple[tuple[int, ...], ...]
    writhes: tuple[int, ...]
    linking: Mapping[tuple[int, int], int] = field(hash=False, compare=False)
    total_lk: int = 0

    @property
    def L(self) -> int:
        return len(self.components)

    def lk(self, a: int, b: int) -> int:
        if a == b:
            raise ValueError("linking number needs two distinct components")
        return self.linking[(min(a, b), max(a, b))]

    @property
    def writhe(self) -> int:
        return sum(self.writhes) + 2 * self.total_lk


def _walk(braid: BraidWord):
    """Yield (letter, strand label at i, strand label at i+1) while the labels move."""
    labels = list(range(braid.strands))
    for x in braid.word:
        i = abs(x) - 1
        yield x, labels[i], labels[i + 1]
        labels[i], labels[i + 1] = labels[i + 1], labels[i]


def analyze_braid(braid: BraidWord) -> LinkPresentation:
    n = braid.strands
    # closure permutation: where the strand starting at position p ends up
    labels = list(range(n))
    for x in braid.word:
        i = abs(x) - 1
        labels[i], labels[i + 1] = labels[i + 1], labels[i]
    end_of = {lab: pos for pos, lab in enumerate(labels)}
    seen, comps = set(), []
    for start in range(n):
        if start in seen:
            continue
        cyc, p = [], start
        while p not in seen:
            seen.add(p)
            cyc.append(p)
            p = end_of[p]
        comps.append(tuple(sorted(cyc)))
    comp_of = {p: c for c, cyc in enumerate(comps) for p in cyc}
    L = len(comps)
    writhes = [0] * L
    twice_lk = {(a, b): 0 for a in range(L) for b in range(a + 1, L)}
    for x, s1, s2 in _walk(braid):
        sign = CROSSING_SIGN * (1 if x > 0 else -1)
        a, b = comp_of[s1], comp_of[s2]
        if a == b:
            writhes[a] += sign
        else:
            twice_lk[(min(a, b), max(a, b))] += sign
    linking = {k: v // 2 for k, v in twice_lk.items()}
    return LinkPresentation(braid, tuple(comps), tuple(writhes), linking, sum(linking.values()))


def sublink_braid(pres: LinkPresentation, keep: Iterable[int]) -> BraidWord:
    """Braid of the sublink formed by the components in ``keep`` (strand deletion)."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("a sublink needs at least one component")
    kept = {p for c in keep for p in pres.components[c]}
    labels = list(range(pres.braid.strands))
    word = []
    for x in pres.braid.word:
        i = abs(x) - 1
        if labels[i] in kept and labels[i + 1] in kept:
            rank = sum(1 for p in range(i) if labels[p] in kept)
            word.append((rank + 1) * (1 if x > 0 else -1))
        labels[i], labels[i + 1] = labels[i + 1], labels[i]
    return BraidWord(len(kept), _free_reduce(word))


def _free_reduce(word: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def sublink(pres: LinkPresentation, keep: Iterable[int]) -> LinkPresentation:
    """Presentation of a sublink; its components follow the order of ``keep`` sorted."""
    return analyze_braid(sublink_braid(pres, keep))


# -- Hecke algebra trace -----------------------------------------------------

# skein for a negative letter-crossing g:  g^2 = ALPHA g + BETA
if CROSSING_SIGN == -1:
    ALPHA = -(monomial(0, 1) * S)
    BETA = l_pow(2)
else:
    ALPHA = monomial(0, -1) * S
    BETA = l_pow(-2)
BETA_INV = BETA**-1

_DeltaPoly = dict  # power of delta -> LaurentQL

_trace_lock = threading.Lock()
_trace_memo = _cache.PersistentMemo("hecke-trace")


def _mul_generator(elem: dict, i: int) -> dict:
    """Right-multiply an H_n element {w: coeff} by g_i (0-based, swaps positions i, i+1)."""
    out: dict = {}

    def acc(w, c):
        v = out.get(w)
        v = c if v is None else v + c
        if v:
            out[w] = v
        else:
            out.pop(w, None)

    for w, c in elem.items():
        ws = list(w)
        ws[i], ws[i + 1] = ws[i + 1], ws[i]
        ws = tuple(ws)
        if w[i] < w[i + 1]:
            acc(ws, c)
        else:
            acc(w, c * ALPHA)
            acc(ws, c * BETA)
    return out


def _mul_inverse_generator(elem: dict, i: int) -> dict:
    # g^-1 = BETA^-1 (g - ALPHA)
    moved = _mul_generator(elem, i)
    out = {w: c * BETA_INV for w, c in moved.items()}
    for w, c in elem.items():
        v = out.get(w, ZERO) - c * ALPHA * BETA_INV
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def _add_scaled(target: dict, poly: dict, c: LaurentQL, shift: int = 0):
    for k, v in poly.items():
        kk = k + shift
        nv = target.get(kk, ZERO) + v * c
        if nv:
            target[kk] = nv
        else:
            target.pop(kk, None)


def _trace_basis(w: tuple[int, ...]) -> _DeltaPoly:
    """Markov trace of T_w on len(w) strands, as a polynomial in delta."""
    n = len(w)
    if n <= 1:
        return {0: ONE}
    cached = _trace_memo.get(w)
    if cached is not None:
        return cached
    if w[-1] == n - 1:
        res = {k + 1: v for k, v in _trace_basis(w[:-1]).items()}
    else:
        m = w.index(n - 1)
        rest = w[:m] + w[m + 1 :]
        # T_w = T_rest' g_{n-2} g_{n-3} ... g_m with rest' = rest + (n-1,);
        # Markov on g_{n-2} and cyclicity give tr_{n-1}(T_rest g_{n-3} ... g_m)
        elem = {rest: ONE}
        for j in range(n - 3, m - 1, -1):
            elem = _mul_generator(elem, j)
        res = {}
        for v, c in elem.items():
            _add_scaled(res, _trace_basis(v), c)
    with _trace_lock:
        _trace_memo[w] = res
    return res


def _delta_poly_to_ratfn(poly: _DeltaPoly) -> RatFn:
    if not poly:
        return as_ratfn(ZERO)
    top = max(poly)
    bot = min(poly)
    num = ZERO
    for k, c in poly.items():
        num = num + c * U ** (k - bot) * S ** (top - k)
    return RatFn(num * U**bot, S ** (top)) if top else as_ratfn(num * U**bot)


@lru_cache(maxsize=4096)
def _homfly_cached(strands: int, word: tuple[int, ...]) -> RatFn:
    elem = {tuple(range(strands)): ONE}
    for x in word:
        i = abs(x) - 1
        elem = _mul_generator(elem, i) if x > 0 else _mul_inverse_generator(elem, i)
    total: _DeltaPoly = {}
    for w, c in elem.items():
        _add_scaled(total, _trace_basis(w), c)
    return _delta_poly_to_ratfn(total)


def homfly(braid: BraidWord | str) -> RatFn:
    """HOMFLY polynomial P of the braid closure, normalized to 1 on the unknot."""
    if isinstance(braid, str):
        braid = BraidWord.parse(braid)
    return _homfly_cached(braid.strands, _free_reduce(braid.word))


def homfly_to_W(P, pres: LinkPresentation | int) -> RatFn:
    """W = l^lk * dim_q(box) * P for all components in the fundamental representation."""
    lk = pres if isinstance(pres, int) else pres.total_lk
    return as_ratfn(P) * DELTA * l_pow(2 * lk)


def W_to_homfly(W, pres: LinkPresentation | int) -> RatFn:
    lk = pres if isinstance(pres, int) else pres.total_lk
    return as_ratfn(W) * l_pow(-2 * lk) / DELTA


# -- quantum dimensions ------------------------------------------------------


@lru_cache(maxsize=None)
def quantum_dimension(R: tuple) -> RatFn:
    """dim_q(R) as a product over cells of [content]-shifted l-factors over q-hook numbers."""
    R = tuple(R)
    num, den = ONE, ONE
    for c, h in zip(contents(R), hook_lengths(R)):
        num = num * (monomial(c, 1) - monomial(-c, -1))
        den = den * (monomial(h, 0) - monomial(-h, 0))
    return RatFn(num, den)


# -- invariant tables ----------------------------------------------------------


class InvariantTable:
    """Colored invariants W_(R1..RL) keyed by rep tuples; ``()`` marks a trivial slot."""

    def __init__(self, L: int, entries: Mapping[tuple, object] | None = None):
        self.L = L
        self.entries: dict[tuple, RatFn] = {}
        for key, v in (entries or {}).items():
            key = tuple(tuple(R) for R in key)
            if len(key) != L:
                raise ValueError(f"rep tuple {key} does not have {L} slots")
            if all(not R for R in key):
                continue
            self.entries[key] = as_ratfn(v)

    def __getitem__(self, reps) -> RatFn:
        reps = tuple(tuple(R) for R in reps)
        if all(not R for R in reps):
            return as_ratfn(ONE)
        try:
            return self.entries[reps]
        except KeyError:
            raise IncompleteTable(f"no invariant for rep tuple {reps}") from None

    def __contains__(self, reps):
        reps = tuple(tuple(R) for R in reps)
        return all(not R for R in reps) or reps in self.entries

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, InvariantTable) and self.L == other.L and self.entries == other.entries

    def lmax(self) -> int:
        """Largest box cap for which the full rectangle of rep tuples is present."""
        cap = 0
        while True:
            nxt = cap + 1
            sizes = [partitions(k) for k in range(nxt + 1)]
            from itertools import product

            for combo in product(*([sum(sizes, ())] * self.L)):
                if any(sum(R) > nxt for R in combo):
                    continue
                if combo not in self:
                    return cap
            cap = nxt

    def restrict(self, lmax: int) -> InvariantTable:
        return InvariantTable(self.L, {k: v for k, v in self.entries.items() if all(sum(R) <= lmax for R in k)})

    def __repr__(self):
        return f"InvariantTable(L={self.L}, {len(self.entries)} entries)"


def fundamental_table(pres: LinkPresentation) -> InvariantTable:
    """All-fundamental invariants of the link and of every sublink (trivial slots)."""
    L = pres.L
    entries = {}
    for size in range(1, L + 1):
        for keep in combinations(range(L), size):
            sub = sublink(pres, keep) if size < L else pres
            W = homfly_to_W(homfly(sub.braid), sub)
            entries[tuple((1,) if a in keep else () for a in range(L))] = W
    return InvariantTable(L, entries)


def unknot_table(lmax: int) -> InvariantTable:
    return InvariantTable(1, {(R,): quantum_dimension(R) for n in range(1, lmax + 1) for R in partitions(n)})


def unlink_table(L: int, lmax: int) -> InvariantTable:
    from itertools import product

    reps = [R for n in range(lmax + 1) for R in partitions(n)]
    entries = {}
    for combo in product(reps, repeat=L):
        v = as_ratfn(ONE)
        for R in combo:
            if R:
                v = v * quantum_dimension(R)
        entries[combo] = v
    return InvariantTable(L, entries)


FIXTURE_NAMES = ("unknot", "trefoil", "hopf")


def fixture_document(name: str) -> dict:
    if name not in FIXTURE_NAMES:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    text = resources.files("knotreform.fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _fixture(name: str, lmax: int):
    from .textio import link_from_dict

    lf = link_from_dict(fixture_document(name))
    if name == "unknot":
        return lf.presentation, unknot_table(lmax)
    return lf.presentation, lf.table


def fixture_table(name: str, lmax: int = 3) -> InvariantTable:
    """Built-in colored invariants; the unknot table is generated up to ``lmax`` boxes."""
    return _fixture(name, lmax)[1]


def fixture_presentation(name: str) -> LinkPresentation:
    return _fixture(name, 1)[0]
