"""Text formats: the expression grammar, link files and result tables.

Grammar (``l`` stands for lambda)::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | '+' unary | power
    power    := atom ('^' exponent)?
    exponent := ['-'] INT | '(' signed-rational ')'    (right-assoc '^' allowed)
    atom     := INT | 'q' | 'l' | '(' expr ')'

Exponents must be integers or halves; half exponents are only accepted on
monomials whose doubled exponents stay integral.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ParseError, SchemaError
from .ring import ONE, LaurentQL, RatFn, as_ratfn, monomial

# -- printing -------------------------------------------------------------


def _format_exp(var: str, doubled: int) -> str:
    if doubled == 2:
        return var
    if doubled % 2 == 0:
        e = doubled // 2
        return f"{var}^{e}" if e > 0 else f"{var}^({e})"
    return f"{var}^({doubled}/2)"


def _format_term(eq: int, el: int, c: Fraction) -> tuple[str, str]:
    factors = []
    if el:
        factors.append(_format_exp("l", el))
    if eq:
        factors.append(_format_exp("q", eq))
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not factors:
        return sign, str(a)
    body = "*".join(factors)
    if a == 1:
        return sign, body
    return sign, f"{a}*{body}"


def format_laurent(p: LaurentQL) -> str:
    """Deterministic text form: terms sorted by descending l- then q-exponent."""
    if not p:
        return "0"
    out = []
    for (eq, el), c in sorted(p.items(), key=lambda kv: (-kv[0][1], -kv[0][0])):
        sign, body = _format_term(eq, el, c)
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_expr(v) -> str:
    v = as_ratfn(v)
    num = format_laurent(v.num)
    if v.den == ONE:
        return num
    return f"({num})/({format_laurent(v.den)})"


# -- parsing --------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    # lexical helpers
    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _fail(self, msg, expected):
        raise ParseError(msg, self._byte_offset(), expected)

    def _byte_offset(self) -> int:
        return len(self.text[: self.pos].encode("utf-8"))

    def _expect(self, ch: str):
        if self._peek() != ch:
            found = self._peek() or "end of input"
            self._fail(f"unexpected {found!r}", {ch})
        self.pos += 1

    def _integer(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self._fail("expected an integer", {"INT"})
        return int(self.text[start : self.pos])

    # grammar
    def parse(self) -> RatFn:
        if not self._peek():
            self._fail("empty expression", {"INT", "q", "l", "(", "-"})
        v = self.expr()
        if self._peek():
            self._fail(f"unexpected {self._peek()!r}", {"+", "-", "*", "/", "^", "end of input"})
        return v

    def expr(self) -> RatFn:
        v = self.term()
        while self._peek() in ("+", "-") and self._peek():
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> RatFn:
        v = self.unary()
        while self._peek() in ("*", "/") and self._peek():
            op = self.text[self.pos]
            self.pos += 1
            at = self.pos
            rhs = self.unary()
            if op == "*":
                v = v * rhs
            else:
                if rhs.is_zero():
                    self.pos = at
                    self._fail("division by zero", {"nonzero divisor"})
                v = v / rhs
        return v

    def unary(self) -> RatFn:
        c = self._peek()
        if c == "-":
            self.pos += 1
            return -self.unary()
        if c == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> RatFn:
        base = self.atom()
        if self._peek() != "^":
            return base
        self.pos += 1
        at = self.pos
        e = self.exponent()
        return self._raise(base, e, at)

    def exponent(self) -> Fraction:
        c = self._peek()
        if c == "(":
            self.pos += 1
            neg = False
            if self._peek() == "-":
                neg = True
                self.pos += 1
            num = self._integer()
            den = 1
            if self._peek() == "/":
                self.pos += 1
                den = self._integer()
                if den == 0:
                    self._fail("zero denominator in exponent", {"INT"})
            self._expect(")")
            e = Fraction(-num if neg else num, den)
        elif c == "-":
            self.pos += 1
            e = -Fraction(self._integer())
        elif c.isdigit():
            e = Fraction(self._integer())
        else:
            self._fail("expected an exponent", {"INT", "(", "-"})
        if self._peek() == "^":
            # right associative: a^b^c = a^(b^c)
            self.pos += 1
            inner = self.exponent()
            if inner.denominator != 1:
                self._fail("non-integer exponent of an exponent", {"INT"})
            e = e ** int(inner)
        return e

    def _raise(self, base: RatFn, e: Fraction, at: int) -> RatFn:
        if e.denominator == 1:
            n = int(e)
            if n < 0 and base.is_zero():
                self.pos = at
                self._fail("negative power of zero", {"nonnegative exponent"})
            return base**n
        if e.denominator != 2 or base.den != ONE or not base.num.is_monomial():
            self.pos = at
            self._fail("only monomials admit half-integer exponents", {"INT"})
        ((a, b), c), = base.num.items()
        if c != 1 or (a * e.numerator) % 2 or (b * e.numerator) % 2:
            self.pos = at
            self._fail("half-integer power does not give a monomial", {"INT"})
        return as_ratfn(monomial(a * e.numerator // 2, b * e.numerator // 2))

    def atom(self) -> RatFn:
        c = self._peek()
        if c == "(":
            self.pos += 1
            v = self.expr()
            self._expect(")")
            return v
        if c == "q":
            self.pos += 1
            return as_ratfn(monomial(2, 0))
        if c == "l":
            self.pos += 1
            return as_ratfn(monomial(0, 2))
        if c.isdigit():
            return as_ratfn(self._integer())
        found = c or "end of input"
        self._fail(f"unexpected {found!r}", {"INT", "q", "l", "(", "-"})


def parse_expr(text: str) -> RatFn:
    """Parse an expression in q and l into an exact rational function."""
    return _Parser(text).parse()


# -- streams --------------------------------------------------------------


@contextmanager
def open_text(path, mode="r"):
    """Open ``path`` for text I/O; ``-`` means stdin/stdout."""
    if str(path) == "-":
        stream = sys.stdin if "r" in mode else sys.stdout
        yield stream
        if "r" not in mode:
            stream.flush()
        return
    with open(path, mode, encoding="utf-8", newline="" if "w" in mode else None) as fh:
        yield fh


# -- link files -----------------------------------------------------------


@dataclass
class LinkFile:
    name: str
    presentation: object  # links.LinkPresentation
    table: object | None  # links.InvariantTable or None


def _partition_from_json(obj, where: str) -> tuple:
    if not isinstance(obj, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        raise SchemaError(f"{where}: a partition must be a list of integers")
    if any(x <= 0 for x in obj) or any(a < b for a, b in zip(obj, obj[1:])):
        raise SchemaError(f"{where}: {obj} is not a weakly decreasing list of positive integers")
    return tuple(obj)


def link_from_dict(doc: Mapping) -> LinkFile:
    from .links import BraidWord, InvariantTable, analyze_braid

    if not isinstance(doc, Mapping):
        raise SchemaError("link file must contain a JSON object")
    braid = doc.get("braid")
    if not isinstance(braid, Mapping) or "strands" not in braid or "word" not in braid:
        raise SchemaError("missing 'braid' object with 'strands' and 'word'")
    strands, word = braid["strands"], braid["word"]
    if not isinstance(strands, int) or isinstance(strands, bool) or strands < 1:
        raise SchemaError("'strands' must be a positive integer")
    if not isinstance(word, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in word):
        raise SchemaError("'word' must be a list of integers")
    try:
        bw = BraidWord(strands, tuple(word))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    pres = analyze_braid(bw)
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("'name' must be a string")
    inv = doc.get("invariants")
    table = None
    if inv:
        if not isinstance(inv, list):
            raise SchemaError("'invariants' must be a list")
        entries = {}
        for i, item in enumerate(inv):
            where = f"invariants[{i}]"
            if not isinstance(item, Mapping) or "reps" not in item or "value" not in item:
                raise SchemaError(f"{where}: needs 'reps' and 'value'")
            reps = item["reps"]
            if not isinstance(reps, list) or len(reps) != pres.L:
                raise SchemaError(f"{where}: 'reps' must list one partition per component ({pres.L})")
            key = tuple(_partition_from_json(r, where) for r in reps)
            if not isinstance(item["value"], str):
                raise SchemaError(f"{where}: 'value' must be an expression string")
            entries[key] = parse_expr(item["value"])
        table = InvariantTable(pres.L, entries)
    return LinkFile(name, pres, table)


def link_to_dict(name: str, presentation, table=None) -> dict:
    doc = {
        "name": name,
        "braid": {"strands": presentation.braid.strands, "word": list(presentation.braid.word)},
    }
    if table is not None:
        doc["invariants"] = [
            {"reps": [list(R) for R in key], "value": format_expr(v)}
            for key, v in sorted(table.entries.items(), key=lambda kv: rep_sort_key(kv[0]))
        ]
    return doc


def load_link_file(path) -> LinkFile:
    with open_text(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    return link_from_dict(doc)


def save_link_file(path, name, presentation, table=None):
    with open_text(path, "w") as fh:
        json.dump(link_to_dict(name, presentation, table), fh, indent=2)
        fh.write("\n")


# -- integer tables -------------------------------------------------------


def rep_sort_key(reps) -> tuple:
    """Reverse-lex order on rep tuples: larger first rows come first."""
    return tuple(tuple(-x for x in R) + (1,) for R in reps)


def _rows(table) -> list[tuple]:
    return sorted(
        ((reps, g, twoQ, n) for (reps, g, twoQ), n in table.entries.items() if n),
        key=lambda r: (rep_sort_key(r[0]), r[1], r[2]),
    )


def _reps_text(reps) -> str:
    return json.dumps([list(R) for R in reps], separators=(",", ":"))


def integer_table_to_dict(table) -> dict:
    return {
        "kind": "integer-table",
        "L": table.L,
        "rows": [
            {"reps": [list(R) for R in reps], "g": g, "twoQ": twoQ, "N": n}
            for reps, g, twoQ, n in _rows(table)
        ],
    }


CSV_HEADER = ("reps", "g", "twoQ", "N")


def write_integer_table(table, fh, fmt: str = "json"):
    if fmt == "json":
        json.dump(integer_table_to_dict(table), fh, indent=2)
        fh.write("\n")
    elif fmt == "csv":
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(CSV_HEADER)
        for reps, g, twoQ, n in _rows(table):
            w.writerow((_reps_text(reps), g, twoQ, n))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def save_results(table, path, fmt: str = "json"):
    with open_text(path, "w") as fh:
        write_integer_table(table, fh, fmt)


def _reps_from(obj, where) -> tuple:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError:
            raise SchemaError(f"{where}: bad reps field {obj!r}") from None
    if not isinstance(obj, list):
        raise SchemaError(f"{where}: reps must be a list of partitions")
    return tuple(_partition_from_json(r, where) for r in obj)


def _int_field(v, where, name) -> int:
    try:
        if isinstance(v, bool):
            raise ValueError
        return int(v)
    except (TypeError, ValueError):
        raise SchemaError(f"{where}: field {name!r} must be an integer") from None


def read_integer_table(fh, fmt: str = "json"):
    from .extract import IntegerTable

    entries = {}
    L = None
    if fmt == "json":
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, Mapping) or "rows" not in doc:
            raise SchemaError("integer table needs a 'rows' list")
        L = doc.get("L")
        rows = [(r.get("reps"), r.get("g"), r.get("twoQ"), r.get("N")) for r in doc["rows"]]
    elif fmt == "csv":
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise SchemaError(f"CSV header must be {','.join(CSV_HEADER)}")
        rows = [tuple(r) for r in reader if r]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    for i, row in enumerate(rows):
        where = f"row {i + 1}"
        if len(row) != 4:
            raise SchemaError(f"{where}: expected 4 fields")
        reps = _reps_from(row[0], where)
        key = (reps, _int_field(row[1], where, "g"), _int_field(row[2], where, "twoQ"))
        entries[key] = _int_field(row[3], where, "N")
    if L is None:
        L = len(next(iter(entries))[0]) if entries else 1
    return IntegerTable(L, entries)


def load_results(path, fmt: str = "json"):
    with open_text(path) as fh:
        return read_integer_table(fh, fmt)


def dumps_integer_table(table, fmt="json") -> str:
    buf = io.StringIO()
    write_integer_table(table, buf, fmt)
    return buf.getvalue()


def format_reps(reps: Iterable) -> str:
    """Compact human form, e.g. ``((2),(1))``; the trivial slot prints as ``.``."""
    parts = ["(" + ",".join(map(str, R)) + ")" if R else "." for R in reps]
    return "(" + ",".join(parts) + ")"


def format_kvec(k) -> str:
    return "(" + ",".join(map(str, k)) + ")" if k else "0"
