"""Command-line driver: ``knotreform <command> [flags]``.

Exit codes: 0 success, 1 usage error, 2 bad input, 3 a finding (the checked
property fails on the given link).  Results go to standard output in a
deterministic order; diagnostics go to standard error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .asymptotics import genus_expand, unknot_check
from .errors import (
    ConjectureViolation,
    ConsistencyViolation,
    IncompleteTable,
    KnotReformError,
    ParseError,
    SchemaError,
    StructureViolation,
    UnknownFixture,
)
from .extract import IntegerTable, extract_reps, full_support_reps, verify_class_structure
from .links import (
    FIXTURE_NAMES,
    BraidWord,
    analyze_braid,
    fixture_document,
    fixture_table,
    fundamental_table,
    homfly,
    homfly_to_W,
    quantum_dimension,
)
from .reformulate import connected_from_table, reformulate
from .structure import lm_check, strhom_check
from .textio import (
    LinkFile,
    format_expr,
    format_kvec,
    format_reps,
    link_from_dict,
    load_link_file,
    rep_sort_key,
    save_results,
    write_integer_table,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_FINDING = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


def _int_at_least(lo: int):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}")
        return v

    return conv


def _braid(text):
    try:
        return BraidWord.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _partition(text):
    text = text.strip().strip("()[]")
    try:
        rows = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad partition {text!r}") from None
    if any(r <= 0 for r in rows) or any(a < b for a, b in zip(rows, rows[1:])):
        raise argparse.ArgumentTypeError(f"{rows} is not a partition")
    return rows


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="knotreform", description="Reformulated colored HOMFLY invariants and their integer structure.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("homfly", help="HOMFLY polynomial P and normalized invariant W of a braid closure")
    c.add_argument("--braid", type=_braid, required=True, help='"<strands>:<letters>", e.g. "2:1,1,1"')

    c = sub.add_parser("dims", help="quantum dimension of a partition")
    c.add_argument("--rep", type=_partition, required=True, help='partition rows, e.g. "2,1"')

    def link_flags(c, lmax=True):
        c.add_argument("--link", required=True, help="link JSON file, '-' for stdin, or fixtures/<name>")
        if lmax:
            c.add_argument("--lmax", type=_int_at_least(1), default=None, help="boxes per component (default: all present)")
        c.add_argument("--jobs", type=_int_at_least(1), default=1, help="worker processes")

    c = sub.add_parser("reformulate", help="print the f table of a link")
    link_flags(c)
    c.add_argument("--route", choices=("master", "explicit"), default="master")

    c = sub.add_parser("extract", help="extract the integer table N")
    link_flags(c)
    c.add_argument("--out", default="-", help="output file ('-' for stdout)")
    c.add_argument("--format", choices=("json", "csv"), default="json")

    c = sub.add_parser("verify-conjecture", help="run extraction and the class-basis checks")
    link_flags(c)

    c = sub.add_parser("verify-lm", help="lowest s-power structure of link HOMFLY polynomials")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--braid", type=_braid, action="append", help="may be repeated")
    src.add_argument("--link", action="append", help="link file or fixtures/<name>; may be repeated")
    c.add_argument("--jobs", type=_int_at_least(1), default=1)

    c = sub.add_parser("expand", help="genus expansion of the connected invariants")
    link_flags(c)
    c.add_argument("--gmax", type=_int_at_least(0), default=2)

    c = sub.add_parser("unknot-check", help="unknot genus expansion against the closed form")
    c.add_argument("--gmax", type=_int_at_least(0), default=3)
    c.add_argument("--dmax", type=_int_at_least(1), default=3)
    return p


# -- inputs ----------------------------------------------------------------------


def resolve_link(spec: str) -> LinkFile:
    """A path, ``-``, or ``fixtures/<name>`` (also bare ``<name>``) for the built-ins."""
    path = Path(spec)
    if spec != "-" and not path.exists():
        name = path.stem if path.parent.name == "fixtures" or str(path.parent) == "." else None
        if name in FIXTURE_NAMES:
            return link_from_dict(fixture_document(name))
        if str(path.parent) in (".", "fixtures"):
            raise UnknownFixture(f"no file {spec!r} and no fixture named {path.stem!r} (known: {', '.join(FIXTURE_NAMES)})")
        raise FileNotFoundError(f"no such file: {spec}")
    return load_link_file(spec)


def _table(lf: LinkFile, lmax: int | None):
    """The invariant table cut to ``lmax`` boxes, and that ``lmax``."""
    if lf.name == "unknot" and lf.table is None:
        lmax = lmax or 3
        return fixture_table("unknot", lmax), lmax
    table = lf.table
    if table is None:
        if lmax not in (None, 1):
            raise IncompleteTable(f"link {lf.name or '?'} carries no colored invariants; only --lmax 1 is available")
        table = fundamental_table(lf.presentation)
    have = table.lmax()
    if lmax is None:
        lmax = have
    if lmax > have:
        raise IncompleteTable(f"invariants are complete only up to {have} boxes per component, asked for {lmax}")
    if lmax < 1:
        raise IncompleteTable("the invariant table is empty")
    return table.restrict(lmax), lmax


# -- commands ----------------------------------------------------------------------


def _out(line=""):
    sys.stdout.write(line + "\n")


def _err(line):
    sys.stderr.write(line + "\n")


def cmd_homfly(args) -> int:
    pres = analyze_braid(args.braid)
    P = homfly(args.braid)
    _out(f"braid: {args.braid}")
    _out(f"components: {pres.L}")
    _out(f"linking: {pres.total_lk}")
    _out(f"P = {format_expr(P)}")
    _out(f"W = {format_expr(homfly_to_W(P, pres))}")
    return EXIT_OK


def cmd_dims(args) -> int:
    _out(f"dim_q({','.join(map(str, args.rep))}) = {format_expr(quantum_dimension(args.rep))}")
    return EXIT_OK


def cmd_reformulate(args) -> int:
    lf = resolve_link(args.link)
    table, lmax = _table(lf, args.lmax)
    f = reformulate(table, lmax, route=args.route)
    for reps in sorted(f.entries, key=rep_sort_key):
        _out(f"f{format_reps(reps)} = {format_expr(f[reps])}")
    return EXIT_OK


def _extract_one(f, target):
    return target, extract_reps(f, target)


def _extract_all(f, jobs: int) -> IntegerTable:
    targets = full_support_reps(f)
    if jobs > 1 and len(targets) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_extract_one, [f] * len(targets), targets))
    else:
        results = [_extract_one(f, t) for t in targets]
    entries = {}
    for target, cells in sorted(results, key=lambda r: rep_sort_key(r[0])):
        for (g, tq), n in cells.items():
            entries[(target, g, tq)] = n
    return IntegerTable(f.L, entries)


def _report_violation(exc: ConjectureViolation):
    _err(f"finding: {exc}")
    if exc.witness is not None:
        _err(f"  witness: {format_expr(exc.witness) if hasattr(exc.witness, 'num') else exc.witness}")


def cmd_extract(args) -> int:
    lf = resolve_link(args.link)
    table, lmax = _table(lf, args.lmax)
    f = reformulate(table, lmax)
    try:
        N = _extract_all(f, args.jobs)
    except ConjectureViolation as exc:
        _report_violation(exc)
        return EXIT_FINDING
    save_results(N, args.out, args.format)
    return EXIT_OK


def cmd_verify_conjecture(args) -> int:
    lf = resolve_link(args.link)
    table, lmax = _table(lf, args.lmax)
    Wc = connected_from_table(table, lmax)
    f = reformulate(table, lmax)
    try:
        N = _extract_all(f, args.jobs)
        report = verify_class_structure(f, N, Wc)
    except ConjectureViolation as exc:
        _report_violation(exc)
        _out("result: VIOLATION")
        return EXIT_FINDING
    _out(f"link: {lf.name or args.link}  components: {f.L}  lmax: {lmax}")
    for reps in N.reps():
        _out(f"{format_reps(reps)}: {len(N.for_reps(reps))} non-zero entries, Q {N.parity(reps)}")
    _out(f"class-basis checks: {len(report.checked_f)} f values, {len(report.checked_w)} connected invariants")
    write_integer_table(N, sys.stdout, "csv")
    _out("result: PASS")
    return EXIT_OK


def _lm_job(item):
    label, braid = item
    pres = analyze_braid(braid)
    lm = lm_check(pres)
    lines = [
        f"link: {label}  components: {pres.L}  linking: {pres.total_lk}",
        f"  lowest s-power: {lm.lowest_power} (expected {1 - pres.L})",
        f"  parity uniform: {lm.parity_ok}",
        f"  lowest coefficient factorizes: {lm.lhs == lm.rhs}",
    ]
    ok = lm.ok
    try:
        st = strhom_check(pres)
    except StructureViolation as exc:
        lines.append(f"  connected invariant: {exc}")
        return lines, False
    vanish = ", ".join(f"s^{k}: {'0' if v else 'non-zero'}" for k, v in sorted(st.vanishing.items()))
    lines.append(f"  connected low powers: {vanish or 'none required'}")
    if st.lasteq is not None:
        lines.append(f"  three-component identity: {'holds' if st.lasteq['holds'] else 'fails'}")
    ok = ok and st.ok
    lines.append(f"  result: {'PASS' if ok else 'FAIL'}")
    return lines, ok


def cmd_verify_lm(args) -> int:
    if args.braid:
        items = [(str(b), b) for b in args.braid]
    else:
        items = [(spec, resolve_link(spec).presentation.braid) for spec in args.link]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_lm_job, items))
    else:
        results = [_lm_job(it) for it in items]
    for lines, _ in results:
        for line in lines:
            _out(line)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FINDING


def cmd_expand(args) -> int:
    lf = resolve_link(args.link)
    table, lmax = _table(lf, args.lmax)
    Wc = connected_from_table(table, lmax)
    G = genus_expand(Wc, args.gmax)
    _out(f"# convention: {G.convention}")
    _out(f"# sign: {G.sign:+d}")
    for (k, g) in sorted(G.entries, key=lambda kg: (tuple(map(tuple, kg[0])), kg[1])):
        kt = "(" + ",".join(format_kvec(v) for v in k) + ")"
        _out(f"F[{kt}, g={g}] = {format_expr(G.entries[(k, g)])}")
    return EXIT_OK


def cmd_unknot_check(args) -> int:
    rep = unknot_check(args.gmax, args.dmax)
    _out(f"# convention: {rep.convention}")
    _out(f"# sign: {rep.sign:+d}")
    for c in rep.cells:
        status = "match" if c.match else ("sign-mismatch" if c.magnitude_match else "MISMATCH")
        _out(f"d={c.d} g={c.g} {status}: expanded {format_expr(c.expanded)} closed form {format_expr(c.closed_form)}")
    _out(f"result: {'PASS' if rep.ok else 'FAIL'} ({sum(c.match for c in rep.cells)}/{len(rep.cells)} cells)")
    return EXIT_OK if rep.ok else EXIT_FINDING


COMMANDS = {
    "homfly": cmd_homfly,
    "dims": cmd_dims,
    "reformulate": cmd_reformulate,
    "extract": cmd_extract,
    "verify-conjecture": cmd_verify_conjecture,
    "verify-lm": cmd_verify_lm,
    "expand": cmd_expand,
    "unknot-check": cmd_unknot_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        _err(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (SchemaError, ParseError, UnknownFixture, IncompleteTable, FileNotFoundError, IsADirectoryError) as exc:
        _err(f"input error: {exc}")
        return EXIT_INPUT
    except (ConsistencyViolation, StructureViolation) as exc:
        _err(f"finding: {exc}")
        return EXIT_FINDING
    except KnotReformError as exc:
        _err(f"input error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
