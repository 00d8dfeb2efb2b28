"""Command-line front end.

    sl2motive class SPEC [--json]
    sl2motive eval SPEC --q Q
    sl2motive verify SPEC --q Q [--json] [--threads N] [--budget N] [--allow-char2]
    sl2motive identities [--max-n N] [--max-g G] [--max-s S] [--json]
    sl2motive table FAMILY RANGE [RANGE] [--format csv|json|latex]

Exit codes: 0 success, 1 usage error, 2 a comparison failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Sequence, TextIO

from . import catalog
from .catalog import NotTabulatedError
from .families import (
    GRAMMAR_HINT,
    AbelianGL2,
    AbelianSL2,
    Free,
    FreeParabolic,
    PunctureClass,
    SpecSyntaxError,
    Surface,
    SurfaceParabolic,
    VarietySpec,
    format_spec,
    jordan_reduce,
    parse_spec,
    twisted,
)
from .ff_oracle import DEFAULT_BUDGET, InstanceTooLargeError, verify
from .fields import UnsupportedFieldError
from .motive import evaluate_motive
from .ring import EquivariantClass, LaurentPoly, q, z2_power, z2_product

__all__ = ["run", "main", "emit_table", "run_identities", "IdentityResult", "TABLE_FAMILIES"]

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


# -- tables -------------------------------------------------------------------

JPLUS = PunctureClass.JPLUS

# family -> (parameter names, bounds, spec builder)
TABLE_FAMILIES: dict[str, tuple[tuple[str, ...], tuple[tuple[int, int], ...], Callable[..., VarietySpec]]] = {
    "free": (("n",), ((1, 12),), Free),
    "surface": (("g",), ((1, 8),), Surface),
    "free-parabolic": (("n", "s"), ((0, 8), (1, 8)), lambda n, s: FreeParabolic(n, (JPLUS,) * s)),
    "surface-parabolic": (("g", "s"), ((1, 6), (1, 8)), lambda g, s: SurfaceParabolic(g, (JPLUS,) * s)),
    "twisted": (("g", "r"), ((1, 6), (0, 8)), twisted),
    "abelian-sl2": (("n",), ((1, 12),), AbelianSL2),
    "abelian-gl2": (("n",), ((1, 12),), AbelianGL2),
}


def parse_range(text: str) -> range:
    """``"3"`` or ``"1..4"`` (inclusive)."""
    lo, sep, hi = text.partition("..")
    try:
        start = int(lo)
        stop = int(hi) if sep else start
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected N or LO..HI") from None
    if stop < start:
        raise UsageError(f"empty range {text!r}")
    return range(start, stop + 1)


def emit_table(family: str, ranges: Sequence[range], fmt: str = "csv") -> str:
    """Character-variety classes of ``family`` over a grid of parameters."""
    if family not in TABLE_FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(TABLE_FAMILIES)}")
    if fmt not in ("csv", "json", "latex"):
        raise UsageError(f"unknown format {fmt!r}; choose csv, json or latex")
    names, bounds, build = TABLE_FAMILIES[family]
    if len(ranges) != len(names):
        raise UsageError(f"{family} takes {len(names)} range(s): {', '.join(names)}")
    for name, r, (lo, hi) in zip(names, ranges, bounds):
        if r.start < lo or r.stop - 1 > hi:
            raise UsageError(f"{name} out of range: allowed {lo}..{hi}")

    rows: list[tuple[tuple[int, ...], LaurentPoly]] = []
    grid: list[tuple[int, ...]] = [()]
    for r in ranges:
        grid = [g + (v,) for g in grid for v in r]
    for params in grid:
        rows.append((params, catalog.character_variety_class(build(*params))))

    if fmt == "csv":
        lines = [",".join(names + ("class",))]
        lines += [",".join([*map(str, p), str(c)]) for p, c in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([{**dict(zip(names, p)), "class": str(c)} for p, c in rows], indent=2) + "\n"
    cols = "r" * len(names) + "l"
    lines = [f"\\begin{{tabular}}{{{cols}}}", " & ".join([f"${n}$" for n in names] + ["class"]) + r" \\", r"\hline"]
    lines += [" & ".join([*map(str, p), f"${c.to_latex()}$"]) + r" \\" for p, c in rows]
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


# -- identities ---------------------------------------------------------------


@dataclass(frozen=True)
class IdentityResult:
    name: str
    ok: bool
    detail: str = ""


def _in_range_specs(max_n: int, max_g: int, max_s: int) -> list[VarietySpec]:
    specs: list[VarietySpec] = [Free(n) for n in range(1, max_n + 1)]
    specs += [Surface(g) for g in range(1, max_g + 1)]
    specs += [FreeParabolic(n, (JPLUS,) * s) for n in range(1, min(max_n, 4) + 1) for s in range(1, max_s + 1)]
    specs += [SurfaceParabolic(g, (JPLUS,) * s) for g in range(1, min(max_g, 3) + 1) for s in range(1, max_s + 1)]
    return specs


def run_identities(max_n: int = 6, max_g: int = 4, max_s: int = 4, max_power: int = 8) -> list[IdentityResult]:
    """The symbolic invariant suite; every entry is an exact comparison."""
    out: list[IdentityResult] = []
    for spec in _in_range_specs(max_n, max_g, max_s):
        name = format_spec(spec)
        strata = sum((catalog.stratum_class(spec, s) for s in catalog.PRIMARY_STRATA), LaurentPoly())
        rep = catalog.representation_variety_class(spec)
        out.append(IdentityResult(f"stratum sum {name}", strata == rep, "" if strata == rep else f"{strata} != {rep}"))
        box = catalog.character_variety_class(spec)
        assembled, _ = catalog.character_variety_via_strata(spec)
        out.append(
            IdentityResult(f"assembly {name}", assembled == box, "" if assembled == box else f"{assembled} != {box}")
        )
        for stratum in catalog.REDUCIBLE_STRATA:
            try:
                geometric, _ = evaluate_motive(catalog.stratum_motive(spec, stratum))
            except NotTabulatedError:
                continue
            expected = catalog.stratum_class(spec, stratum)
            out.append(IdentityResult(f"stratum motive {stratum} {name}", geometric == expected))

    for base_name, base in (("torus inversion", EquivariantClass(q, -1)), ("pair swap", EquivariantClass(q**2 - q, 1 - q))):
        acc = base
        for n in range(1, max_power + 1):
            if n > 1:
                acc = z2_product(acc, base)
            out.append(IdentityResult(f"z2_power {base_name} n={n}", z2_power(base, n) == acc))

    for s in range(2, 9):
        pi, prev = catalog.helper_plane_class("pi_s", s), catalog.helper_plane_class("pi_s", s - 1)
        out.append(IdentityResult(f"pi_s recursion s={s}", pi == (q - 1) ** (s - 1) - prev))
        for g in range(1, 4):
            big, prev = catalog.helper_plane_class("Pi_s", s, g), catalog.helper_plane_class("Pi_s", s - 1, g)
            out.append(IdentityResult(f"Pi_s recursion s={s} g={g}", big == q ** (2 * g) * (q - 1) ** (s - 1) - prev))

    punct = (PunctureClass.JPLUS, PunctureClass.JMINUS, PunctureClass.MINUS_ID, PunctureClass.JMINUS)
    reductions = {jordan_reduce(p) for p in permutations(punct)}
    out.append(IdentityResult("jordan_reduce permutation invariance", len(reductions) == 1))
    genus_one = catalog.character_variety_class(Surface(1))
    out.append(IdentityResult("surface g=1 vs torus quotient", genus_one == z2_power(EquivariantClass(q, -1), 2).plus))
    return out


# -- commands -----------------------------------------------------------------


def _spec(text: str) -> VarietySpec:
    try:
        return parse_spec(text)
    except SpecSyntaxError as exc:
        raise UsageError(str(exc)) from None


def _cmd_class(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    spec = _spec(args.spec)
    value = catalog.character_variety_class(spec)
    notes = catalog.diagnostics(spec)
    if args.json:
        doc: dict[str, object] = {"spec": format_spec(spec), "class": str(value), "diagnostics": notes}
        try:
            doc["representation"] = str(catalog.representation_variety_class(spec))
            doc["strata"] = {s.value: str(catalog.stratum_class(spec, s)) for s in catalog.PRIMARY_STRATA}
        except NotTabulatedError:
            pass
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(value, file=out)
        for note in notes:
            print(f"note: {note}", file=err)
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.q is None:
        raise UsageError("eval needs --q")
    spec = _spec(args.spec)
    value = catalog.character_variety_class(spec)(args.q)
    if args.json:
        print(json.dumps({"spec": format_spec(spec), "q": args.q, "value": str(value)}), file=out)
    else:
        print(value, file=out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.q is None:
        raise UsageError("verify needs --q")
    spec = _spec(args.spec)
    try:
        report = verify(spec, args.q, workers=args.threads, budget=args.budget, allow_char2=args.allow_char2)
    except (UnsupportedFieldError, InstanceTooLargeError) as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        print(report.to_json(), file=out)
    else:
        print(f"{format_spec(spec)} over F_{args.q}: {report.total} tuples", file=out)
        for key, count in report.counts.items():
            mark = "ok" if report.matches.get(key, True) else "MISMATCH"
            print(f"  {key:<16}{count:>12}  expected {report.expected[key]}  {mark}", file=out)
    if not report.total_match:
        for note in report.diagnostics:
            print(note, file=err)
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_identities(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    results = run_identities(args.max_n, args.max_g, args.max_s)
    failed = [r for r in results if not r.ok]
    if args.json:
        print(json.dumps([{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results], indent=2), file=out)
    else:
        for r in results:
            print(f"{'ok' if r.ok else 'FAIL':<5}{r.name}", file=out)
        print(f"{len(results) - len(failed)}/{len(results)} identities hold", file=out)
    for r in failed:
        print(f"failed: {r.name}: {r.detail}", file=err)
    return EXIT_MISMATCH if failed else EXIT_OK


def _cmd_table(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    out.write(emit_table(args.family, [parse_range(r) for r in args.ranges], args.format))
    return EXIT_OK


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sl2motive", description="Classes of SL2 character varieties and finite-field checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("class", help="character-variety class of a family")
    p.add_argument("spec", help=GRAMMAR_HINT)
    common(p)
    p.set_defaults(func=_cmd_class)

    p = sub.add_parser("eval", help="evaluate the class at an integer q")
    p.add_argument("spec")
    p.add_argument("--q", type=int)
    common(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("verify", help="count points over F_q and compare with the catalog")
    p.add_argument("spec")
    p.add_argument("--q", type=int)
    p.add_argument("--threads", type=_positive, default=1, help="worker processes")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="maximum tuples to enumerate")
    p.add_argument("--allow-char2", action="store_true", help="permit q=2 (free whole-variety counts only)")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("identities", help="run the symbolic identity suite")
    p.add_argument("--max-n", type=_positive, default=6)
    p.add_argument("--max-g", type=_positive, default=4)
    p.add_argument("--max-s", type=_positive, default=4)
    common(p)
    p.set_defaults(func=_cmd_identities)

    p = sub.add_parser("table", help="tabulate classes over parameter ranges")
    p.add_argument("family", help=", ".join(TABLE_FAMILIES))
    p.add_argument("ranges", nargs="+", help="N or LO..HI per parameter")
    p.add_argument("--format", default="csv", help="csv, json or latex")
    p.set_defaults(func=_cmd_table)
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        return args.func(args, out, err)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
