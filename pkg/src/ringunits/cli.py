"""Command-line front end.

Exit codes: 0 success, 1 a computed result contradicts a predicted one,
2 invalid input, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analyzer, builders, realizability
from .builders import BuildRecipe, build_from_recipe, parse_recipe, predicted_unit_group
from .errors import RingUnitsError, TheoremViolation, TooLarge
from .groups import format_group, parse_group
from .ring import dumps, loads

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True) if args.json else text)


def _partition(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"partition must be comma-separated integers, got {text!r}") from None


def _primes(text: str) -> frozenset[int]:
    try:
        return frozenset(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated primes, got {text!r}") from None


def _recipe_from_args(args) -> BuildRecipe:
    if args.recipe:
        return parse_recipe(args.recipe)
    if not args.family:
        raise builders.BuilderError("give --family or --recipe")
    fam = args.family
    p = 2 if fam in ("two", "example-2") and args.p is None else args.p
    lam = args.lam
    if fam in ("example-p", "example-2"):
        lam = 2
    return BuildRecipe(fam, p=p, m=args.m, lam=lam, a0=args.a0, n=args.n, partition=args.partition)


def _add_recipe_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--family", choices=[f for f in builders.FAMILIES if f != "product"])
    sp.add_argument("--recipe", help="recipe text, e.g. 'family=galois p=3 m=2 lambda=2 | family=zn n=4'")
    sp.add_argument("--p", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--a0", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--partition", type=_partition, default=(), help="comma-separated parts; '' is trivial")


# -- commands --------------------------------------------------------------------


def cmd_construct(args) -> int:
    recipe = _recipe_from_args(args)
    ring = build_from_recipe(recipe, cap=args.cap)
    predicted = predicted_unit_group(recipe)
    if args.out:
        Path(args.out).write_text(dumps(ring))
    _emit(args, {"recipe": recipe.to_dict(), "order": ring.order, "predicted_unit_group": format_group(predicted),
                 "out": args.out},
          f"{recipe}\nring order         {ring.order}\npredicted units    {format_group(predicted)}"
          + (f"\nwritten to         {args.out}" if args.out else ""))
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        text = Path(args.ring).read_text()
    except OSError as exc:
        raise builders.BuilderError(f"cannot read {args.ring}: {exc.strerror}") from None
    try:
        ring = loads(text)
    except json.JSONDecodeError as exc:
        raise builders.BuilderError(f"{args.ring} is not valid JSON: {exc}") from None
    report = analyzer.analyze(ring, cap=args.cap)
    _emit(args, report.to_dict(), report.table())
    return EXIT_OK


def cmd_verify(args) -> int:
    recipe = _recipe_from_args(args)
    ring = build_from_recipe(recipe, cap=args.cap)
    predicted = predicted_unit_group(recipe)
    _, actual = analyzer.unit_group(ring, cap=args.cap)
    ok = predicted == actual
    _emit(args, {"recipe": recipe.to_dict(), "predicted": format_group(predicted),
                 "actual": format_group(actual), "pass": ok},
          f"{recipe}\npredicted  {format_group(predicted)}\nactual     {format_group(actual)}\n"
          + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_realize_group(args) -> int:
    g = parse_group(args.group)
    verdict = realizability.group_realizable(g, cap=args.cap)
    _emit(args, verdict.to_dict(), f"{format_group(g)}: {verdict}")
    return EXIT_OK


def cmd_realize_cardinality(args) -> int:
    if args.n < 1:
        raise builders.BuilderError("n must be >= 1")
    verdict = realizability.ditor_realizable(args.n, args.char_primes)
    _emit(args, verdict.to_dict(), f"{args.n}: {verdict}")
    return EXIT_OK


def _table(args, rows: list[tuple[int, realizability.RealizabilityVerdict]], title: str) -> int:
    shown = [(n, v) for n, v in rows if v.realizable or args.all]
    payload = {"kind": title, "max": args.max,
               "rows": [{"n": n, **v.to_dict()} for n, v in shown]}
    width = len(str(args.max))
    lines = [f"{n:>{width}}  {v.status.value:<13}  {v.witness if v.realizable else v.reason_text}"
             for n, v in shown]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _check_max(args) -> None:
    if args.max < 1:
        raise builders.BuilderError("max must be >= 1")
    cap = realizability.DEFAULT_ORDER_CAP if args.cap is None else args.cap
    if args.max > cap:
        raise TooLarge(f"max {args.max} exceeds the cap {cap}")


def cmd_cyclic_table(args) -> int:
    _check_max(args)
    rows = [(n, realizability.cyclic_realizable(n)) for n in range(1, args.max + 1)]
    return _table(args, rows, "cyclic")


def cmd_ditor_table(args) -> int:
    _check_max(args)
    ns = range(1, args.max + 1, 2) if args.odd else range(1, args.max + 1)
    realizable = set(realizability.enumerate_cardinalities(args.max))
    rows = [(n, realizability.ditor_realizable(n)) for n in ns if args.all or n in realizable]
    return _table(args, rows, "ditor-odd" if args.odd else "ditor")


def cmd_lemma_check(args) -> int:
    results = []
    failed = False
    for lam in range(1, args.lambda_max + 1):
        for a0 in range(1, args.a0_max + 1):
            ring = builders.galois_ring(args.p, a0 + 1, lam, cap=args.cap)
            res = analyzer.verify_power_lemma(ring, args.p, args.depth)
            failed |= not res
            row = {"p": args.p, "lambda": lam, "m": a0 + 1, "depth": _depth(args), "holds": res.holds,
                   "checked": res.checked}
            if not res:
                mu, l = res.counterexample
                row["counterexample"] = {"mu": list(mu.coeffs), "l": l}
            results.append((row, res))
    text = "\n".join(f"GR({r['p']}^{r['m']}, {r['lambda']})  depth {r['depth']}  {res.describe()}"
                     for r, res in results)
    _emit(args, {"rows": [r for r, _ in results], "pass": not failed}, text + ("\nFAIL" if failed else "\nPASS"))
    return EXIT_MISMATCH if failed else EXIT_OK


def _depth(args) -> int:
    return args.depth if args.depth is not None else (1 if args.p > 2 else 2)


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cap", type=int, default=None, help="override the size cap")

    parser = argparse.ArgumentParser(prog="ringunits", description="Unit groups of finite commutative rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", parents=[common], help="build a ring and write it as JSON")
    _add_recipe_args(sp)
    sp.add_argument("--out", "-o", help="output path for the ring JSON")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("analyze", parents=[common], help="report the unit group of a ring file")
    sp.add_argument("ring", help="path to a ring JSON file")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", parents=[common], help="compare predicted and brute-forced unit groups")
    _add_recipe_args(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("realize-group", parents=[common], help="is a group a unit group?")
    sp.add_argument("group", help="e.g. 'C8 x C3^4' or 'F9* x C3'")
    sp.set_defaults(func=cmd_realize_group)

    sp = sub.add_parser("realize-cardinality", parents=[common], help="is n a number of units?")
    sp.add_argument("n", type=int)
    sp.add_argument("--char-primes", type=_primes, default=None, help="comma-separated primes of the characteristic")
    sp.set_defaults(func=cmd_realize_cardinality)

    for name, func, helptext in (("cyclic-table", cmd_cyclic_table, "cyclic unit groups up to max"),
                                 ("ditor-table", cmd_ditor_table, "unit counts up to max")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("max", type=int)
        sp.add_argument("--all", action="store_true", help="also list non-realizable values")
        if name == "ditor-table":
            sp.add_argument("--odd", action="store_true", help="odd values only")
        sp.set_defaults(func=func)

    sp = sub.add_parser("lemma-check", parents=[common], help="check (1+mu)^(p^l)=1 <=> p^l mu=0 on Galois rings")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--lambda-max", type=int, default=2)
    sp.add_argument("--a0-max", type=int, default=3)
    sp.add_argument("--depth", type=int, default=None, help="mu ranges over p^depth R (default 1, or 2 for p=2)")
    sp.set_defaults(func=cmd_lemma_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except TheoremViolation as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (RingUnitsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
