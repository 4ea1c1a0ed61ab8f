"""Command-line interface.

Exit codes: 0 success, 1 usage (including an exceeded enumeration cap),
2 parse error, 3 precision shortfall, 4 domain error, 5 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys

from .asympt import asymptotic_slope, generic_jump
from .cover import CAP_ENV, CurveJet, jump_on_curve, jump_table
from .errors import AsramifyError, UsageError
from .formats import export_system, load_curve, parse_cover
from .strata import strata_system
from .verify import THEOREMS, ScanCache, run_theorem


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text: str) -> None:
    _write(args, json.dumps(payload, indent=2, sort_keys=True) + "\n" if args.json else text)


def _write(args, out: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_jump(args) -> int:
    cover = parse_cover(args.cover)
    if (args.jet is None) == (args.curve is None):
        raise UsageError("give exactly one of --jet or --curve")
    jet = CurveJet.from_text(cover.field, args.jet) if args.jet is not None else load_curve(args.curve, cover)
    rep = jump_on_curve(cover, jet)
    F = cover.field
    payload = {"h": rep.h, "jet": jet.to_text(),
               "reduced": {str(l): F.format(c) for l, c in sorted(rep.reduced.terms.items())}}
    _emit(args, payload, f"h={rep.h}\nreduced={rep.reduced}\n")
    return 0


def cmd_strata(args) -> int:
    cover = parse_cover(args.cover)
    system = strata_system(cover, args.r)
    text = export_system(system, args.s)
    payload = {"r": args.r, "s": args.s, "kind": system.kind, "L": system.L,
               "polys": {str(c.l): {"N": c.N, "N_l": c.N_l, "terms": c.poly.to_lines(system.first_var)}
                         for c in (system.cleared(l) for l in system.levels() if l > args.s)}}
    _emit(args, payload, text)
    return 0


def cmd_generic(args) -> int:
    cover = parse_cover(args.cover)
    fallback = "exhaustive" if args.exhaustive else "sampled"
    rep = generic_jump(cover, args.r, fallback=fallback, trials=args.trials, seed=args.seed,
                       cap=args.cap)
    s = rep.slope
    text = (f"r={rep.r}\th_r={rep.h_r}\tslope={s.numerator}/{s.denominator}\tj={rep.j}\t"
            f"closed_form={int(rep.closed_form)}\tcase={rep.case or '-'}\t"
            f"witness={rep.witness.to_text() if rep.witness else '-'}\n")
    _emit(args, rep.to_dict(), text)
    return 0


def cmd_asymptote(args) -> int:
    cover = parse_cover(args.cover)
    table = asymptotic_slope(cover, args.rmax, small_r=args.small_r, trials=args.trials,
                             seed=args.seed, cap=args.cap)
    _write(args, table.to_json() if args.json else table.to_tsv() + f"# limit {table.limit}\n")
    return 0


def cmd_verify(args) -> int:
    cover = parse_cover(args.cover)
    theorems = THEOREMS if args.theorem == "all" else (args.theorem,)
    cache = ScanCache(args.cap)
    checks = []
    for th in theorems:
        checks += run_theorem(th, cover, args.max_length, cache)
    failures = sum(not c.ok for c in checks)
    payload = {"violations": failures,
               "checks": [{"theorem": c.theorem, "r": c.r, "ok": c.ok, "detail": c.detail}
                          for c in checks]}
    text = "".join(c.line() + "\n" for c in checks) + f"violations={failures}\n"
    _emit(args, payload, text)
    return 5 if failures else 0


def cmd_enumerate(args) -> int:
    cover = parse_cover(args.cover)
    kind, _ = cover.family(args.r)
    table = jump_table(cover, args.r, args.cap)
    rows = [(CurveJet(cover.field, kind, args.r, coeffs).to_text(), h) for coeffs, h in table.items()]
    text = "jet\th\n" + "".join(f"{j}\t{h}\n" for j, h in rows)
    _emit(args, {"r": args.r, "table": [{"jet": j, "h": h} for j, h in rows]}, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="asramify", description=(
        "Ramification jumps of Artin-Schreier covers along curve germs, their "
        "strata in jet space, and generic values."))
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--cover", required=True, help="cover file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--cap", type=int, default=None,
                       help=f"enumeration cap (default: ${CAP_ENV} or 1000000)")
        p.set_defaults(func=func)
        return p

    p = add("jump", cmd_jump, "jump along one curve")
    p.add_argument("--jet", help="x:<a1>,... or t:<r>:<b_r>,...")
    p.add_argument("--curve", help="curve file with 'term i j c' lines")

    p = add("strata", cmd_strata, "export the cleared strata polynomials")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int, default=0, help="stratum {h <= s}")

    p = add("generic", cmd_generic, "generic jump h_r")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true",
                   help="measure small r over all jets instead of sampling")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)

    p = add("asymptote", cmd_asymptote, "table of h_r/r")
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--small-r", choices=("exhaustive", "sampled", "skip"), default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", cmd_verify, "run an exhaustive theorem check")
    p.add_argument("--theorem", choices=THEOREMS + ("all",), required=True)
    p.add_argument("--max-length", type=int, default=None,
                   help="largest rm+n to scan (default 6, or 8 for asymp)")

    p = add("enumerate", cmd_enumerate, "dump the jet -> h table")
    p.add_argument("-r", type=int, required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AsramifyError as exc:
        print(f"asramify: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
