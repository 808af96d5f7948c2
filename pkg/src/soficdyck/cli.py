"""Command-line front end: ``soficdyck zeta|check|periodic|series-of``.

Exit codes: 0 success, 1 a check failed, 2 a determinism precondition
failed, 3 bad input.
"""

import argparse
import json
import sys

from . import automaton as am
from . import languages, zeta
from .series import MultiSeries, series_to_json
from .words import HKind

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_INPUT = 0, 1, 2, 3

DEFAULT_CAP_UNI = 12
DEFAULT_CAP_MULTI = 8

PROPERTIES = ("circularity", "determinism", "codeterminism", "decomposition", "stack-equivalence")
MATRICES = ("C", "D", "CStarMc", "MrPlusC", "McPlusC", "MrCStar")


class InputError(Exception):
    pass


def _load(spec):
    try:
        return am.load(spec)
    except am.AutomatonError as exc:
        raise InputError("invalid automaton %s:\n  %s" % (spec, "\n  ".join(exc.diagnostics)))
    except (OSError, KeyError, ValueError) as exc:
        raise InputError("cannot load automaton %s: %s" % (spec, exc))


def _cap(args):
    if args.N is None:
        return DEFAULT_CAP_MULTI if args.multivariate else DEFAULT_CAP_UNI
    if args.N < 0:
        raise InputError("the degree cap must be nonnegative")
    return args.N


def _homogeneous(s, n):
    return MultiSeries(
        s.letters,
        s.cap,
        {tuple(sorted(m.items())): c for m, c in s.terms() if sum(m.values()) == n},
    )


def _first_difference(s, t):
    """Lowest degree where two series differ, with both degree-n parts rendered."""
    for n in range(min(s.cap, t.cap) + 1):
        if s.component(n) != t.component(n):
            if isinstance(s, MultiSeries):
                return n, str(_homogeneous(s, n)), str(_homogeneous(t, n))
            return n, str(s[n]), str(t[n])
    return None


def cmd_zeta(args, out):
    specs = args.automaton
    if len(specs) > 2:
        raise InputError("at most two automata (left and right presentations)")
    left = _load(specs[0])
    right = _load(specs[1]) if len(specs) == 2 else left
    cap = _cap(args)
    variables = "multi" if args.multivariate else "uni"
    methods = ("bruteforce", "determinant", "substitution") if args.method == "all" else (args.method,)
    results = {}
    for m in methods:
        if m == "bruteforce":
            results[m] = zeta.zeta_bruteforce(left, cap, variables, workers=args.workers)
        elif m == "determinant":
            results[m] = zeta.zeta_det_route(left, right, cap, variables, args.check_length)
        else:
            results[m] = zeta.zeta_subst_route(left, right, cap, variables, args.check_length)
    verdict = None
    if len(results) > 1:
        ref_name = methods[0]
        ref = results[ref_name]
        verdict = {"agree": True}
        for m in methods[1:]:
            diff = _first_difference(ref, results[m])
            if diff:
                verdict = {
                    "agree": False,
                    "routes": [ref_name, m],
                    "degree": diff[0],
                    "values": [diff[1], diff[2]],
                }
                break
    if args.format == "json":
        doc = {"cap": cap, "variables": variables, "series": {m: series_to_json(s) for m, s in results.items()}}
        if verdict is not None:
            doc["verdict"] = verdict
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for m, s in results.items():
            out.write("%s: %s\n" % (m, s))
        if verdict is not None:
            if verdict["agree"]:
                out.write("AGREE up to degree %d\n" % cap)
            else:
                out.write(
                    "DISAGREE at degree %d: %s gives %s, %s gives %s\n"
                    % (verdict["degree"], verdict["routes"][0], verdict["values"][0], verdict["routes"][1], verdict["values"][1])
                )
    if verdict is not None and not verdict["agree"]:
        return EXIT_FAIL
    return EXIT_OK


def _run_check(a, prop, max_len):
    if prop == "determinism":
        return [am.check_h_determinism(a, HKind.CStarMc, max_len)]
    if prop == "codeterminism":
        return [am.check_h_codeterminism(a, HKind.MrPlusC, max_len)]
    if prop == "circularity":
        return [languages.circularity_check(a, k, max_len) for k in (HKind.CStarMc, HKind.MrPlusC)]
    if prop == "decomposition":
        return [zeta.decomposition_check(a, max_len)]
    return [am.check_stack_equivalence(a, max_len)]


def cmd_check(args, out):
    a = _load(args.automaton[0])
    props = args.property or list(PROPERTIES)
    if args.max_length < 1:
        raise InputError("--max-length must be positive")
    reports = [r for p in props for r in _run_check(a, p, args.max_length)]
    if args.format == "json":
        doc = [{"passed": r.passed, "report": str(r)} for r in reports]
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for r in reports:
            out.write("%s\n" % r)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_periodic(args, out):
    a = _load(args.automaton[0])
    if args.n < 1:
        raise InputError("-n must be at least 1")
    if args.list:
        pats = zeta.periodic_patterns(a, args.n, workers=args.workers)
        count = len(pats)
    else:
        count = zeta.pn_bruteforce(a, args.n, workers=args.workers)
    if args.format == "json":
        doc = {"n": args.n, "count": count}
        if args.list:
            doc["patterns"] = [" ".join(u) for u in pats]
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write("%d\n" % count)
        if args.list:
            for u in pats:
                out.write("%s\n" % " ".join(u))
    return EXIT_OK


def _parse_entry(text, states):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or any(p not in states for p in parts):
        raise InputError("--entry must be two state ids 'p,q' from %s" % (", ".join(states)))
    return tuple(parts)


def cmd_series_of(args, out):
    a = _load(args.automaton[0])
    cap = _cap(args)
    variables = "multi" if args.multivariate else "uni"
    kind = HKind(args.matrix)
    m = languages.h_matrix(a, kind, cap, variables)
    if args.entry:
        entries = [_parse_entry(args.entry, a.states)]
    else:
        entries = [(p, q) for p in a.states for q in a.states]
    if args.format == "json":
        doc = [{"entry": list(pq), "series": series_to_json(m[pq])} for pq in entries]
        out.write(json.dumps(doc if not args.entry else doc[0], indent=2) + "\n")
    else:
        for pq in entries:
            prefix = "" if args.entry else "%s[%s,%s] = " % (kind, pq[0], pq[1])
            out.write("%s%s\n" % (prefix, m[pq]))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="soficdyck",
        description="Zeta functions and periodic points of sofic-Dyck shifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, multi=True):
        p.add_argument(
            "-a",
            "--automaton",
            action="append",
            required=True,
            help="automaton JSON file or builtin:<name> (fig2, golden-mean, dyck-2, motzkin-2-1, ...)",
        )
        p.add_argument("--format", choices=("text", "json"), default="text")
        if multi:
            p.add_argument("-N", type=int, default=None, help="degree cap (default 12, or 8 with --multivariate)")
            p.add_argument("--multivariate", action="store_true", help="keep letters as commuting variables")

    p = sub.add_parser("zeta", help="compute the zeta function")
    common(p)
    p.add_argument(
        "--method",
        choices=("bruteforce", "determinant", "substitution", "all"),
        default="determinant",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--check-length", type=int, default=6, help="word length for the determinism checks")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("check", help="run bounded property checks")
    common(p, multi=False)
    p.add_argument("--property", action="append", choices=PROPERTIES, help="repeatable; default all")
    p.add_argument("--max-length", type=int, default=6)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("periodic", help="count periodic patterns of one length")
    common(p, multi=False)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--list", action="store_true", help="also list the patterns")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_periodic)

    p = sub.add_parser("series-of", help="print entries of a language matrix")
    common(p)
    p.add_argument("--matrix", choices=MATRICES, default="C")
    p.add_argument("--entry", help="p,q (default: every entry)")
    p.set_defaults(func=cmd_series_of)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except InputError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_INPUT
    except zeta.PreconditionError as exc:
        sys.stderr.write("precondition failed: %s\n" % exc)
        return EXIT_PRECONDITION


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
