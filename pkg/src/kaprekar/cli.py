"""Command-line front end.

    kaprekar trace   --base 10 --digits 2 --value 15
    kaprekar analyze --base 27 --digits 2 --format json
    kaprekar verify  --digits 2 --base-range 2..500
    kaprekar survey  --digits 2 --base-range 2..100 --format csv --out survey.csv

Exit codes: 0 success, 1 verification mismatch, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from kaprekar import three_digit, two_digit
from kaprekar.digits import DomainError, to_digits
from kaprekar.orbits import BudgetError, KaprekarMap, analyze_orbit, exhaustive_analysis
from kaprekar.verify import default_budget, scaling_checks, survey, verify_range

ANALYZE_BUDGET = 10**7

SURVEY_COLUMNS = [
    "m", "digits", "r", "minimal_periods", "cycle_count", "cycle_sizes",
    "max_step_exact", "max_step_predicted", "bound_tight",
]


class UsageError(Exception):
    pass


def parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if not sep or a > b:
        raise argparse.ArgumentTypeError(f"expected a..b with a <= b, got {text!r}")
    return range(a, b + 1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=2, help="digit count n (default 2)")
    common.add_argument("--format", choices=["json", "csv", "table"], default="table")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--budget", type=int, metavar="N", help="largest state count to enumerate")

    bases = argparse.ArgumentParser(add_help=False)
    group = bases.add_mutually_exclusive_group(required=True)
    group.add_argument("--base", type=int)
    group.add_argument("--base-range", type=parse_range, metavar="A..B")

    parser = argparse.ArgumentParser(prog="kaprekar", description="Kaprekar routine dynamics in any base.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", parents=[common], help="trajectory of one value")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--value", type=int, required=True)
    p.add_argument("--tuples", action="store_true", help="also render values as base-m digit tuples")

    p = sub.add_parser("analyze", parents=[common], help="closed-form analysis of one base")
    p.add_argument("--base", type=int, required=True)

    p = sub.add_parser("verify", parents=[common, bases], help="check closed forms against enumeration")
    p.add_argument("--index-only", action="store_true", help="enumerate index space 0..m only")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    sub.add_parser("survey", parents=[common, bases], help="per-base dataset")
    return parser


def _bases(args) -> range:
    return args.base_range if args.base_range is not None else range(args.base, args.base + 1)


def _validate(args) -> None:
    if args.digits < 2:
        raise UsageError(f"--digits must be at least 2, got {args.digits}")
    bases = _bases(args) if hasattr(args, "base_range") else [args.base]
    if min(bases) < 2:
        raise UsageError(f"bases must be at least 2, got {min(bases)}")
    if args.command in ("verify", "survey") and args.digits not in (2, 3):
        raise UsageError(f"{args.command} covers 2 or 3 digits only")
    if args.command == "trace" and not 0 <= args.value < args.base**args.digits:
        raise UsageError(f"--value must lie in 0..{args.base ** args.digits - 1}")


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _joined(values) -> str:
    return ";".join(map(str, values))


# ---- trace ----

def run_trace(args) -> tuple[str, int]:
    m, n = args.base, args.digits
    orbit = analyze_orbit(KaprekarMap(m, n), args.value)
    data = {"base": m, "digits": n, **orbit.to_dict()}
    if args.tuples:
        data["rendered"] = {str(v): str(to_digits(v, m, n)) for v in orbit.trajectory}
    if args.format == "json":
        return _json(data), 0
    if args.format == "csv":
        rows = [(i, v, "tail") for i, v in enumerate(orbit.tail)]
        rows += [(orbit.step + i, v, "cycle") for i, v in enumerate(orbit.cycle)]
        return _csv(["t", "value", "part"], rows), 0

    def show(v):
        return f"{v}{to_digits(v, m, n)}" if args.tuples else str(v)

    parts = [show(v) for v in orbit.tail]
    parts.append("[" + " -> ".join(show(v) for v in orbit.cycle) + "]")
    parts.append(show(orbit.cycle[0]))
    lines = [
        " -> ".join(parts),
        f"step {orbit.step}, period {orbit.period}",
    ]
    return "\n".join(lines) + "\n", 0


# ---- analyze ----

def _analytic(value):
    return {"value": value, "source": "analytic"}


def _observed(value):
    return {"value": value, "source": "engine"}


def analyze_fields(m: int, n: int, budget: int) -> dict:
    fields: dict = {"base": m, "digits": n}
    if n == 2:
        a = two_digit.analyze_base(m)
        fields["r"] = _analytic(a.r)
        fields["minimal_periods"] = _analytic(list(a.minimal_periods))
        fields["fixed_sets"] = _analytic([
            {"indexes": list(c), "values": [i * (m - 1) for i in c]} for c in a.cycles])
        fields["max_step_bound"] = _analytic(a.max_step_bound)
        predicted = [[0]] + [list(c) for c in a.value_cycles]
    elif n == 3:
        a = three_digit.analyze_base(m)
        cycle = [v // (m * m - 1) for v in a.fixed_cycle]
        fields["fixed_sets"] = _analytic([{
            "indexes": cycle,
            "values": list(a.fixed_cycle),
            "digit_tuples": [str(three_digit.index_digits(i, m)) for i in cycle],
        }])
        fields["max_step"] = _analytic(a.max_step)
        predicted = [[0], list(a.fixed_cycle)]
    else:
        fields["notice"] = f"no closed form for {n} digits; engine results only"
        predicted = None

    if m**n <= budget:
        engine = exhaustive_analysis(KaprekarMap(m, n), budget=budget)
        fields["max_step_exact"] = _observed(engine.max_step)
        fields["cycles"] = _observed([list(c) for c in engine.cycles])
        if predicted is not None:
            fields["engine_agrees"] = _observed(predicted == [list(c) for c in engine.cycles])
    elif predicted is None:
        raise BudgetError(f"{m}^{n} states exceed the budget of {budget}; nothing to report")
    return fields


def run_analyze(args) -> tuple[str, int]:
    budget = ANALYZE_BUDGET if args.budget is None else args.budget
    fields = analyze_fields(args.base, args.digits, budget)
    if "notice" in fields:
        print(fields["notice"], file=sys.stderr)
    if args.format == "json":
        return _json(fields), 0

    rows = []
    for key, item in fields.items():
        if isinstance(item, dict):
            value, source = item["value"], item["source"]
        else:
            value, source = item, ""
        if isinstance(value, bool):
            value = str(value).lower()
        if key == "fixed_sets":
            for i, c in enumerate(value):
                for part, vals in c.items():
                    rows.append((f"fixed_set[{i}].{part}", _joined(vals), source))
        elif key == "cycles":
            rows.extend((f"cycle[{i}]", _joined(c), source) for i, c in enumerate(value))
        elif isinstance(value, list):
            rows.append((key, _joined(value), source))
        else:
            rows.append((key, value, source))
    if args.format == "csv":
        return _csv(["field", "value", "source"], rows), 0
    width = max(len(r[0]) for r in rows)
    return "".join(f"{k:<{width}}  {v}" + (f"  [{s}]" if s else "") + "\n" for k, v, s in rows), 0


# ---- verify ----

def run_verify(args) -> tuple[str, int]:
    full = not args.index_only
    budget = args.budget
    if budget is None and full:
        budget = default_budget(args.digits)
    reports = verify_range(_bases(args), args.digits, full=full, budget=budget, jobs=args.jobs)
    cross = []
    if args.digits == 2:
        cross = scaling_checks({r.m: r.notes["index_cycles"] for r in reports})
    ok = all(r.overall for r in reports) and all(c.passed for c in cross)
    code = 0 if ok else 1

    if args.format == "json":
        return _json({
            "overall": ok,
            "reports": [r.to_dict() for r in reports],
            "cross_base": [c.to_dict() for c in cross],
        }), code
    if args.format == "csv":
        rows = [
            (r.m, r.digits, r.mode, c.name, c.relation, json.dumps(c.predicted),
             json.dumps(c.observed), str(c.passed).lower())
            for r in reports for c in r.checks
        ]
        rows += [("", args.digits, "cross", c.name, c.relation, json.dumps(c.predicted),
                  json.dumps(c.observed), str(c.passed).lower()) for c in cross]
        return _csv(["m", "digits", "mode", "check", "relation", "predicted", "observed", "passed"], rows), code

    lines = []
    for r in reports:
        status = "PASS" if r.overall else "FAIL"
        names = ", ".join(c.name + ("" if c.passed else " (FAILED)") for c in r.checks)
        passed = sum(c.passed for c in r.checks)
        lines.append(f"m={r.m} digits={r.digits} {r.mode} {status} {passed}/{len(r.checks)}: {names}")
        for c in r.failures:
            lines.append(f"    {c.name}: predicted {c.predicted} observed {c.observed} "
                         f"counterexample {c.counterexample}")
    if cross:
        failed = [c for c in cross if not c.passed]
        lines.append(f"cross-base scaling: {len(cross) - len(failed)}/{len(cross)} passed")
        for c in failed:
            lines.append(f"    {c.name}: predicted {c.predicted} observed {c.observed}")
    lines.append(f"{sum(r.overall for r in reports)}/{len(reports)} bases passed")
    return "\n".join(lines) + "\n", code


# ---- survey ----

def _survey_csv_row(row) -> list:
    if row.error:
        return [row.m, row.digits] + [""] * (len(SURVEY_COLUMNS) - 2)
    return [
        row.m, row.digits, "" if row.r is None else row.r, _joined(row.minimal_periods),
        row.cycle_count, _joined(row.cycle_sizes), row.max_step_exact,
        row.max_step_predicted, str(row.bound_tight).lower(),
    ]


def run_survey(args) -> tuple[str, int]:
    rows = survey(_bases(args), args.digits, budget=args.budget)
    for row in rows:
        if row.error:
            print(f"m={row.m}: {row.error}", file=sys.stderr)
    if args.format == "json":
        return _json([r.to_dict() for r in rows]), 0
    table = [_survey_csv_row(r) for r in rows]
    if args.format == "csv":
        return _csv(SURVEY_COLUMNS, table), 0
    cells = [SURVEY_COLUMNS] + [[str(c) for c in r] for r in table]
    widths = [max(len(r[i]) for r in cells) for i in range(len(SURVEY_COLUMNS))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells), 0


COMMANDS = {"trace": run_trace, "analyze": run_analyze, "verify": run_verify, "survey": run_survey}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        text, code = COMMANDS[args.command](args)
    except (UsageError, DomainError, BudgetError) as exc:
        parser.print_usage(sys.stderr)
        print(f"kaprekar {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"kaprekar: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
