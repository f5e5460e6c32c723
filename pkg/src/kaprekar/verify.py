"""Cross-check the closed forms against exhaustive enumeration.

Every check pairs an analytic prediction with a value read off the orbit
engine, never two analytic values. Predictions and observations are kept in
JSON-ready form so equality checks are plain comparisons of serialisations.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from kaprekar import three_digit, two_digit
from kaprekar.orbits import BudgetError, FunctionMap, KaprekarMap, exhaustive_analysis

# Largest base verified over the full value space by default.
MAX_FULL_BASE = {2: 65536, 3: 1024}


def default_budget(digits: int) -> int:
    return MAX_FULL_BASE[digits] ** digits


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class Check:
    name: str
    predicted: Any
    observed: Any
    relation: str = "=="
    counterexample: Any = None

    @property
    def passed(self) -> bool:
        if self.relation == "<=":
            return self.observed <= self.predicted
        return canonical(self.predicted) == canonical(self.observed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


@dataclass
class VerificationReport:
    m: int
    digits: int
    mode: str
    checks: list[Check] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "digits": self.digits,
            "mode": self.mode,
            "overall": self.overall,
            "checks": [c.to_dict() for c in self.checks],
            "notes": self.notes,
        }


def _first_difference(a, b):
    diff = set(a) ^ set(b)
    return min(diff) if diff else None


def _step_check(predicted: np.ndarray, observed: np.ndarray) -> Check:
    bad = np.flatnonzero(predicted != observed)
    cx = None
    if len(bad):
        x = int(bad[0])
        cx = {"x": x, "predicted": int(predicted[x]), "observed": int(observed[x])}
    return Check(
        "step_agreement",
        predicted={"values": len(predicted), "mismatches": 0},
        observed={"values": len(observed), "mismatches": len(bad)},
        counterexample=cx,
    )


def _as_lists(cycles) -> list[list[int]]:
    return [list(c) for c in cycles]


def _to_indexes(values, unit: int) -> list:
    # A value off the lattice of multiples is kept verbatim so it shows up as a mismatch.
    return sorted((v // unit if v % unit == 0 else -v) for v in values)


def _engine(f, budget: int):
    if f.size > budget:
        raise BudgetError(f"{f!r} has {f.size} states, over the budget of {budget}")
    return exhaustive_analysis(f, budget=budget)


def verify_two_digit(m: int, full: bool = True, budget: int | None = None) -> VerificationReport:
    """Five checks for the two-digit system in base ``m``.

    With ``full=False`` the engine runs on the index map over ``0..m`` and
    only the three structural checks apply.
    """
    budget = default_budget(2) if budget is None else budget
    theory = two_digit.analyze_base(m)
    unit = m - 1 if full else 1
    if full:
        engine = _engine(KaprekarMap(m, 2), budget)
    else:
        engine = _engine(FunctionMap(lambda a: two_digit.f2_index(a, m), m + 1, f"f2[{m}]"), budget)
    report = VerificationReport(m, 2, "full" if full else "index")

    predicted = [[0]] + _as_lists(tuple(a * unit for a in c) for c in theory.cycles)
    observed = _as_lists(engine.cycles)
    report.checks.append(Check(
        "cycle_inventory", predicted, observed,
        counterexample=_first_difference(
            {v for c in predicted for v in c}, {v for c in observed for v in c}),
    ))

    counts = two_digit.cycle_length_counts(m)
    predicted = sorted(t for t, n in counts.items() for _ in range(n))
    observed = sorted(len(c) for c in engine.cycles if c != (0,))
    report.checks.append(Check(
        "cycle_lengths", predicted, observed,
        counterexample=_first_difference(predicted, observed),
    ))

    predicted = sorted(theory.periodic_index_set)
    observed = _to_indexes(engine.cycle_values - {0}, unit)
    report.checks.append(Check(
        "periodic_set", predicted, observed,
        counterexample=_first_difference(predicted, observed),
    ))

    index_cycles = [list(c) for c in engine.cycles if c != (0,)]
    if full:
        index_cycles = [[v // unit for v in c] for c in index_cycles]
        cx = None
        if engine.max_step > theory.max_step_bound:
            cx = {"x": engine.argmax_values[0], "step": engine.max_step}
        report.checks.append(Check(
            "max_step_bound", theory.max_step_bound, engine.max_step, relation="<=", counterexample=cx,
        ))
        report.checks.append(_step_check(two_digit.step_table(m), engine.steps))
        report.notes["max_step_exact"] = engine.max_step
        report.notes["bound_tight"] = engine.max_step == theory.max_step_bound
    report.notes["r"] = theory.r
    report.notes["index_cycles"] = index_cycles
    return report


def verify_three_digit(m: int, full: bool = True, budget: int | None = None) -> VerificationReport:
    """Fixed set, maximum step and per-value steps for three digits in base ``m``."""
    budget = default_budget(3) if budget is None else budget
    theory = three_digit.analyze_base(m)
    q = m * m - 1
    if full:
        engine = _engine(KaprekarMap(m, 3), budget)
        fixed = list(theory.fixed_cycle)
    else:
        engine = _engine(FunctionMap(lambda a: three_digit.f3_index(a, m), m + 1, f"f3[{m}]"), budget)
        fixed = [v // q for v in theory.fixed_cycle]
    report = VerificationReport(m, 3, "full" if full else "index")

    predicted = [[0], fixed]
    observed = _as_lists(engine.cycles)
    report.checks.append(Check(
        "fixed_set", predicted, observed,
        counterexample=_first_difference(
            {v for c in predicted for v in c}, {v for c in observed for v in c}),
    ))
    if full:
        cx = None if engine.max_step == theory.max_step else {"x": engine.argmax_values[0]}
        report.checks.append(Check("max_step", theory.max_step, engine.max_step, counterexample=cx))
        report.checks.append(_step_check(three_digit.step_table(m), engine.steps))
        report.notes["max_step_exact"] = engine.max_step
    report.notes["fixed_digits"] = [
        str(three_digit.index_digits(a, m)) for a in sorted(theory.fixed_indexes)]
    return report


def verify(m: int, digits: int, full: bool = True, budget: int | None = None) -> VerificationReport:
    if digits == 2:
        return verify_two_digit(m, full=full, budget=budget)
    if digits == 3:
        return verify_three_digit(m, full=full, budget=budget)
    raise ValueError(f"no closed form to verify for {digits} digits")


def _verify_args(args):
    return verify(*args)


def verify_range(bases, digits: int, full: bool = True, budget: int | None = None,
                 jobs: int = 1) -> list[VerificationReport]:
    """Verify each base; with ``jobs > 1`` bases run in worker processes, results stay in base order."""
    tasks = [(m, digits, full, budget) for m in bases]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_verify_args, tasks))
    return [verify(*t) for t in tasks]


def scaling_checks(index_cycles: dict[int, list[list[int]]]) -> list[Check]:
    """Bases whose ``m + 1`` share an odd part must have scaled copies of the same cycles.

    Each base is compared with the smallest base of its group: cycles of the
    smaller base multiplied by the power-of-two ratio must be exactly the
    observed cycles of the larger one, which also forces equal periods.
    """
    groups: dict[int, list[int]] = {}
    for m in sorted(index_cycles):
        groups.setdefault(two_digit.odd_part(m + 1), []).append(m)
    checks = []
    for members in groups.values():
        base = members[0]
        for m in members[1:]:
            k = (m + 1) // (base + 1)
            scaled = [[a * k for a in c] for c in index_cycles[base]]
            checks.append(Check(f"scaling {base}->{m}", scaled, index_cycles[m]))
            checks.append(Check(
                f"periods {base}->{m}",
                sorted({len(c) for c in index_cycles[base]}),
                sorted({len(c) for c in index_cycles[m]}),
            ))
    return checks


@dataclass
class SurveyRow:
    m: int
    digits: int
    r: int | None = None
    minimal_periods: list[int] = field(default_factory=list)
    cycle_count: int | None = None
    cycle_sizes: list[int] = field(default_factory=list)
    max_step_exact: int | None = None
    max_step_predicted: int | None = None
    bound_tight: bool | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["error"] is None:
            del d["error"]
        return d


def survey_row(m: int, digits: int, budget: int | None = None) -> SurveyRow:
    """Engine measurements for one base next to the predicted maximum step."""
    if digits not in (2, 3):
        raise ValueError(f"surveys cover 2 or 3 digits, not {digits}")
    budget = default_budget(digits) if budget is None else budget
    try:
        engine = _engine(KaprekarMap(m, digits), budget)
    except BudgetError as exc:
        return SurveyRow(m, digits, error=str(exc))
    sizes = [len(c) for c in engine.cycles if c != (0,)]
    if digits == 2:
        r = two_digit.two_adic_valuation(m + 1)
        predicted = two_digit.max_step_bound(m)
    else:
        r = None
        predicted = three_digit.max_step(m)
    return SurveyRow(
        m=m,
        digits=digits,
        r=r,
        minimal_periods=sorted(set(sizes)),
        cycle_count=len(sizes),
        cycle_sizes=sizes,
        max_step_exact=engine.max_step,
        max_step_predicted=predicted,
        bound_tight=engine.max_step == predicted,
    )


def survey(bases, digits: int, budget: int | None = None) -> list[SurveyRow]:
    return [survey_row(m, digits, budget) for m in bases]
