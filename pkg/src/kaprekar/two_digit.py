"""Closed-form analysis of the two-digit routine.

After at most one application every two-digit value is ``a * (m - 1)`` for
an index ``a`` in ``{0, ..., m}``, and the routine acts on indexes as
``a -> |2a - m - 1|``. Which indexes are periodic, and how long values take
to reach them, is governed by the power of two in ``m + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from kaprekar.digits import DomainError, kaprekar_map


def _check_base(m: int) -> None:
    if m < 2:
        raise DomainError(f"base must be at least 2, got {m}")


def f2_index(a: int, m: int) -> int:
    _check_base(m)
    if not 0 <= a <= m:
        raise DomainError(f"index {a} outside 0..{m}")
    if a == 0:
        return 0
    return abs(2 * a - m - 1)


def two_adic_valuation(k: int) -> int:
    if k <= 0:
        raise DomainError(f"2-adic valuation undefined for {k}")
    return (k & -k).bit_length() - 1


def odd_part(k: int) -> int:
    return k >> two_adic_valuation(k)


@dataclass(frozen=True)
class PeriodSolutionSet:
    m: int
    t: int
    indexes: tuple[int, ...]

    def __contains__(self, a):
        return a in self.indexes

    def __len__(self):
        return len(self.indexes)


def period_solutions(m: int, t: int) -> PeriodSolutionSet:
    """All nonzero ``a`` with ``f2^t(a) = a``, built from ``gcd(m+1, 2^t +- 1)``."""
    _check_base(m)
    if t < 1:
        raise DomainError(f"period must be at least 1, got {t}")
    found = set()
    for g in (gcd(m + 1, 2**t + 1), gcd(m + 1, 2**t - 1)):
        unit = (m + 1) // g
        found.update(xi * unit for xi in range(1, g, 2))
    return PeriodSolutionSet(m, t, tuple(sorted(found)))


def _divisors(k: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= k:
        if k % d == 0:
            small.append(d)
            if d * d != k:
                large.append(k // d)
        d += 1
    return small + large[::-1]


def least_signed_order(d: int) -> int:
    """Least ``t >= 1`` with ``2^t = +-1 (mod d)``, for odd ``d > 1``."""
    if d < 3 or d % 2 == 0:
        raise DomainError(f"need an odd modulus above 1, got {d}")
    p, t = 2 % d, 1
    while p != 1 and p != d - 1:
        p = 2 * p % d
        t += 1
    return t


def minimal_periods(m: int) -> tuple[int, ...]:
    _check_base(m)
    return tuple(sorted({least_signed_order(d) for d in _divisors(m + 1) if d > 1 and d % 2}))


def _totient(k: int) -> int:
    result, p = k, 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


def cycle_length_counts(m: int) -> dict[int, int]:
    """Number of non-trivial index cycles of each length.

    A periodic index ``a`` has order ``d = (m+1) / gcd(a, m+1)``, an odd
    divisor of ``m + 1``; ``phi(d) / 2`` indexes share each ``d`` and all
    have the same minimal period.
    """
    _check_base(m)
    counts: dict[int, int] = {}
    for d in _divisors(m + 1):
        if d > 1 and d % 2:
            t = least_signed_order(d)
            counts[t] = counts.get(t, 0) + _totient(d) // 2
    return {t: n // t for t, n in sorted(counts.items())}


def periodic_indexes(m: int) -> frozenset[int]:
    """Indexes lying on a cycle: those sharing the 2-adic valuation of ``m + 1``."""
    _check_base(m)
    low = (m + 1) & -(m + 1)
    return frozenset(a for a in range(low, m + 1, low) if (a & -a) == low)


def fixed_sets(m: int) -> list[tuple[int, ...]]:
    """Non-trivial index cycles, each from its smallest member, ordered by that member."""
    cycles = []
    seen = set()
    for a in sorted(periodic_indexes(m)):
        if a in seen:
            continue
        cycle = [a]
        b = f2_index(a, m)
        while b != a:
            if len(cycle) > m:
                raise RuntimeError(f"base {m}: index {a} is not on a cycle")
            cycle.append(b)
            b = f2_index(b, m)
        seen.update(cycle)
        cycles.append(tuple(cycle))
    return cycles


def max_step_bound(m: int) -> int:
    _check_base(m)
    return two_adic_valuation(m + 1) + 2


def _initial_index(x: int, m: int) -> tuple[int, int]:
    """Index reached from ``x`` and the steps charged to get there (0 or 1)."""
    q, rem = divmod(x, m - 1)
    if rem == 0 and q <= m:
        return q, 0
    # m^2 - 1 is the one multiple of m - 1 beyond index range; it is a repdigit.
    return kaprekar_map(x, m, 2) // (m - 1), 1


def step_of(x: int, m: int) -> int:
    _check_base(m)
    if not 0 <= x < m * m:
        raise DomainError(f"value not representable in 2 digits: {x} (base {m})")
    a, steps = _initial_index(x, m)
    r = two_adic_valuation(m + 1)
    for _ in range(m + 2):
        if a == 0 or two_adic_valuation(a) == r:
            return steps
        a = f2_index(a, m)
        steps += 1
    raise RuntimeError(f"base {m}: index orbit of {x} never reaches valuation {r}")


def step_table(m: int) -> np.ndarray:
    """``step_of`` for every two-digit value, computed on arrays."""
    _check_base(m)
    x = np.arange(m * m, dtype=np.int64)
    q, rem = np.divmod(x, m - 1)
    normalised = (rem == 0) & (q <= m)
    a = np.where(normalised, q, np.abs(x // m - x % m))
    steps = (~normalised).astype(np.int64)
    low = (m + 1) & -(m + 1)
    for _ in range(m + 2):
        active = (a != 0) & ((a & -a) != low)
        if not active.any():
            return steps
        a = np.where(active, np.abs(2 * a - m - 1), a)
        steps += active
    raise RuntimeError(f"base {m}: some index orbit never reaches the periodic set")


@dataclass(frozen=True)
class BaseAnalysis:
    m: int
    r: int
    minimal_periods: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    max_step_bound: int
    periodic_index_set: frozenset[int]

    @property
    def value_cycles(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(a * (self.m - 1) for a in c) for c in self.cycles)


def analyze_base(m: int) -> BaseAnalysis:
    return BaseAnalysis(
        m=m,
        r=two_adic_valuation(m + 1),
        minimal_periods=minimal_periods(m),
        cycles=tuple(fixed_sets(m)),
        max_step_bound=max_step_bound(m),
        periodic_index_set=periodic_indexes(m),
    )
