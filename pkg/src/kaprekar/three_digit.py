"""Closed-form analysis of the three-digit routine.

Every image of the routine is ``a * (m^2 - 1)``; on indexes the routine is
``a -> a - 1`` above ``(m + 1) / 2`` and ``a -> m - a`` below it, so orbits
slide down to the middle of ``0..m`` and stop there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kaprekar.digits import DigitVector, DomainError, kaprekar_map, to_digits


def _check_base(m: int) -> None:
    if m < 2:
        raise DomainError(f"base must be at least 2, got {m}")


def _check_value(x: int, m: int) -> None:
    _check_base(m)
    if not 0 <= x < m**3:
        raise DomainError(f"value not representable in 3 digits: {x} (base {m})")


def f3_index(a: int, m: int) -> int:
    _check_base(m)
    if not 0 <= a <= m:
        raise DomainError(f"index {a} outside 0..{m}")
    if a == 0:
        return 0
    # 2a >= m + 1 keeps the threshold exact when m is even.
    return a - 1 if 2 * a >= m + 1 else m - a


def fixed_set(m: int) -> frozenset[int]:
    _check_base(m)
    if m % 2 == 0:
        return frozenset({m // 2})
    return frozenset({(m - 1) // 2, (m + 1) // 2})


def index_digits(a: int, m: int) -> DigitVector:
    """Digits of ``a * (m^2 - 1)``, i.e. ``(a-1, m-1, m-a)`` for ``a > 0``."""
    return to_digits(a * (m * m - 1), m, 3)


def delta(x: int, m: int) -> int:
    """1 when ``x`` still needs a step to become a multiple of ``m^2 - 1``."""
    _check_value(x, m)
    return 0 if x % (m * m - 1) == 0 else 1


def _core(a: int, m: int) -> int:
    # Steps from index a to the fixed set.
    if a == 0 or a in fixed_set(m):
        return 0
    if m % 2 == 0:
        return (abs(2 * a - m - 1) + 1) // 2
    return abs(2 * a - m - 1) // 2


def step_of(x: int, m: int) -> int:
    _check_value(x, m)
    q = m * m - 1
    if x % q == 0:
        return _core(x // q, m)
    return _core(kaprekar_map(x, m, 3) // q, m) + 1


def max_step(m: int) -> int:
    """Largest step over all three-digit values.

    The extremes are index ``m`` (only reachable as a start value) and index
    1 after one normalising step. For ``m >= 4`` this is ``m/2 + 1`` (even)
    or ``(m+1)/2`` (odd); for ``m`` of 2 or 3 index 1 is already fixed.
    """
    _check_base(m)
    return max(_core(m, m), _core(1, m) + 1)


def max_step_formula(m: int) -> int:
    """The parity formula ``m/2 + 1`` / ``(m+1)/2`` without the small-base cases."""
    _check_base(m)
    return m // 2 + 1 if m % 2 == 0 else (m + 1) // 2


def step_table(m: int) -> np.ndarray:
    """``step_of`` for every three-digit value, computed on arrays.

    Non-multiples take their index from the digit spread (largest minus
    smallest digit) rather than from the routine itself.
    """
    _check_base(m)
    q = m * m - 1
    x = np.arange(m**3, dtype=np.int64)
    d0, d1, d2 = x // (m * m), (x // m) % m, x % m
    spread = np.maximum(np.maximum(d0, d1), d2) - np.minimum(np.minimum(d0, d1), d2)
    multiple = x % q == 0
    a = np.where(multiple, x // q, spread)

    dist = np.abs(2 * a - m - 1)
    core = (dist + 1) // 2 if m % 2 == 0 else dist // 2
    on_fixed = np.isin(a, sorted(fixed_set(m))) | (a == 0)
    core = np.where(on_fixed, 0, core)
    return core + (~multiple)


@dataclass(frozen=True)
class ThreeDigitAnalysis:
    m: int
    fixed_indexes: frozenset[int]
    max_step: int

    @property
    def fixed_values(self) -> tuple[int, ...]:
        return tuple(a * (self.m * self.m - 1) for a in sorted(self.fixed_indexes))

    @property
    def fixed_cycle(self) -> tuple[int, ...]:
        """The fixed set as a value cycle, smallest member first."""
        a = min(self.fixed_indexes)
        cycle = [a]
        b = f3_index(a, self.m)
        while b != a:
            cycle.append(b)
            b = f3_index(b, self.m)
        return tuple(i * (self.m * self.m - 1) for i in cycle)


def analyze_base(m: int) -> ThreeDigitAnalysis:
    return ThreeDigitAnalysis(m=m, fixed_indexes=fixed_set(m), max_step=max_step(m))
