"""Fixed-width radix representation and the general Kaprekar map.

Every value is handled as an exactly ``n``-digit base-``m`` string with
leading zeros kept, so ``999`` in four decimal digits is ``(0, 9, 9, 9)``
and its ascending arrangement is ``0999``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Vectorised tables are int64; larger systems go through the scalar path.
INT64_LIMIT = 2**63


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def check_system(m: int, n: int) -> None:
    if m < 2:
        raise DomainError(f"base must be at least 2, got {m}")
    if n < 1:
        raise DomainError(f"digit count must be at least 1, got {n}")


def _check_value(x: int, m: int, n: int) -> None:
    check_system(m, n)
    if x < 0 or x >= m**n:
        raise DomainError(f"value not representable in {n} digits: {x} (base {m})")


@dataclass(frozen=True)
class DigitVector:
    """A padded ``n``-digit base-``m`` numeral, most significant digit first."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise DomainError(f"base must be at least 2, got {self.base}")
        if not self.digits:
            raise DomainError("a digit vector needs at least one digit")
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        for d in self.digits:
            if not 0 <= d < self.base:
                raise DomainError(f"digit {d} out of range for base {self.base}")

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __str__(self):
        return "(" + ",".join(map(str, self.digits)) + ")"


def to_digits(x: int, m: int, n: int) -> DigitVector:
    _check_value(x, m, n)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        x, out[i] = divmod(x, m)
    return DigitVector(m, tuple(out))


def from_digits(dv: DigitVector) -> int:
    x = 0
    for d in dv.digits:
        x = x * dv.base + d
    return x


def _counting_sort(digits: list[int], m: int) -> list[int]:
    counts = [0] * m
    for d in digits:
        counts[d] += 1
    out = []
    for d, c in enumerate(counts):
        if c:
            out.extend([d] * c)
    return out


def sorted_digits(x: int, m: int, n: int) -> list[int]:
    """Digits of ``x`` (padded to ``n``) in ascending order."""
    digits = []
    for _ in range(n):
        x, d = divmod(x, m)
        digits.append(d)
    # Bucketing pays off only once the digits outnumber the buckets.
    if m <= n:
        return _counting_sort(digits, m)
    digits.sort()
    return digits


def kaprekar_map(x: int, m: int, n: int) -> int:
    """One step of the routine: descending arrangement minus ascending."""
    _check_value(x, m, n)
    asc = sorted_digits(x, m, n)
    lo = hi = 0
    for d in asc:
        lo = lo * m + d
    for d in reversed(asc):
        hi = hi * m + d
    return hi - lo


def is_repdigit(x: int, m: int, n: int) -> bool:
    _check_value(x, m, n)
    first = x % m
    for _ in range(n):
        x, d = divmod(x, m)
        if d != first:
            return False
    return True


def kaprekar_table(m: int, n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """``kaprekar_map`` evaluated on every value in ``[start, stop)`` at once."""
    check_system(m, n)
    size = m**n
    if size > INT64_LIMIT:
        raise DomainError(f"{m}^{n} states exceed the int64 table range")
    stop = size if stop is None else stop
    xs = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(xs), n), dtype=np.int64)
    rest = xs.copy()
    for i in range(n):
        rest, digits[:, i] = np.divmod(rest, m)
    digits.sort(axis=1)
    lo = np.zeros(len(xs), dtype=np.int64)
    hi = np.zeros(len(xs), dtype=np.int64)
    for i in range(n):
        lo = lo * m + digits[:, i]
        hi = hi * m + digits[:, n - 1 - i]
    return hi - lo
