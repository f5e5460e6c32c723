"""Orbit analysis for self-maps on a finite domain ``{0, ..., size - 1}``.

Single orbits are traced by remembering the first index at which each value
was seen. Whole systems are analysed from a dense successor table: the
cyclic values are the image of ``f^(2^k)`` once that image stops shrinking,
and steps come from pointer jumping towards the cycles.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

from kaprekar.digits import DomainError, check_system, kaprekar_map, kaprekar_table

DEFAULT_BUDGET = 2**30
DEFAULT_TAIL_CAP = 10**6
CHUNK = 2**20


class ClosureError(RuntimeError):
    """The map sent a domain value outside the domain."""


class BudgetError(RuntimeError):
    """The domain is larger than the enumeration budget allows."""


class SelfMap(Protocol):
    size: int

    def __call__(self, x: int) -> int: ...


class KaprekarMap:
    """The routine on ``n``-digit base-``m`` strings."""

    def __init__(self, m: int, n: int):
        check_system(m, n)
        self.m = m
        self.n = n
        self.size = m**n

    def __call__(self, x: int) -> int:
        return kaprekar_map(x, self.m, self.n)

    def table(self, start: int, stop: int) -> np.ndarray:
        return kaprekar_table(self.m, self.n, start, stop)

    def __repr__(self):
        return f"KaprekarMap(m={self.m}, n={self.n})"


class FunctionMap:
    """Wrap a plain callable on ``range(size)``."""

    def __init__(self, func: Callable[[int], int], size: int, name: str = "f"):
        self.func = func
        self.size = size
        self.name = name

    def __call__(self, x: int) -> int:
        return self.func(x)

    def __repr__(self):
        return f"FunctionMap({self.name}, size={self.size})"


@dataclass(frozen=True)
class OrbitReport:
    start: int
    step: int
    period: int
    cycle: tuple[int, ...]
    tail: tuple[int, ...]

    @property
    def trajectory(self) -> tuple[int, ...]:
        return self.tail + self.cycle

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "tail": list(self.tail),
            "cycle": list(self.cycle),
            "step": self.step,
            "period": self.period,
        }


@dataclass(frozen=True)
class SystemReport:
    size: int
    max_step: int
    cycles: tuple[tuple[int, ...], ...]
    argmax_values: tuple[int, ...]
    basin_sizes: tuple[int, ...]
    base: int | None = None
    digits: int | None = None
    # Per-value detail; kept out of equality so reports compare on their summary.
    steps: np.ndarray = field(default=None, compare=False, repr=False)
    cycle_of: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def cycle_values(self) -> set[int]:
        return {x for c in self.cycles for x in c}

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "digits": self.digits,
            "size": self.size,
            "max_step": self.max_step,
            "cycles": [list(c) for c in self.cycles],
            "basin_sizes": list(self.basin_sizes),
            "argmax_values": list(self.argmax_values),
        }


def _apply(f: SelfMap, x: int) -> int:
    y = f(x)
    if not 0 <= y < f.size:
        raise ClosureError(f"{f!r} maps {x} to {y}, outside [0, {f.size})")
    return y


def iterate(f: SelfMap, x: int, t: int) -> int:
    """``f`` applied ``t`` times to ``x``."""
    if not 0 <= x < f.size:
        raise DomainError(f"{x} is not in the domain of {f!r}")
    if t < 0:
        raise DomainError("iteration count must be non-negative")
    for _ in range(t):
        x = _apply(f, x)
    return x


def analyze_orbit(f: SelfMap, x: int, tail_cap: int = DEFAULT_TAIL_CAP) -> OrbitReport:
    """Step, minimal period and cycle of ``x``."""
    if not 0 <= x < f.size:
        raise DomainError(f"{x} is not in the domain of {f!r}")
    seen: dict[int, int] = {}
    path: list[int] = []
    y = x
    while y not in seen:
        if len(path) > tail_cap:
            raise RuntimeError(f"orbit of {x} exceeded {tail_cap} values without closing")
        seen[y] = len(path)
        path.append(y)
        y = _apply(f, y)
    s = seen[y]
    return OrbitReport(
        start=x,
        step=s,
        period=len(path) - s,
        cycle=tuple(path[s:]),
        tail=tuple(path[:s]),
    )


def canonical_cycle(cycle) -> tuple[int, ...]:
    """Rotate so the smallest member comes first, keeping map order."""
    cycle = list(cycle)
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


def successor_table(f: SelfMap, workers: int = 1, chunk: int = CHUNK) -> np.ndarray:
    """Dense array ``succ[x] = f(x)``, built in chunks and merged in domain order."""
    size = f.size
    dtype = np.int32 if size <= 2**31 - 1 else np.int64
    bounds = [(lo, min(lo + chunk, size)) for lo in range(0, size, chunk)]

    if hasattr(f, "table"):
        def build(lo, hi):
            return f.table(lo, hi)
    else:
        def build(lo, hi):
            return np.fromiter((f(x) for x in range(lo, hi)), dtype=np.int64, count=hi - lo)

    succ = np.empty(size, dtype=dtype)

    def fill(bound):
        lo, hi = bound
        part = build(lo, hi)
        bad = np.flatnonzero((part < 0) | (part >= size))
        if len(bad):
            x = lo + int(bad[0])
            raise ClosureError(f"{f!r} maps {x} to {int(part[bad[0]])}, outside [0, {size})")
        succ[lo:hi] = part

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, bounds))
    else:
        for b in bounds:
            fill(b)
    return succ


def _cyclic_mask(succ: np.ndarray) -> np.ndarray:
    g = succ
    mask = np.zeros(len(succ), dtype=bool)
    mask[g] = True
    count = int(mask.sum())
    while True:
        g = g[g]
        mask = np.zeros(len(succ), dtype=bool)
        mask[g] = True
        new = int(mask.sum())
        if new == count:
            return mask
        count = new


def _steps_and_entries(succ: np.ndarray, cyclic: np.ndarray):
    idx = np.arange(len(succ), dtype=succ.dtype)
    dist = (~cyclic).astype(np.int64)
    nxt = np.where(cyclic, idx, succ)
    while True:
        ahead = dist[nxt]
        if not ahead.any():
            return dist, nxt
        dist = dist + ahead
        nxt = nxt[nxt]


def _analyze_table(succ: np.ndarray, **meta) -> SystemReport:
    cyclic = _cyclic_mask(succ)
    steps, entry = _steps_and_entries(succ, cyclic)

    cycle_id = np.full(len(succ), -1, dtype=np.int64)
    cycles = []
    # Ascending scan: the first member met of each cycle is its minimum.
    for c in np.flatnonzero(cyclic).tolist():
        if cycle_id[c] >= 0:
            continue
        members = []
        y = c
        while cycle_id[y] < 0:
            cycle_id[y] = len(cycles)
            members.append(y)
            y = int(succ[y])
        cycles.append(tuple(members))

    cycle_of = cycle_id[entry]
    basins = np.bincount(cycle_of, minlength=len(cycles))
    max_step = int(steps.max())
    return SystemReport(
        size=len(succ),
        max_step=max_step,
        cycles=tuple(cycles),
        argmax_values=tuple(np.flatnonzero(steps == max_step).tolist()),
        basin_sizes=tuple(basins.tolist()),
        steps=steps,
        cycle_of=cycle_of,
        **meta,
    )


def _analyze_orbitwise(f: SelfMap, **meta) -> SystemReport:
    steps = np.empty(f.size, dtype=np.int64)
    found: dict[tuple[int, ...], int] = {}
    cycle_of = np.empty(f.size, dtype=np.int64)
    for x in range(f.size):
        rep = analyze_orbit(f, x)
        steps[x] = rep.step
        cycle_of[x] = found.setdefault(canonical_cycle(rep.cycle), len(found))
    # Renumber cycles by smallest member.
    order = sorted(found, key=lambda c: c[0])
    remap = np.empty(len(order), dtype=np.int64)
    for new, c in enumerate(order):
        remap[found[c]] = new
    cycle_of = remap[cycle_of]
    max_step = int(steps.max())
    return SystemReport(
        size=f.size,
        max_step=max_step,
        cycles=tuple(order),
        argmax_values=tuple(np.flatnonzero(steps == max_step).tolist()),
        basin_sizes=tuple(np.bincount(cycle_of, minlength=len(order)).tolist()),
        steps=steps,
        cycle_of=cycle_of,
        **meta,
    )


def exhaustive_analysis(
    f: SelfMap,
    budget: int = DEFAULT_BUDGET,
    memo: bool = True,
    workers: int = 1,
    chunk: int = CHUNK,
) -> SystemReport:
    """Analyse every value of the domain.

    With ``memo`` (the default) the map is evaluated once per value into a
    dense table; without it each orbit is traced independently, which is
    far slower but shares no state between values. ``workers`` threads
    fill the table in slices of ``chunk`` values; the result does not
    depend on either.
    """
    if f.size > budget:
        raise BudgetError(f"domain of {f.size} states exceeds the enumeration budget of {budget}")
    meta = {"base": getattr(f, "m", None), "digits": getattr(f, "n", None)}
    if not memo:
        return _analyze_orbitwise(f, **meta)
    return _analyze_table(successor_table(f, workers=workers, chunk=chunk), **meta)
