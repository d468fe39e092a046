"""Monotone lattice paths, threshold tables, and the bound dynamic programs.

A two-colour density argument walks a path from the axis boundary of the
integer lattice up to a target cell (k, l).  Each unit step through cell
(a, b) picks up a factor: the threshold t_{a,b} when b was incremented,
its complement 1 - t_{a,b} when a was.  Raising the factor to a
per-cell exponent and multiplying along the path gives the path weight;
the quantity of interest is the minimum weight over all admissible paths,
which a dynamic program computes in O(k*l).

The same table of thresholds also drives a max-form recursion whose value
bounds classical Ramsey numbers; see :func:`ramsey_bound`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .numerics import LogValue

EXPONENT_MODES = ("a", "b", "max")


class TooMany(Exception):
    """Path enumeration would exceed the requested cap."""


class OutOfRange(Exception):
    """Threshold lookup outside the table, or in an undefined column."""


@dataclass(frozen=True)
class LatticePath:
    """An admissible path: a tuple of lattice points (a_i, b_i).

    Admissibility: the path starts on the boundary (a_0 == 1 or b_0 == 1),
    leaves it immediately (a_1 != 1 and b_1 != 1 when a second point
    exists), and each step increments exactly one coordinate by one.
    """

    points: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pts = self.points
        if not pts:
            raise ValueError("a path needs at least one point")
        for a, b in pts:
            if a < 1 or b < 1:
                raise ValueError(f"point ({a}, {b}) leaves the positive lattice")
        a0, b0 = pts[0]
        if a0 != 1 and b0 != 1:
            raise ValueError(f"path must start on the boundary, got ({a0}, {b0})")
        if len(pts) > 1:
            a1, b1 = pts[1]
            if a1 == 1 or b1 == 1:
                raise ValueError(
                    f"second point ({a1}, {b1}) must leave the boundary"
                )
        for (pa, pb), (a, b) in zip(pts, pts[1:]):
            if not ((a == pa + 1 and b == pb) or (a == pa and b == pb + 1)):
                raise ValueError(
                    f"({pa}, {pb}) -> ({a}, {b}) is not a unit step"
                )

    @property
    def endpoint(self) -> tuple[int, int]:
        return self.points[-1]

    def steps(self) -> Iterator[tuple[int, int, bool]]:
        """Yield (a_i, b_i, b_was_incremented) for each step i >= 1."""
        for (pa, _pb), (a, b) in zip(self.points, self.points[1:]):
            yield a, b, a == pa


def _count_paths(k: int, l: int) -> int:
    """Number of admissible paths ending at (k, l), by closed form.

    A path starting at (a0, 1) with 2 <= a0 <= k is forced to (a0, 2) and
    then walks freely to (k, l): binomial(k - a0 + l - 2, l - 2) routes.
    Symmetrically for starts on the other axis; (1, 1) starts reach only
    (1, 1) itself.
    """
    if k == 1 and l == 1:
        return 1
    if k == 1 or l == 1:
        return 0  # cannot leave the boundary along it
    total = 0
    for a0 in range(2, k + 1):
        total += math.comb(k - a0 + l - 2, l - 2)
    for b0 in range(2, l + 1):
        total += math.comb(l - b0 + k - 2, k - 2)
    return total


def enumerate_paths(k: int, l: int, cap: int = 1_000_000) -> list[LatticePath]:
    """All admissible paths to (k, l), sorted by their point sequences.

    Raises :class:`TooMany` when the closed-form count exceeds ``cap``
    before any path is materialised.
    """
    if k < 2 or l < 2:
        raise ValueError("enumeration requires k >= 2 and l >= 2")
    n = _count_paths(k, l)
    if n > cap:
        raise TooMany(f"{n} paths to ({k}, {l}) exceeds the cap of {cap}")

    paths: list[LatticePath] = []

    def extend(prefix: list[tuple[int, int]]) -> None:
        a, b = prefix[-1]
        if a == k and b == l:
            paths.append(LatticePath(tuple(prefix)))
            return
        if a < k:
            prefix.append((a + 1, b))
            extend(prefix)
            prefix.pop()
        if b < l:
            prefix.append((a, b + 1))
            extend(prefix)
            prefix.pop()

    for a0 in range(2, k + 1):
        extend([(a0, 1), (a0, 2)])
    for b0 in range(2, l + 1):
        extend([(1, b0), (2, b0)])
    paths.sort(key=lambda p: p.points)
    return paths


@dataclass(frozen=True)
class ThresholdSequence:
    """A table of red-density thresholds t_{i,j} in (0, 1).

    Entries are stored for the lower wedge j <= i; the upper wedge is
    served by the structural reflection t_{j,i} = 1 - t_{i,j}, which also
    pins the diagonal at exactly 1/2.  Column j == 1 is optional: some
    constructions define it (uniform, Erdos-Szekeres, patched analytic),
    the optimal-recurrence table does not.
    """

    size: int
    provenance: str
    lower: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.size < 2:
            raise ValueError("threshold table needs size >= 2")
        if self.lower.shape != (self.size + 1, self.size + 1):
            raise ValueError("storage array has the wrong shape")
        for i in range(2, self.size + 1):
            row = self.lower[i, 1 : i + 1]
            bad = ~((row > 0.0) & (row < 1.0) | np.isnan(row))
            if np.any(bad):
                raise ValueError(
                    f"thresholds in row {i} leave the open interval (0, 1)"
                )
            if self.lower[i, i] != 0.5:
                raise ValueError("diagonal thresholds must equal 1/2 exactly")

    @classmethod
    def from_function(
        cls,
        size: int,
        fn: Callable[[int, int], float],
        provenance: str = "custom",
        include_column_one: bool = False,
    ) -> "ThresholdSequence":
        """Build a table from fn(i, j), queried only on the strict lower
        wedge 2 <= j < i <= size (plus j == 1 when requested).  The
        diagonal is pinned to 1/2 regardless of fn."""
        lower = np.full((size + 1, size + 1), np.nan)
        for i in range(2, size + 1):
            start = 1 if include_column_one else 2
            for j in range(start, i):
                lower[i, j] = fn(i, j)
            lower[i, i] = 0.5
        return cls(size=size, provenance=provenance, lower=lower)

    @classmethod
    def uniform(cls, size: int) -> "ThresholdSequence":
        return cls.from_function(
            size, lambda i, j: 0.5, provenance="uniform", include_column_one=True
        )

    @classmethod
    def erdos_szekeres(cls, size: int) -> "ThresholdSequence":
        """t_{i,j} = j / (i + j), the split behind the binomial bound."""
        return cls.from_function(
            size,
            lambda i, j: j / (i + j),
            provenance="erdos-szekeres",
            include_column_one=True,
        )

    @property
    def has_column_one(self) -> bool:
        return not math.isnan(float(self.lower[2, 1]))

    def lookup(self, i: int, j: int) -> float:
        """t_{i,j}, reflecting through 1 - t_{j,i} for the upper wedge."""
        if i < 1 or j < 1 or i > self.size or j > self.size:
            raise OutOfRange(f"({i}, {j}) outside table of size {self.size}")
        if j <= i:
            if i < 2:
                raise OutOfRange("t_{1,1} is not defined")
            v = float(self.lower[i, j])
            if math.isnan(v):
                raise OutOfRange(
                    f"column 1 is not defined for the {self.provenance} table"
                )
            return v
        return 1.0 - self.lookup(j, i)


@dataclass(frozen=True)
class BoundTable:
    """A filled DP table, indexed 1 <= k <= rows, 1 <= l <= cols.

    For the minimising modes ("a", "b", "max") the storage holds negLog
    weights; for mode "ramsey" it holds the max-form values directly,
    which stay within float range for every size used here.
    """

    mode: str
    rows: int
    cols: int
    provenance: str
    table: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.mode not in EXPONENT_MODES + ("ramsey",):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.table.shape != (self.rows + 1, self.cols + 1):
            raise ValueError("storage array has the wrong shape")

    def _check(self, k: int, l: int) -> None:
        if not (1 <= k <= self.rows and 1 <= l <= self.cols):
            raise OutOfRange(f"({k}, {l}) outside {self.rows} x {self.cols} table")

    def neglog(self, k: int, l: int) -> float:
        self._check(k, l)
        v = float(self.table[k, l])
        return -math.log(v) if self.mode == "ramsey" else v

    def logvalue(self, k: int, l: int) -> LogValue:
        return LogValue(self.neglog(k, l))

    def value(self, k: int, l: int) -> float:
        self._check(k, l)
        v = float(self.table[k, l])
        return v if self.mode == "ramsey" else math.exp(-v)

    def entries(self) -> Iterator[tuple[int, int, float]]:
        """Yield (k, l, stored entry) in row-major order.

        Minimising modes yield negLog weights, mode "ramsey" yields the
        bound values themselves.
        """
        for k in range(1, self.rows + 1):
            for l in range(1, self.cols + 1):
                yield k, l, float(self.table[k, l])


def _step_exponent(mode: str, a: int, b: int) -> int:
    if mode == "a":
        return a
    if mode == "b":
        return b
    return a if a >= b else b


def path_weight(
    path: LatticePath, thresholds: ThresholdSequence, exponent: str = "max"
) -> LogValue:
    """Product over steps of s_i raised to the per-cell exponent.

    s_i is t_{a_i,b_i} for a b-increment and 1 - t_{a_i,b_i} for an
    a-increment.  A path with no steps has weight exactly 1.
    """
    if exponent not in EXPONENT_MODES:
        raise ValueError(f"unknown exponent mode {exponent!r}")
    neglog = 0.0
    for a, b, b_inc in path.steps():
        t = thresholds.lookup(a, b)
        s = t if b_inc else 1.0 - t
        neglog += _step_exponent(exponent, a, b) * -math.log(s)
    return LogValue(neglog)


def dp_min_weight(
    k: int, l: int, thresholds: ThresholdSequence, exponent: str = "max"
) -> BoundTable:
    """Minimum path weight to every cell (i, j) <= (k, l), as one table.

    Recursion on negLogs: the cheaper (larger-weight) of extending from
    (i, j-1) with factor t^e or from (i-1, j) with factor (1-t)^e, with
    boundary cells fixed at weight 1.  Equal branches prefer the
    b-increment, which matters only for witness reconstruction, never for
    the value.
    """
    if exponent not in EXPONENT_MODES:
        raise ValueError(f"unknown exponent mode {exponent!r}")
    if k < 1 or l < 1:
        raise ValueError("table corner must have k >= 1 and l >= 1")
    if k > thresholds.size or l > thresholds.size:
        raise OutOfRange(
            f"({k}, {l}) needs thresholds beyond size {thresholds.size}"
        )
    neg = np.zeros((k + 1, l + 1))
    for i in range(2, k + 1):
        for j in range(2, l + 1):
            t = thresholds.lookup(i, j)
            e = _step_exponent(exponent, i, j)
            from_b = e * -math.log(t) + neg[i, j - 1]
            from_a = e * -math.log(1.0 - t) + neg[i - 1, j]
            # min weight == max negLog
            neg[i, j] = from_b if from_b >= from_a else from_a
    return BoundTable(
        mode=exponent,
        rows=k,
        cols=l,
        provenance=thresholds.provenance,
        table=neg,
    )


def ramsey_table(k: int, l: int, thresholds: ThresholdSequence) -> BoundTable:
    """Max-form companion table: R_{i,j} = max(R_{i,j-1}/t, R_{i-1,j}/(1-t))
    with boundary 1.  Computed in plain floats, exact for dyadic thresholds."""
    if k < 1 or l < 1:
        raise ValueError("table corner must have k >= 1 and l >= 1")
    if k > thresholds.size or l > thresholds.size:
        raise OutOfRange(
            f"({k}, {l}) needs thresholds beyond size {thresholds.size}"
        )
    vals = np.ones((k + 1, l + 1))
    for i in range(2, k + 1):
        for j in range(2, l + 1):
            t = thresholds.lookup(i, j)
            vals[i, j] = max(vals[i, j - 1] / t, vals[i - 1, j] / (1.0 - t))
    return BoundTable(
        mode="ramsey",
        rows=k,
        cols=l,
        provenance=thresholds.provenance,
        table=vals,
    )


def ramsey_bound(k: int, l: int, thresholds: ThresholdSequence) -> float:
    """The max-form bound at the corner cell (k, l)."""
    return ramsey_table(k, l, thresholds).value(k, l)
