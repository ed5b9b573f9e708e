"""Finite truncations G_N = Z_{m_1} x ... x Z_{m_N} of a Vilenkin group.

Points and spectral indices share one enumeration: ``n = sum_j n_j * M_{j-1}``
with ``M_0 = 1`` and ``M_j = m_1 * ... * m_j``. Digit ``j = 1`` (position 0 in
Python tuples) varies fastest.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

GroupPoint = tuple[int, ...]


class RadixError(ValueError):
    """Invalid radix sequence, point or index."""


@dataclass(frozen=True)
class RadixSequence:
    radices: tuple[int, ...]

    def __post_init__(self):
        if len(self.radices) == 0:
            raise RadixError("radix sequence must be non-empty")
        for j, m in enumerate(self.radices, start=1):
            if int(m) != m or m < 2:
                raise RadixError(f"radix m_{j}={m} is below 2")
        object.__setattr__(self, "radices", tuple(int(m) for m in self.radices))

    @property
    def bound(self) -> int:
        return max(self.radices)

    @property
    def length(self) -> int:
        return len(self.radices)

    @cached_property
    def size(self) -> int:
        """M_N, the number of points of the level-N group."""
        return int(np.prod(self.radices, dtype=object))

    @cached_property
    def block_sizes(self) -> tuple[int, ...]:
        """(M_0, M_1, ..., M_N)."""
        out = [1]
        for m in self.radices:
            out.append(out[-1] * m)
        return tuple(out)

    @property
    def atom_mass(self) -> Fraction:
        return Fraction(1, self.size)

    def __str__(self) -> str:
        return ",".join(str(m) for m in self.radices)

    def index_digits(self, n: int) -> GroupPoint:
        if not 0 <= n < self.size:
            raise RadixError(f"index {n} outside [0, {self.size})")
        digits = []
        for m in self.radices:
            n, d = divmod(n, m)
            digits.append(d)
        return tuple(digits)

    def digits_index(self, digits: Sequence[int]) -> int:
        self.check_point(digits)
        return sum(d * b for d, b in zip(digits, self.block_sizes))

    def check_point(self, x: Sequence[int]) -> None:
        if len(x) != self.length:
            raise RadixError(
                f"point has {len(x)} digits, radix sequence has {self.length}")
        for j, (d, m) in enumerate(zip(x, self.radices), start=1):
            if not 0 <= d < m:
                raise RadixError(f"digit x_{j}={d} outside Z_{m}")

    def digit_table(self) -> np.ndarray:
        """(M_N, N) integer array; row n holds the digits of index n."""
        idx = np.arange(self.size, dtype=np.int64)
        cols = []
        for m in self.radices:
            idx, d = np.divmod(idx, m)
            cols.append(d)
        return np.stack(cols, axis=1)

    def add_indices(self, a, b) -> np.ndarray:
        """Group sum on index arrays (digit-wise addition mod m_j)."""
        return self._combine(np.asarray(a), np.asarray(b), 1)

    def sub_indices(self, a, b) -> np.ndarray:
        return self._combine(np.asarray(a), np.asarray(b), -1)

    def _combine(self, a, b, sign):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        a = a.astype(np.int64)
        b = b.astype(np.int64)
        for m, base in zip(self.radices, self.block_sizes):
            da = (a // base) % m
            db = (b // base) % m
            out += ((da + sign * db) % m) * base
        return out

    def subgroup_mask(self, k: int) -> np.ndarray:
        """Boolean mask of {y : y_1 = ... = y_k = 0}."""
        if not 0 <= k <= self.length:
            raise RadixError(f"subgroup level {k} outside [0, {self.length}]")
        return np.arange(self.size) % self.block_sizes[k] == 0

    def repeat(self, times: int) -> "RadixSequence":
        if times < 1:
            raise RadixError("repeat count must be at least 1")
        return RadixSequence(self.radices * times)


def make_radix_sequence(radices: Sequence[int]) -> RadixSequence:
    return RadixSequence(tuple(radices))


def parse_radices(text: str, repeat: int = 1) -> RadixSequence:
    """Parse "2,3,2" (optionally repeated) into a RadixSequence."""
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise RadixError(f"cannot parse radices {text!r}") from exc
    return make_radix_sequence(values).repeat(repeat)


def group_add(R: RadixSequence, x: GroupPoint, y: GroupPoint) -> GroupPoint:
    R.check_point(x)
    R.check_point(y)
    return tuple((a + b) % m for a, b, m in zip(x, y, R.radices))


def group_neg(R: RadixSequence, x: GroupPoint) -> GroupPoint:
    R.check_point(x)
    return tuple((-a) % m for a, m in zip(x, R.radices))


def zero(R: RadixSequence) -> GroupPoint:
    return (0,) * R.length
