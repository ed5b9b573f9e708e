"""Vilenkin characters, generalized Rademacher functions and Dirichlet kernels.

The character with spectral index ``n`` is ``xi_n(x) = prod_j r_j(x)^{n_j}``
where ``r_j(x) = exp(2 pi i x_j / m_j)``. Phases are accumulated as integers
modulo M_N and turned into a complex number once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .radix import GroupPoint, RadixError, RadixSequence
from .tables import CsvTable


@dataclass(frozen=True, eq=False)
class LevelFunction:
    """A complex-valued function on G_N, stored by point index."""

    radix: RadixSequence
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (self.radix.size,):
            raise ValueError(
                f"expected {self.radix.size} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("function values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, R: RadixSequence, c: complex = 1.0) -> "LevelFunction":
        return cls(R, np.full(R.size, c, dtype=np.complex128))

    @classmethod
    def indicator(cls, R: RadixSequence, points) -> "LevelFunction":
        v = np.zeros(R.size, dtype=np.complex128)
        v[np.asarray(points, dtype=np.int64)] = 1.0
        return cls(R, v)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())

    def translate(self, s: int) -> "LevelFunction":
        """x -> f(x - s)."""
        idx = self.radix.sub_indices(np.arange(self.radix.size), s)
        return LevelFunction(self.radix, self.values[idx])

    def _check(self, other: "LevelFunction") -> None:
        if other.radix != self.radix:
            raise RadixError("functions live on different radix sequences")

    def __add__(self, other):
        self._check(other)
        return LevelFunction(self.radix, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return LevelFunction(self.radix, self.values - other.values)

    def __mul__(self, c):
        return LevelFunction(self.radix, self.values * c)

    __rmul__ = __mul__

    def to_csv(self) -> CsvTable:
        table = CsvTable(["index", "re", "im"])
        for i, z in enumerate(self.values):
            table.append(i, z.real, z.imag)
        return table

    @classmethod
    def from_csv(cls, R: RadixSequence, table: CsvTable) -> "LevelFunction":
        v = np.zeros(R.size, dtype=np.complex128)
        for idx, re, im in table.rows:
            v[int(idx)] = complex(float(re), float(im))
        return cls(R, v)


def roots_of_unity(size: int) -> np.ndarray:
    """exp(2 pi i k / size), exact at quarter turns."""
    k = np.arange(size)
    roots = np.exp(2j * np.pi * k / size)
    exact = {0: 1.0, 1: 1j, 2: -1.0, 3: -1j}
    quarter = (4 * k) % size == 0
    for q in np.flatnonzero(quarter):
        roots[q] = exact[int(4 * q // size)]
    return roots


def phase_index(R: RadixSequence, n, x) -> np.ndarray:
    """sum_j n_j x_j (M_N / m_j) mod M_N for index arrays n, x (broadcast)."""
    n = np.asarray(n, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    M = R.size
    out = np.zeros(np.broadcast(n, x).shape, dtype=np.int64)
    for m, base in zip(R.radices, R.block_sizes):
        out = (out + ((n // base) % m) * ((x // base) % m) * (M // m)) % M
    return out


def rademacher(R: RadixSequence, j: int, x: GroupPoint) -> complex:
    """r_j(x) = exp(2 pi i x_j / m_j), with j counted from 1."""
    if not 1 <= j <= R.length:
        raise RadixError(f"coordinate {j} outside [1, {R.length}]")
    R.check_point(x)
    m = R.radices[j - 1]
    return complex(roots_of_unity(m)[x[j - 1] % m])


def character(R: RadixSequence, n: int, x: GroupPoint) -> complex:
    if not 0 <= n < R.size:
        raise RadixError(f"spectral index {n} outside [0, {R.size})")
    k = int(phase_index(R, n, R.digits_index(x)))
    return complex(roots_of_unity(R.size)[k])


def character_matrix(R: RadixSequence, rows=None) -> np.ndarray:
    """Table chi[n, x] = xi_n(x) for spectral indices ``rows`` (default: all)."""
    n = np.arange(R.size) if rows is None else np.asarray(rows)
    x = np.arange(R.size)
    return roots_of_unity(R.size)[phase_index(R, n[:, None], x[None, :])]


def character_function(R: RadixSequence, n: int) -> LevelFunction:
    if not 0 <= n < R.size:
        raise RadixError(f"spectral index {n} outside [0, {R.size})")
    return LevelFunction(R, character_matrix(R, [n])[0])


def dirichlet_kernel(R: RadixSequence, j: int) -> LevelFunction:
    """D_j = xi_0 + ... + xi_{j-1}."""
    if not 1 <= j <= R.size:
        raise RadixError(f"kernel index {j} outside [1, {R.size}]")
    values = np.zeros(R.size, dtype=np.complex128)
    roots = roots_of_unity(R.size)
    x = np.arange(R.size)
    for i in range(j):
        values += roots[phase_index(R, i, x)]
    return LevelFunction(R, values)
