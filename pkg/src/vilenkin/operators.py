"""Partial sums, maximal operators, exceptional sets and distribution functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .radix import RadixError, RadixSequence
from .system import LevelFunction
from .tables import CsvTable
from .transform import forward_array, inverse_array

PARTIAL_SUMS = "partial_sums"
CONVOLUTIONS = "convolutions"


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    """A finite family (T_j); its maximal operator is sup_j |T_j f|.

    ``partial_sums`` uses T_j = S_j for j in ``indices``; ``convolutions``
    uses T_j f = f * k_j. ``scale`` multiplies every operator.
    """

    radix: RadixSequence
    kind: str
    indices: tuple[int, ...] = ()
    kernels: tuple[LevelFunction, ...] = ()
    scale: complex = 1.0
    _spectra: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == PARTIAL_SUMS:
            if not self.indices:
                raise ValueError("partial-sum family needs a non-empty index set")
            idx = tuple(sorted(set(int(j) for j in self.indices)))
            if idx[0] < 1 or idx[-1] > self.radix.size:
                raise ValueError(f"partial-sum indices must lie in [1, {self.radix.size}]")
            object.__setattr__(self, "indices", idx)
        elif self.kind == CONVOLUTIONS:
            if not self.kernels:
                raise ValueError("convolution family needs at least one kernel")
            for k in self.kernels:
                if k.radix != self.radix:
                    raise RadixError("all kernels must share the radix sequence")
            spectra = forward_array(self.radix, np.stack([k.values for k in self.kernels]))
            object.__setattr__(self, "_spectra", spectra)
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")

    @classmethod
    def partial_sums(cls, R: RadixSequence, J: Iterable[int] | None = None):
        J = range(1, R.size + 1) if J is None else J
        return cls(R, PARTIAL_SUMS, indices=tuple(J))

    @classmethod
    def convolutions(cls, kernels: Sequence[LevelFunction]):
        kernels = tuple(kernels)
        if not kernels:
            raise ValueError("convolution family needs at least one kernel")
        return cls(kernels[0].radix, CONVOLUTIONS, kernels=kernels)

    @classmethod
    def identity(cls, R: RadixSequence, scale: complex = 1.0):
        """The single operator f -> scale * f, as convolution with M_N * delta_0."""
        delta = np.zeros(R.size, dtype=np.complex128)
        delta[0] = R.size
        return cls(R, CONVOLUTIONS, kernels=(LevelFunction(R, delta),), scale=scale)

    def scaled(self, c: complex) -> "OperatorFamily":
        return OperatorFamily(self.radix, self.kind, self.indices, self.kernels,
                              self.scale * c)

    def __len__(self):
        return len(self.indices) if self.kind == PARTIAL_SUMS else len(self.kernels)

    def jflag(self) -> np.ndarray:
        flag = np.zeros(self.radix.size + 1, dtype=bool)
        flag[list(self.indices)] = True
        return flag

    def apply_all(self, values: np.ndarray) -> np.ndarray:
        """Every T_j f for one function; shape (len(family), M_N). Reference path."""
        R = self.radix
        fhat = forward_array(R, values)[0]
        if self.kind == PARTIAL_SUMS:
            coeffs = np.zeros((len(self.indices), R.size), dtype=np.complex128)
            for row, j in enumerate(self.indices):
                coeffs[row, :j] = fhat[:j]
        else:
            coeffs = fhat[None, :] * self._spectra
        return self.scale * inverse_array(R, coeffs)

    def maximal_array(self, values: np.ndarray, subtract_input: bool = False) -> np.ndarray:
        """Batched sup_j |T_j f - [f]| for the rows of a (batch, M_N) array."""
        R = self.radix
        values = np.atleast_2d(np.asarray(values, dtype=np.complex128))
        fhat = forward_array(R, values)
        if self.kind == PARTIAL_SUMS and self.scale == 1.0:
            flag = self.jflag()
            if subtract_input:
                # S_{M_N} f = f exactly
                flag[R.size] = False
                return _backend.kernels().prefix_max(fhat, R.radices, flag, values)
            return _backend.kernels().prefix_max(fhat, R.radices, flag)
        if self.kind == PARTIAL_SUMS:
            out = abs(self.scale) * _backend.kernels().prefix_max(
                fhat, R.radices, self.jflag(),
                values / self.scale if subtract_input else None)
            return out
        out = np.zeros(values.shape)
        for spec in self._spectra:
            t = self.scale * inverse_array(R, fhat * spec[None, :])
            if subtract_input:
                t = t - values
            np.maximum(out, np.abs(t), out=out)
        return out


def partial_sum(f: LevelFunction, j: int) -> LevelFunction:
    """S_j f = sum_{i<j} fhat(i) xi_i."""
    R = f.radix
    if not 1 <= j <= R.size:
        raise RadixError(f"partial-sum index {j} outside [1, {R.size}]")
    if j == R.size:
        return LevelFunction(R, f.values)
    c = forward_array(R, f.values)[0]
    c[j:] = 0
    return LevelFunction(R, inverse_array(R, c)[0])


def maximal(f: LevelFunction, family: OperatorFamily) -> LevelFunction:
    if f.radix != family.radix:
        raise RadixError("function and family live on different radix sequences")
    return LevelFunction(f.radix, family.maximal_array(f.values)[0])


def deviation(f: LevelFunction, J: Iterable[int]) -> np.ndarray:
    """max_{j in J} |S_j f(x) - f(x)| for every x."""
    fam = OperatorFamily.partial_sums(f.radix, J)
    return fam.maximal_array(f.values, subtract_input=True)[0]


def exceptional_set(f: LevelFunction, lam: float, J: Iterable[int]):
    """Points where max_{j in J} |S_j f - f| exceeds ``lam``, and their measure."""
    if lam <= 0:
        raise ValueError("threshold must be positive")
    points = np.flatnonzero(deviation(f, J) > lam)
    return points, Fraction(points.size, f.radix.size)


@dataclass(frozen=True)
class MeasureReport:
    """mu({|g| >= v}) at the distinct values v of |g|, in atom counts."""

    thresholds: tuple[float, ...]
    counts: tuple[int, ...]
    size: int

    @property
    def measures(self) -> list[Fraction]:
        return [Fraction(c, self.size) for c in self.counts]

    def to_csv(self) -> CsvTable:
        table = CsvTable(["lambda", "measure"])
        for v, m in zip(self.thresholds, self.measures):
            table.append(v, m)
        return table


def distribution(g: LevelFunction | np.ndarray) -> MeasureReport:
    values = np.abs(g.values if isinstance(g, LevelFunction) else np.asarray(g))
    size = values.size
    levels, counts = np.unique(values, return_counts=True)
    at_least = np.cumsum(counts[::-1])[::-1]
    return MeasureReport(tuple(float(v) for v in levels),
                         tuple(int(c) for c in at_least), size)


def exceedance_count(values: np.ndarray, lam: float) -> int:
    return int(np.count_nonzero(np.abs(values) > lam))
