"""Fast Vilenkin transform, its quadratic oracle and group convolution.

Normalization: ``fhat(n) = (1/M_N) sum_x f(x) conj(xi_n(x))`` and
``f(x) = sum_n fhat(n) xi_n(x)``. With the 1/M_N also on the convolution
integral, the transform of ``f * k`` is ``fhat * khat`` entrywise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .radix import RadixError, RadixSequence
from .system import LevelFunction, character_matrix
from .tables import CsvTable


@dataclass(frozen=True, eq=False)
class SpectrumVector:
    radix: RadixSequence
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.radix.size,):
            raise ValueError(
                f"expected {self.radix.size} coefficients, got shape {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def delta(cls, R: RadixSequence, n: int) -> "SpectrumVector":
        c = np.zeros(R.size, dtype=np.complex128)
        c[n] = 1.0
        return cls(R, c)

    def to_csv(self) -> CsvTable:
        table = CsvTable(["index", "re", "im"])
        for i, z in enumerate(self.coeffs):
            table.append(i, z.real, z.imag)
        return table


def forward_array(R: RadixSequence, values: np.ndarray) -> np.ndarray:
    """Batched forward transform of rows of a (batch, M_N) array."""
    values = np.atleast_2d(values)
    out = _backend.kernels().stage_transform(values, R.radices, False)
    out /= R.size
    return out


def inverse_array(R: RadixSequence, coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.atleast_2d(coeffs)
    return _backend.kernels().stage_transform(coeffs, R.radices, True)


def forward(f: LevelFunction) -> SpectrumVector:
    return SpectrumVector(f.radix, forward_array(f.radix, f.values)[0])


def inverse(S: SpectrumVector) -> LevelFunction:
    return LevelFunction(S.radix, inverse_array(S.radix, S.coeffs)[0])


def naive_forward(f: LevelFunction) -> SpectrumVector:
    """Direct O(M_N^2) summation of the defining formula."""
    chi = character_matrix(f.radix)
    return SpectrumVector(f.radix, chi.conj() @ f.values / f.radix.size)


def convolve(f: LevelFunction, k: LevelFunction) -> LevelFunction:
    """(f * k)(x) = (1/M_N) sum_y f(y) k(x - y)."""
    if f.radix != k.radix:
        raise RadixError("cannot convolve functions on different radix sequences")
    R = f.radix
    both = forward_array(R, np.stack([f.values, k.values]))
    return LevelFunction(R, inverse_array(R, both[0] * both[1])[0])
