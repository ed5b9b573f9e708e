"""Constructive band approximation h = sum_n a_n chi_{E_n} of a non-negative f.

Bands are G_n = {a_{n-1} < f <= a_n}. Each E_n is a subset of G_n whose mass
a_n mu(E_n) matches the integral of f over G_n up to less than one atom
(an exact match is impossible on a finite atomic space).

Atoms are taken in digit-reversed order, so every coset of every subgroup
{y_1 = ... = y_k = 0} is a contiguous run, and each is filled by the running
floor rule "add x when floor(prefix mass / a_n) grows". Any run then has
an imbalance below one atom, which keeps (f - h) * D_{M_k} small for all k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .operators import OperatorFamily
from .radix import RadixSequence
from .system import LevelFunction


class LevelSequenceExhausted(ValueError):
    """The supplied levels stop below the point where the cutoff criterion holds."""


def digit_reversed_order(R: RadixSequence) -> np.ndarray:
    """Point indices sorted with x_1 most significant."""
    digits = R.digit_table()
    key = np.zeros(R.size, dtype=np.int64)
    for j in range(R.length):
        key = key * R.radices[j] + digits[:, j]
    return np.argsort(key, kind="stable")


def default_levels(f: np.ndarray) -> np.ndarray:
    """a_0 = 0, a_1 = min positive value of f, a_n = 2^{n-1} a_1, up past max f."""
    f = np.asarray(f, dtype=float)
    pos = f[f > 0]
    if pos.size == 0:
        return np.array([0.0, 1.0])
    levels = [0.0, float(pos.min())]
    top = float(pos.max())
    while levels[-1] <= top:
        levels.append(2.0 * levels[-1])
    return np.array(levels)


def _kernel_l1(kernels: Sequence[LevelFunction]) -> float:
    return float(sum(np.mean(np.abs(k.values)) for k in kernels))


def tail_bound(f: np.ndarray, t: float, kernels: Sequence[LevelFunction]) -> float:
    """sum_j ||f chi{f >= t}||_1 ||k_j||_1, the bound on int M(f^t)."""
    f = np.asarray(f, dtype=float)
    return float(np.mean(np.where(f >= t, f, 0.0))) * _kernel_l1(kernels)


def choose_cutoff(f: np.ndarray, kernels: Sequence[LevelFunction], eps: float,
                  levels: Sequence[float]) -> tuple[int, float]:
    """Smallest nu >= 1 with tail_bound(f, a_nu) < eps / 2."""
    levels = np.asarray(levels, dtype=float)
    if levels[0] != 0 or np.any(np.diff(levels) <= 0):
        raise ValueError("levels must start at 0 and increase strictly")
    for nu in range(1, levels.size):
        if tail_bound(f, levels[nu], kernels) < eps / 2:
            return nu, float(levels[nu])
    raise LevelSequenceExhausted(
        f"cutoff criterion not met by level a_{levels.size - 1}={levels[-1]}")


def mass_match(f: np.ndarray, band: np.ndarray, a_n: float,
               order: np.ndarray | None = None):
    """Greedy E_n inside ``band`` with 0 <= sum_{G_n} f - a_n |E_n| < a_n (in atoms).

    Returns (mask of E_n, residual) where the residual is the exact rational
    (integral of f over G_n) - a_n mu(E_n), in measure units.
    """
    f = np.asarray(f, dtype=float)
    band = np.asarray(band, dtype=bool)
    size = f.size
    order = np.arange(size) if order is None else order
    a = Fraction(a_n)
    mask = np.zeros(size, dtype=bool)
    prefix = Fraction(0)
    taken = 0
    for x in order:
        if not band[x]:
            continue
        prefix += Fraction(float(f[x])) / a
        if prefix - taken >= 1:
            mask[x] = True
            taken += 1
    residual = (prefix - taken) * a / size
    return mask, residual


@dataclass
class BandDecomposition:
    levels: list[float]
    bands: list[np.ndarray]
    matched_sets: list[np.ndarray]
    residuals: list[Fraction]
    h: LevelFunction
    nu: int
    measured_integral: float = 0.0
    epsilon: float = 0.0
    slack: float = 0.0
    tail_bound: float = 0.0
    chain_bound: float = 0.0
    passed: bool = False
    extra: dict = field(default_factory=dict)

    def report(self) -> dict:
        return {
            "nu": self.nu,
            "levels": [float(a) for a in self.levels[: self.nu + 1]],
            "residuals": [float(r) for r in self.residuals],
            "measured_integral": self.measured_integral,
            "epsilon": self.epsilon,
            "slack": self.slack,
            "tail_bound": self.tail_bound,
            "chain_bound": self.chain_bound,
            "pass": self.passed,
        }


def lemma1_construct(f: LevelFunction | np.ndarray, kernels: Sequence[LevelFunction],
                     eps: float, levels: Sequence[float] | None = None,
                     R: RadixSequence | None = None) -> BandDecomposition:
    if isinstance(f, LevelFunction):
        R = f.radix
        values = f.values
    else:
        values = np.asarray(f)
        if R is None:
            R = kernels[0].radix
    if np.any(np.abs(values.imag) > 0) or np.any(values.real < 0):
        raise ValueError("f must be real and non-negative")
    if eps <= 0:
        raise ValueError("eps must be positive")
    fr = np.asarray(values.real, dtype=float)
    levels = default_levels(fr) if levels is None else np.asarray(levels, dtype=float)
    nu, _ = choose_cutoff(fr, kernels, eps, levels)

    order = digit_reversed_order(R)
    bands, sets, residuals = [], [], []
    h = np.zeros(R.size)
    for n in range(1, nu + 1):
        band = (fr > levels[n - 1]) & (fr <= levels[n])
        E, res = mass_match(fr, band, levels[n], order)
        bands.append(band)
        sets.append(E)
        residuals.append(res)
        h[E] = levels[n]

    family = OperatorFamily.convolutions(kernels)
    diff = fr - h
    measured = float(np.mean(family.maximal_array(diff)[0]))
    k1 = _kernel_l1(kernels)
    slack = float(sum(residuals)) * k1
    out = BandDecomposition(
        levels=list(levels), bands=bands, matched_sets=sets, residuals=residuals,
        h=LevelFunction(R, h), nu=nu, measured_integral=measured, epsilon=eps,
        slack=slack, tail_bound=tail_bound(fr, levels[nu], kernels),
        chain_bound=float(np.mean(np.abs(diff))) * k1)
    out.passed = measured < eps + slack
    return out
