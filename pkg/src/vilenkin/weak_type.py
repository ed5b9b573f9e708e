"""Restricted weak-type constants, growth-law fits and generalized weak-type checks.

For a set E the restricted weak-type p constant of the maximal operator Mf is

    sup_{lam > 0} lam^p mu({M chi_E > lam}) / mu(E).

On a finite group M chi_E takes finitely many values, and the supremum is
reached as lam increases to one of them, so it is evaluated exactly as the
maximum over distinct values v of v^p mu({M chi_E >= v}) / mu(E).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .operators import OperatorFamily
from .orlicz import PhiFunction

# candidate sets evaluated per batch
_BATCH = 512


def sup_ratio(g: np.ndarray, set_sizes: np.ndarray, p: float):
    """Per row of g: max_v v^p #{g >= v} / |E|, with the maximizing v and count."""
    g = np.atleast_2d(g)
    desc = -np.sort(-g, axis=1)
    ranks = np.arange(1, g.shape[1] + 1)
    # ties: the last position of a tied run carries the full count #{g >= v}
    vals = desc ** p * ranks / np.asarray(set_sizes, dtype=float)[:, None]
    best = np.argmax(vals, axis=1)
    rows = np.arange(g.shape[0])
    return vals[rows, best], desc[rows, best], best + 1


def _as_mask(size: int, E) -> np.ndarray:
    E = np.asarray(E)
    if E.dtype == bool:
        if E.shape != (size,):
            raise ValueError("boolean set mask has the wrong length")
        return E.copy()
    mask = np.zeros(size, dtype=bool)
    mask[E.astype(np.int64)] = True
    return mask


def restricted_constant(family: OperatorFamily, E, p: float) -> float:
    if p < 1:
        raise ValueError("exponent p must be at least 1")
    mask = _as_mask(family.radix.size, E)
    if not mask.any():
        raise ValueError("set E must be non-empty")
    g = family.maximal_array(mask.astype(np.complex128))
    return float(sup_ratio(g, [mask.sum()], p)[0][0])


def _best_over_batches(family, masks_iter, p_grid):
    p_grid = list(p_grid)
    best = [(-math.inf, None, 0) for _ in p_grid]
    for masks in masks_iter:
        g = family.maximal_array(masks.astype(np.complex128))
        sizes = masks.sum(axis=1)
        for k, p in enumerate(p_grid):
            vals, _, counts = sup_ratio(g, sizes, p)
            i = int(np.argmax(vals))
            if vals[i] > best[k][0]:
                best[k] = (float(vals[i]), masks[i].copy(), int(counts[i]))
    return best


def exhaustive_restricted(family: OperatorFamily, p_grid: Sequence[float],
                          batch: int = 4096):
    """Exact maximum over every non-empty E of G_N (feasible for M_N <= 20).

    Returns a list of (constant, witness mask, witness level-set count) per p.
    """
    size = family.radix.size
    if size > 20:
        raise ValueError(f"exhaustive enumeration over 2^{size} sets is infeasible")
    bits = np.arange(size, dtype=np.int64)
    total = 1 << size

    def batches():
        for start in range(1, total, batch):
            codes = np.arange(start, min(start + batch, total), dtype=np.int64)
            yield ((codes[:, None] >> bits[None, :]) & 1).astype(bool)

    return _best_over_batches(family, batches(), p_grid)


def propose_set(family: OperatorFamily, seed: int, index: int) -> np.ndarray:
    """Candidate set number ``index``; index 0 is the whole group.

    Proposals cycle through random subsets of fixed density, translated
    cosets of the subgroups {y_1 = ... = y_k = 0}, and singletons.
    """
    R = family.radix
    size = R.size
    mask = np.zeros(size, dtype=bool)
    if index == 0:
        mask[:] = True
        return mask
    rng = np.random.default_rng([seed, index])
    kind = index % 3
    if kind == 1:
        # sparse sets of a few atoms probe small levels of the maximal function
        density = rng.choice([2.0 / size, 4.0 / size, 8.0 / size,
                              1.0 / 16, 1.0 / 4, 1.0 / 2])
        mask = rng.random(size) < density
        if not mask.any():
            mask[rng.integers(size)] = True
    elif kind == 2:
        k = int(rng.integers(1, R.length + 1))
        shift = int(rng.integers(size))
        coset = R.add_indices(np.flatnonzero(R.subgroup_mask(k)), shift)
        mask[coset] = True
    else:
        mask[rng.integers(size)] = True
    return mask


def search_restricted(family: OperatorFamily, p_grid: Sequence[float],
                      budget: int, seed: int):
    """Randomized lower bounds on the restricted constants for every p.

    The same candidate sets serve every p. Returns (constant, mask, count) per p.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")

    def batches():
        for start in range(0, budget, _BATCH):
            stop = min(start + _BATCH, budget)
            yield np.stack([propose_set(family, seed, i) for i in range(start, stop)])

    return _best_over_batches(family, batches(), p_grid)


def restricted_constant_search(family: OperatorFamily, p: float, budget: int, seed: int):
    const, mask, _ = search_restricted(family, [p], budget, seed)[0]
    return np.flatnonzero(mask), const


@dataclass
class WeakTypeFit:
    """log C_p ~ m p (log C - log(p - 1)), fitted by linear least squares."""

    p_grid: list[float]
    constants: list[float]
    fitted_C: float
    fitted_m: float
    r: float
    residual: float
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {"C": self.fitted_C, "m": self.fitted_m, "r": self.r,
                "residual": self.residual, "degenerate": self.degenerate,
                "p_grid": list(self.p_grid), "constants": list(self.constants)}


def fit_hm(p_grid: Sequence[float], constants: Sequence[float],
           r: float | None = None) -> WeakTypeFit:
    p = np.asarray(p_grid, dtype=float)
    c = np.asarray(constants, dtype=float)
    if p.size < 3 or np.unique(p).size < 3:
        raise ValueError("need at least 3 distinct exponents")
    if p.shape != c.shape:
        raise ValueError("grid and constants differ in length")
    if np.any(p <= 1):
        raise ValueError("exponents must exceed 1")
    if np.any(~np.isfinite(c)) or np.any(c <= 0):
        raise ValueError("constants must be positive and finite")
    y = np.log(c)
    # log C_p = (m log C) p - m p log(p-1): linear in (m log C, m)
    design = np.column_stack([p, -p * np.log(p - 1)])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    degenerate = False
    if b <= 1e-9:
        degenerate = True
        b = 0.0
        a = float(np.dot(p, y) / np.dot(p, p))
        resid = y - a * p
        fitted_C = 1.0
    else:
        resid = y - design @ np.array([a, b])
        fitted_C = float(np.exp(a / b))
    residual = float(np.sqrt(np.mean(resid ** 2)))
    return WeakTypeFit(list(map(float, p)), list(map(float, c)), fitted_C, float(b),
                       float(p.max()) if r is None else r, residual, degenerate)


@dataclass
class GeneralizedRow:
    epsilon: float
    C: float
    worst_f_id: str
    worst_lambda: float
    margin: float


@dataclass
class GeneralizedWeakTable:
    rows: list[GeneralizedRow] = field(default_factory=list)

    @property
    def constants(self) -> list[float]:
        return [r.C for r in self.rows]

    def min_margin(self) -> float:
        return min(r.margin for r in self.rows)


def _ceil_float(x: Fraction) -> float:
    f = float(x)
    if Fraction(f) < x:
        f = float(np.nextafter(f, math.inf))
    return f


def generalized_weak_check(family: OperatorFamily, phi_fn: PhiFunction,
                           tests: Iterable[tuple[str, np.ndarray]],
                           eps_grid: Sequence[float],
                           lam_grid: Sequence[float]) -> GeneralizedWeakTable:
    """Smallest C(eps) with mu({Mf > lam}) <= eps + C int phi(|f|/lam) on all pairs.

    Margins eps + C I - mu are evaluated in exact rational arithmetic on the
    floating inputs, and C is rounded up, so every reported margin is >= 0.
    """
    size = family.radix.size
    if any(e < 0 for e in eps_grid):
        raise ValueError("epsilon values must be non-negative")
    if any(lam <= 0 for lam in lam_grid):
        raise ValueError("lambda values must be positive")
    pairs = []
    for f_id, values in tests:
        values = np.asarray(values, dtype=np.complex128)
        mf = family.maximal_array(values)[0]
        absf = np.abs(values)
        for lam in lam_grid:
            count = int(np.count_nonzero(mf > lam))
            integral = float(np.mean(phi_fn(absf / lam)))
            pairs.append((f_id, float(lam), Fraction(count, size), Fraction(integral)))
    if not pairs:
        raise ValueError("empty test battery")
    table = GeneralizedWeakTable()
    for eps in eps_grid:
        e = Fraction(float(eps))
        best = Fraction(0)
        worst = pairs[0]
        unbounded = False
        for pair in pairs:
            _, _, mu, integral = pair
            excess = mu - e
            if excess <= 0:
                continue
            if integral == 0:
                unbounded = True
                worst = pair
                break
            ratio = excess / integral
            if ratio > best:
                best, worst = ratio, pair
        if unbounded:
            table.rows.append(GeneralizedRow(float(eps), math.inf, worst[0], worst[1],
                                             -math.inf))
            continue
        C = _ceil_float(best)
        Cf = Fraction(C)
        margin = min(e + Cf * integral - mu for _, _, mu, integral in pairs)
        table.rows.append(GeneralizedRow(float(eps), C, worst[0], worst[1], float(margin)))
    return table


def strong_type_estimate(family: OperatorFamily, p: float,
                         tests: Iterable[np.ndarray]) -> float:
    """max over the battery of ||Mf||_p / ||f||_p (an empirical lower bound)."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    best = 0.0
    for values in tests:
        values = np.asarray(values, dtype=np.complex128)
        norm_f = np.mean(np.abs(values) ** p) ** (1 / p)
        if norm_f == 0:
            raise ValueError("zero function in the test battery")
        mf = family.maximal_array(values)[0]
        best = max(best, float(np.mean(mf ** p) ** (1 / p) / norm_f))
    return best
