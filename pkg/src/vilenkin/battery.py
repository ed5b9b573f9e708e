"""Versioned test-function batteries.

Battery v1 has 50 functions for any radix sequence:

* 12 indicators of random sets with |E| = M_N * d for d in {1/M_N, 1/16, 1/4}
* 12 indicators of translated subgroup cosets {y_1 = ... = y_k = 0} + s
* 6 lacunary sums xi_{M_0} + xi_{M_1} + ... + xi_{M_{K-1}}
* 20 spikes t * chi_{atom} with t = 1, 2, 4, ..., 2^19
"""
from __future__ import annotations

import numpy as np

from .radix import RadixSequence
from .system import roots_of_unity, phase_index

BATTERY_VERSION = "v1"


def _lacunary(R: RadixSequence, K: int) -> np.ndarray:
    roots = roots_of_unity(R.size)
    x = np.arange(R.size)
    out = np.zeros(R.size, dtype=np.complex128)
    for k in range(K):
        out += roots[phase_index(R, R.block_sizes[k], x)]
    return out


def battery(R: RadixSequence, seed: int) -> list[tuple[str, np.ndarray]]:
    rng = np.random.default_rng([seed, 1])
    M = R.size
    out = []
    for label, density in (("1/M", 1.0 / M), ("1/16", 1.0 / 16), ("1/4", 1.0 / 4)):
        count = max(1, int(round(density * M)))
        for rep in range(4):
            v = np.zeros(M, dtype=np.complex128)
            v[rng.choice(M, size=count, replace=False)] = 1.0
            out.append((f"ind-{label}-{rep}", v))
    for rep in range(12):
        k = 1 + rep % R.length
        shift = int(rng.integers(M))
        v = np.zeros(M, dtype=np.complex128)
        v[R.add_indices(np.flatnonzero(R.subgroup_mask(k)), shift)] = 1.0
        out.append((f"coset-k{k}-s{shift}", v))
    for i in range(6):
        K = max(1, int(round((i + 1) * R.length / 6)))
        out.append((f"lac-K{K}-{i}", _lacunary(R, K)))
    atom = int(rng.integers(M))
    for e in range(20):
        v = np.zeros(M, dtype=np.complex128)
        v[atom] = 2.0 ** e
        out.append((f"spike-t{2 ** e}", v))
    return out


def nonnegative_battery(R: RadixSequence, seed: int) -> list[tuple[str, np.ndarray]]:
    """Battery v1 with |f| in place of f."""
    return [(fid, np.abs(v)) for fid, v in battery(R, seed)]


def random_nonnegative(R: RadixSequence, seed: int, count: int) -> list[tuple[str, np.ndarray]]:
    """Uniform, exponential and Pareto-tailed random functions."""
    rng = np.random.default_rng([seed, 2])
    out = []
    for i in range(count):
        kind = ("uniform", "exponential", "pareto")[i % 3]
        if kind == "uniform":
            v = rng.random(R.size)
        elif kind == "exponential":
            v = rng.exponential(size=R.size)
        else:
            v = rng.pareto(1.5, size=R.size)
        out.append((f"rand-{kind}-{i}", v))
    return out
