"""The Young-type functions phi_m and Orlicz-class integrals on G_N.

Logarithms are base 2 and ``log+ u = max(0, log2 u)`` with ``log+ 0 = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .system import LevelFunction


def log_plus(u):
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("log+ is defined for non-negative arguments only")
    with np.errstate(divide="ignore"):
        out = np.where(u > 1.0, np.log2(np.where(u > 1.0, u, 1.0)), 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PhiFunction:
    """phi(u) = u (1 + log+ u)^m (1 + log+ log+ log+ u).

    ``iterated=False`` drops the triple-log factor; ``PhiFunction.linear()``
    is phi(u) = u.
    """

    m: float = 1.0
    iterated: bool = True

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("phi exponent m must be non-negative")

    @classmethod
    def linear(cls) -> "PhiFunction":
        return cls(0.0, iterated=False)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0):
            raise ValueError("phi is defined for non-negative arguments only")
        lp = log_plus(u)
        out = u * (1.0 + lp) ** self.m
        if self.iterated:
            out = out * (1.0 + log_plus(log_plus(lp)))
        return out if out.ndim else float(out)


def phi(m: float, u):
    return PhiFunction(m)(u)


def orlicz_integral(f: LevelFunction | np.ndarray, phi_fn: PhiFunction) -> float:
    """Haar integral of phi(|f|)."""
    values = f.values if isinstance(f, LevelFunction) else np.asarray(f)
    return float(np.mean(phi_fn(np.abs(values))))


def delta2_estimate(phi_fn: PhiFunction, u_max: float, samples: int = 4096) -> float:
    """max of phi(2u)/phi(u) over a log-spaced grid on [1, u_max]."""
    if u_max <= 1:
        raise ValueError("u_max must exceed 1")
    u = np.geomspace(1.0, u_max, samples)
    return float(np.max(phi_fn(2 * u) / phi_fn(u)))


def truncate(f: LevelFunction, t: float, side: str = "below") -> LevelFunction:
    """Lower part f chi{|f| < t} (side="below") or upper part f chi{|f| >= t}."""
    if t <= 0:
        raise ValueError("truncation level must be positive")
    mask = np.abs(f.values) < t
    if side == "above":
        mask = ~mask
    elif side != "below":
        raise ValueError(f"side must be 'below' or 'above', got {side!r}")
    return LevelFunction(f.radix, np.where(mask, f.values, 0))


def phi_dense_approx(f: LevelFunction, phi_fn: PhiFunction, eps: float):
    """Bounded h = f chi{|f| < t}, t the first level on 1, 2, 4, ... with
    orlicz_integral(f - h) < eps. Returns (h, t)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    t = 1.0
    while True:
        upper = truncate(f, t, "above")
        if orlicz_integral(upper, phi_fn) < eps:
            return truncate(f, t, "below"), t
        t *= 2.0
