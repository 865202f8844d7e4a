"""Independent Mathieu characteristic values from continued fractions.

Used only as ground truth for the diagonalization path. Convention:
y'' + (a - 2 q cos 2z) y = 0.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

_DEPTH = 80


def _tail(a: float, q: float, squares: list[int]) -> float:
    # q^2 / (a - s0 - q^2 / (a - s1 - ...)), evaluated bottom-up
    t = 0.0
    for s in reversed(squares):
        t = q * q / (a - s - t)
    return t


def _first_root(f, lo: float, hi: float, samples: int = 4000) -> float:
    # Between poles f increases; poles are downward jumps. The first upward
    # sign change is the lowest root.
    xs = np.linspace(lo, hi, samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        ys = np.array([f(x) for x in xs])
    for i in range(samples - 1):
        if ys[i] < 0.0 <= ys[i + 1]:
            return brentq(f, xs[i], xs[i + 1], xtol=1e-15, rtol=1e-15)
    raise ArithmeticError("no characteristic value found in bracket")


def a0(q: float) -> float:
    """Ground even characteristic value a_0(q)."""
    if q == 0:
        return 0.0
    sq = [(2 * r) ** 2 for r in range(1, _DEPTH)]
    return _first_root(lambda a: a - 2.0 * _tail(a, q, sq), -2.0 * q - 2.0, 0.0)


def b1(q: float) -> float:
    """Lowest odd characteristic value b_1(q)."""
    sq = [(2 * r + 1) ** 2 for r in range(1, _DEPTH)]
    return _first_root(lambda a: a - 1.0 + q - _tail(a, q, sq), -2.0 * q - 1.0, 9.0)


def a1(q: float) -> float:
    sq = [(2 * r + 1) ** 2 for r in range(1, _DEPTH)]
    return _first_root(lambda a: a - 1.0 - q - _tail(a, q, sq), -2.0 * q - 1.0, 9.0)


def b2(q: float) -> float:
    sq = [(2 * r + 2) ** 2 for r in range(1, _DEPTH)]
    return _first_root(lambda a: a - 4.0 - _tail(a, q, sq), -2.0 * q, 16.0)
