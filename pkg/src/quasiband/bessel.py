"""Bessel function J0 without external special-function dependencies."""
from __future__ import annotations

import math

import numpy as np

SWITCH = 8.0


def _series(x: float) -> float:
    # sum_k (-1)^k (x/2)^{2k} / (k!)^2, terms accumulated by ratio
    y = 0.25 * x * x
    term, total, k = 1.0, 1.0, 0
    while True:
        k += 1
        term *= -y / (k * k)
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)) and k > y:
            return total


def _asymptotic(x: float) -> float:
    # Hankel expansion: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4
    p, q = 1.0, 0.0
    t = 1.0
    z = 8.0 * x
    best = math.inf
    for k in range(1, 30):
        # a_k = prod (2i-1)^2 / (k! (8x)^k); P and Q take alternating signs
        t *= -((2 * k - 1) ** 2) / (k * z) if k % 2 else ((2 * k - 1) ** 2) / (k * z)
        if abs(t) > best:
            break
        best = abs(t)
        if k % 2:
            q += t
        else:
            p += t
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def j0_scalar(x: float) -> float:
    x = abs(float(x))
    return _series(x) if x <= SWITCH else _asymptotic(x)


def j0(x):
    arr = np.asarray(x, dtype=float)
    out = np.vectorize(j0_scalar, otypes=[float])(arr)
    return out if out.ndim else float(out)


def j0_integral(x, points: int = 4096):
    """(1/pi) int_0^pi cos(x sin t) dt by the trapezoid rule (independent oracle)."""
    t = np.linspace(0.0, np.pi, points + 1)
    x = np.asarray(x, dtype=float)
    vals = np.cos(x[..., None] * np.sin(t))
    w = np.full(points + 1, np.pi / points)
    w[[0, -1]] *= 0.5
    res = vals @ w / np.pi
    return res if res.ndim else float(res)


def j0_zero(index: int) -> float:
    """index-th positive zero of J0 (1-based), refined by bisection."""
    from scipy.optimize import brentq

    guess = (index - 0.25) * math.pi
    return brentq(j0_scalar, guess - 0.5, guess + 0.5, xtol=1e-15)
