"""Closed-form two-level Floquet solutions used as the engine's oracle.

Units: energies in hbar*omega, time tau = omega*t, period 2*pi.
Circular drive: H = (w0/2) sz + (c/2)(sx cos tau + sy sin tau), c = mu*F/(hbar omega).
Linear drive:   H = (w0/2) sz + c sx cos tau.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import TWO_PI, Generator, MonodromyMatrix, fold, make_monodromy

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class TwoLevelConfig:
    omega0_over_omega: float
    coupling_over_omega: float
    polarization: str = "circular"

    def __post_init__(self) -> None:
        if not self.omega0_over_omega > 0:
            raise ValueError("omega0/omega must be positive")
        if not self.coupling_over_omega >= 0:
            raise ValueError("coupling must be non-negative")
        if self.polarization not in ("circular", "linear"):
            raise ValueError("polarization must be 'circular' or 'linear'")


def generalized_rabi(cfg: TwoLevelConfig) -> float:
    return float(np.hypot(cfg.omega0_over_omega - 1.0, cfg.coupling_over_omega))


def rwa_quasienergies(cfg: TwoLevelConfig, folded: bool = True) -> tuple[float, float]:
    om = generalized_rabi(cfg)
    ep, em = 0.5 * (1.0 + om), 0.5 * (1.0 - om)
    return (fold(ep), fold(em)) if folded else (ep, em)


def rotating_frame_operator(cfg: TwoLevelConfig) -> np.ndarray:
    """Time-independent G_c = (1/2) + (1/2)(w0 - 1) sz + (c/2) sx, in hbar*omega.

    Includes the hbar*omega/2 offset from P(t) = exp(-i tau (1 + sz)/2).
    """
    return 0.5 * ID + 0.5 * (cfg.omega0_over_omega - 1.0) * SZ + 0.5 * cfg.coupling_over_omega * SX


def circular_monodromy(cfg: TwoLevelConfig) -> MonodromyMatrix:
    # exp(-i 2 pi G) with G = g0 + n.sigma, via the Pauli rotation formula
    g = rotating_frame_operator(cfg)
    g0 = 0.5 * np.trace(g).real
    nx, nz = 0.5 * cfg.coupling_over_omega, 0.5 * (cfg.omega0_over_omega - 1.0)
    r = np.hypot(nx, nz)
    theta = TWO_PI * r
    if r > 0:
        rot = np.cos(theta) * ID - 1j * np.sin(theta) * (nx * SX + nz * SZ) / r
    else:
        rot = ID.copy()
    return make_monodromy(np.exp(-1j * TWO_PI * g0) * rot, TWO_PI)


def circular_generator(cfg: TwoLevelConfig) -> Generator:
    c = cfg.coupling_over_omega
    return Generator(0.5 * cfg.omega0_over_omega * SZ, ((np.cos, 0.5 * c * SX), (np.sin, 0.5 * c * SY)))


def linear_generator(cfg: TwoLevelConfig) -> Generator:
    return Generator(0.5 * cfg.omega0_over_omega * SZ, ((np.cos, cfg.coupling_over_omega * SX),))


def generator(cfg: TwoLevelConfig) -> Generator:
    return circular_generator(cfg) if cfg.polarization == "circular" else linear_generator(cfg)
