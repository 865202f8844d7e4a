"""Stationary Bloch bands of the cosine lattice in recoil units."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .basis import (
    BasisSpec,
    HermitianKind,
    OperatorMatrix,
    build_cosine_matrix,
    build_momentum_matrix,
    build_second_derivative_matrix,
)

DEFAULT_K_GRID = np.linspace(-1.0, 1.0, 201)


class ConvergenceError(RuntimeError):
    pass


class OutOfRangeError(ValueError):
    pass


@dataclass(frozen=True)
class StaticLatticeConfig:
    v0_over_er: float
    n_basis: int = 64

    def __post_init__(self) -> None:
        if not self.v0_over_er >= 0:
            raise ValueError("lattice depth must be non-negative")
        BasisSpec(self.n_basis)

    @property
    def q(self) -> float:
        return self.v0_over_er / 4.0


@dataclass(frozen=True)
class BandDispersion:
    k_grid: np.ndarray
    energies: np.ndarray  # shape (n_bands, len(k_grid))
    n_basis_used: int = 0

    @property
    def n_bands(self) -> int:
        return self.energies.shape[0]


@dataclass(frozen=True)
class MathieuChart:
    q_grid: np.ndarray
    a_values: np.ndarray  # (len(q), r_max+1); a_r
    b_values: np.ndarray  # (len(q), r_max+1); b_0 is undefined (nan)


@dataclass(frozen=True)
class TableSummary:
    v0_over_er: float
    w0: float
    gap01: float
    w1: float


def _static_parts(n_basis: int):
    spec = BasisSpec(n_basis)
    return (
        build_second_derivative_matrix(spec).entries,
        build_momentum_matrix(spec).entries,
        build_cosine_matrix(spec).entries,
    )


def bloch_hamiltonian_matrix(cfg: StaticLatticeConfig, k_over_kL: float) -> OperatorMatrix:
    d2, p, c = _static_parts(cfg.n_basis)
    h = d2 + k_over_kL**2 * np.eye(cfg.n_basis) + 0.5 * cfg.v0_over_er * c + 2.0 * k_over_kL * p
    return OperatorMatrix(h.astype(complex), HermitianKind.HERMITIAN)


def _levels(cfg: StaticLatticeConfig, k: float, n_bands: int) -> np.ndarray:
    return np.linalg.eigvalsh(bloch_hamiltonian_matrix(cfg, k).entries)[:n_bands]


def compute_band_dispersion(
    cfg: StaticLatticeConfig,
    k_grid=DEFAULT_K_GRID,
    n_bands: int = 3,
    tol: float = 1e-8,
    max_doublings: int = 3,
) -> BandDispersion:
    k_grid = np.asarray(k_grid, dtype=float)
    if np.any(np.abs(k_grid) > 1.0 + 1e-12):
        raise ValueError("k grid must lie within [-1, 1]")
    if n_bands > cfg.n_basis // 2:
        raise ValueError("n_bands may not exceed n_basis/2")
    nb = cfg.n_basis
    cur = np.array([_levels(cfg, k, n_bands) for k in k_grid]).T
    for _ in range(max_doublings + 1):
        big = StaticLatticeConfig(cfg.v0_over_er, 2 * nb)
        nxt = np.array([_levels(big, k, n_bands) for k in k_grid]).T
        if np.max(np.abs(nxt - cur)) < tol:
            return BandDispersion(k_grid, cur, nb)
        nb, cur = 2 * nb, nxt
    raise ConvergenceError(f"bands not converged to {tol} after doubling n_basis to {nb}")


def mathieu_characteristics(q_grid, r_max: int = 4, n_basis: int = 64) -> MathieuChart:
    """a_r(q) from the k=0 sector and b_r(q) from the k=1 sector.

    Sorted k=0 levels alternate a_0, b_2, a_2, b_4, ... and sorted k=1 levels
    alternate b_1, a_1, b_3, a_3, ...; this is the band-to-edge alternation.
    """
    q_grid = np.atleast_1d(np.asarray(q_grid, dtype=float))
    if np.any(q_grid < 0):
        raise ValueError("q must be non-negative")
    a = np.full((len(q_grid), r_max + 1), np.nan)
    b = np.full((len(q_grid), r_max + 1), np.nan)
    for i, q in enumerate(q_grid):
        cfg = StaticLatticeConfig(4.0 * q, n_basis)
        e0 = _levels(cfg, 0.0, r_max + 2)
        e1 = _levels(cfg, 1.0, r_max + 2)
        for r in range(r_max + 1):
            if r % 2 == 0:
                a[i, r] = e0[r]
                if r > 0:
                    b[i, r] = e0[r - 1]
            else:
                a[i, r] = e1[r]
                b[i, r] = e1[r - 1]
    return MathieuChart(q_grid, a, b)


def band_edges(cfg: StaticLatticeConfig, n: int) -> tuple[float, float]:
    """(lower, upper) edge of band n in units of E_R: [a_n, b_{n+1}]."""
    if n < 0:
        raise ValueError("band index must be non-negative")
    ch = mathieu_characteristics([cfg.q], r_max=n + 1, n_basis=cfg.n_basis)
    return float(ch.a_values[0, n]), float(ch.b_values[0, n + 1])


def table_summary(cfg: StaticLatticeConfig) -> TableSummary:
    lo0, hi0 = band_edges(cfg, 0)
    lo1, hi1 = band_edges(cfg, 1)
    return TableSummary(cfg.v0_over_er, hi0 - lo0, lo1 - hi0, hi1 - lo1)


def band_separation(cfg: StaticLatticeConfig, k: float, bands=(0, 1)) -> float:
    e = _levels(cfg, k, max(bands) + 1)
    return float(e[bands[1]] - e[bands[0]])


def resonant_wavenumber(cfg: StaticLatticeConfig, target_gap: float, bands=(0, 1)) -> float:
    """k/k_L in [0, 1] where E_hi(k) - E_lo(k) equals target_gap (bisection)."""
    g = lambda k: band_separation(cfg, k, bands) - target_gap  # noqa: E731
    ks = np.linspace(0.0, 1.0, 41)
    vals = np.array([g(k) for k in ks])
    if abs(vals[0]) < 1e-12:
        return 0.0
    if abs(vals[-1]) < 1e-12:
        return 1.0
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if len(idx) == 0:
        lo, hi = vals.min() + target_gap, vals.max() + target_gap
        raise OutOfRangeError(f"gap {target_gap} outside attainable range [{lo:.6g}, {hi:.6g}]")
    i = idx[0]
    return float(brentq(g, ks[i], ks[i + 1], xtol=1e-13))


def band_center_and_width(cfg: StaticLatticeConfig, n: int = 0) -> tuple[float, float]:
    lo, hi = band_edges(cfg, n)
    return 0.5 * (lo + hi), hi - lo
