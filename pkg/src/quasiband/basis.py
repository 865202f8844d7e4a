"""Truncated pi-periodic trigonometric basis and scaled operator matrices.

Index convention: mu=0 is the constant, odd mu is sin((mu+1) z) and even
mu>0 is cos(mu z), all normalized on [0, pi].
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class HermitianKind(str, Enum):
    HERMITIAN = "hermitian"
    ANTI_HERMITIAN = "anti-hermitian"
    GENERAL = "general"


@dataclass(frozen=True)
class BasisSpec:
    n_basis: int

    def __post_init__(self) -> None:
        if int(self.n_basis) != self.n_basis or self.n_basis < 1:
            raise ValueError(f"n_basis must be a positive integer, got {self.n_basis!r}")


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    hermitian_kind: HermitianKind

    def __post_init__(self) -> None:
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("operator matrix must be square")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        if self.hermitian_kind is HermitianKind.HERMITIAN:
            dev = np.max(np.abs(a - a.conj().T), initial=0.0)
        elif self.hermitian_kind is HermitianKind.ANTI_HERMITIAN:
            dev = np.max(np.abs(a + a.conj().T), initial=0.0)
        else:
            dev = 0.0
        if dev > 1e-12:
            raise ValueError(f"entries violate {self.hermitian_kind.value} kind by {dev:.3e}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def wavenumber(mu: int) -> int:
    """Spatial wavenumber carried by basis function mu."""
    return 2 * ((mu + 1) // 2)


def build_second_derivative_matrix(spec: BasisSpec) -> OperatorMatrix:
    kk = np.array([wavenumber(mu) for mu in range(spec.n_basis)], dtype=float)
    return OperatorMatrix(np.diag(kk**2), HermitianKind.HERMITIAN)


def build_first_derivative_matrix(spec: BasisSpec) -> OperatorMatrix:
    # d/dz sin(wz) = w cos(wz), d/dz cos(wz) = -w sin(wz)
    n = spec.n_basis
    d = np.zeros((n, n))
    for mu in range(1, n - 1, 2):
        w = mu + 1
        d[mu, mu + 1] = -w
        d[mu + 1, mu] = w
    return OperatorMatrix(d, HermitianKind.ANTI_HERMITIAN)


def build_cosine_matrix(spec: BasisSpec) -> OperatorMatrix:
    n = spec.n_basis
    c = np.zeros((n, n))
    for mu in range(n - 2):
        c[mu, mu + 2] = c[mu + 2, mu] = 0.5
    if n > 2:
        c[0, 2] = c[2, 0] = np.sqrt(2.0) / 2.0
    return OperatorMatrix(c, HermitianKind.HERMITIAN)


def build_momentum_matrix(spec: BasisSpec) -> OperatorMatrix:
    """(1/i) d/dz, Hermitian."""
    return OperatorMatrix(-1j * build_first_derivative_matrix(spec).entries, HermitianKind.HERMITIAN)


def parity_signs(n_basis: int) -> np.ndarray:
    return np.where(np.arange(n_basis) % 2 == 0, 1.0, -1.0)


def basis_parity(mu: int) -> int:
    if mu < 0:
        raise ValueError("mu must be non-negative")
    return 1 if mu % 2 == 0 else -1


def evaluate_basis_function(mu: int, z):
    if mu < 0:
        raise ValueError("mu must be non-negative")
    z = np.asarray(z, dtype=float)
    if mu == 0:
        return np.full_like(z, np.sqrt(1.0 / np.pi))
    norm = np.sqrt(2.0 / np.pi)
    if mu % 2 == 1:
        return norm * np.sin((mu + 1) * z)
    return norm * np.cos(mu * z)
