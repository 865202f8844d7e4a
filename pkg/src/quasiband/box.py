"""Sinusoidally driven particle in a box.

Energy unit hbar*omega, time tau = omega*t, amplitude f = F0 a / (hbar omega)
with a the half-width. H(tau) = diag(n^2) E1/(hbar omega) - f X cos(tau).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import (
    TWO_PI,
    FloquetSpectrum,
    Generator,
    LabeledSweep,
    PropagatorConfig,
    assign_photon_labels,
    extract_quasienergies,
    fold,
    make_monodromy,
    order_by_overlap,
    propagate,
)

DEFAULT_HBAR_OMEGA = 0.95 * (4 - 1)  # red-detuned by 5% from E2 - E1
EXPORT_LABELS = 20
BOX_GAP_THRESHOLD = 0.15
PULSE_STEPS = 128


@dataclass(frozen=True)
class BoxConfig:
    n_max: int = 50
    hbar_omega_over_e1: float = DEFAULT_HBAR_OMEGA
    amplitude: float = 0.0

    def __post_init__(self) -> None:
        if self.n_max < 10:
            raise ValueError("n_max must be at least 10")
        if not self.hbar_omega_over_e1 > 0:
            raise ValueError("hbar omega must be positive")


@dataclass(frozen=True)
class PulseConfig:
    f_max: float
    sigma_over_T: float = 10.0
    truncation_sigmas: float = 5.0

    def __post_init__(self) -> None:
        if not self.sigma_over_T > 0:
            raise ValueError("sigma/T must be positive")
        if self.truncation_sigmas < 5:
            raise ValueError("truncation_sigmas must be at least 5")


@dataclass(frozen=True)
class TransitionResult:
    probabilities: np.ndarray  # P(n) for n = 1..n_max
    norm_defect: float


def box_energy(n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(n * n)


def dipole_matrix(n_max: int) -> np.ndarray:
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    n = np.arange(1, n_max + 1, dtype=float)
    m, k = n[:, None], n[None, :]
    odd = (m + k) % 2 == 1
    denom = np.where(odd, (m * m - k * k) ** 2, 1.0)
    return np.where(odd, -(16.0 / np.pi**2) * m * k / denom, 0.0)


def unperturbed_energies(cfg: BoxConfig) -> np.ndarray:
    """E_n / (hbar omega) for n = 1..n_max."""
    return np.arange(1, cfg.n_max + 1, dtype=float) ** 2 / cfg.hbar_omega_over_e1


def box_generator(cfg: BoxConfig) -> Generator:
    h0 = np.diag(unperturbed_energies(cfg))
    return Generator(h0, ((np.cos, -cfg.amplitude * dipole_matrix(cfg.n_max)),))


def state_parity(n_max: int) -> np.ndarray:
    """Spatial parity of box state n under x -> -x: (-1)^(n+1)."""
    return np.where(np.arange(1, n_max + 1) % 2 == 1, 1.0, -1.0)


def box_monodromy(cfg: BoxConfig, prop: PropagatorConfig = PropagatorConfig(), use_symmetry: bool = True):
    """One-period monodromy.

    With ``use_symmetry`` only [0, pi] is propagated: x -> -x combined with
    tau -> tau + pi leaves H invariant, so U(2pi, 0) = (S U(pi, 0))^2 with S
    the parity matrix.
    """
    gen = box_generator(cfg)
    eye = np.eye(cfg.n_max)
    if use_symmetry:
        if prop.steps_per_period % 2:
            raise ValueError("symmetric path needs an even step count")
        half = propagate(gen, eye, 0.0, np.pi, prop, steps=prop.steps_per_period // 2)
        sh = state_parity(cfg.n_max)[:, None] * half
        u = sh @ sh
    else:
        u = propagate(gen, eye, 0.0, TWO_PI, prop)
    return make_monodromy(u, TWO_PI, prop.unitarity_tolerance)


def box_spectrum(cfg: BoxConfig, prop: PropagatorConfig = PropagatorConfig()) -> FloquetSpectrum:
    return extract_quasienergies(box_monodromy(cfg, prop))


def generalized_parity(label: tuple[int, int]) -> int:
    n, m = label
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1 if (n + m + 1) % 2 == 0 else -1


def _spectrum_task(args):
    cfg, prop = args
    return box_spectrum(cfg, prop)


def quasienergy_sweep(
    cfg: BoxConfig,
    f_grid,
    prop: PropagatorConfig = PropagatorConfig(),
    workers: int = 1,
    gap_threshold: float = BOX_GAP_THRESHOLD,
) -> LabeledSweep:
    from .sweep import parallel_map

    f_grid = np.asarray(f_grid, dtype=float)
    if abs(f_grid[0]) > 1e-12:
        raise ValueError("box sweep must start at zero amplitude")
    tasks = [(BoxConfig(cfg.n_max, cfg.hbar_omega_over_e1, float(f)), prop) for f in f_grid]
    spectra = parallel_map(_spectrum_task, tasks, workers)
    return assign_photon_labels(
        spectra, unperturbed_energies(cfg), params=f_grid, label_offset=1, gap_threshold=gap_threshold
    )


def sweep_rows(sweep: LabeledSweep, n_labels: int = EXPORT_LABELS):
    """Rows (f, eps, n, m, l_max, generalized parity) for the lowest labels."""
    rows = []
    folded, m = sweep.folded, sweep.photon_m
    for i, f in enumerate(sweep.params):
        spec = sweep.spectra[i]
        lmax = np.argmax(np.abs(spec.eigenvectors) ** 2, axis=0) + 1
        for j, n in enumerate(sweep.label_n):
            if n > n_labels:
                continue
            lab = (int(n), int(m[i, j]))
            rows.append((float(f), float(folded[i, j]), lab[0], lab[1], int(lmax[sweep.state_index[i, j]]), generalized_parity(lab)))
    return rows


def pulse_propagate(cfg: BoxConfig, pulse: PulseConfig, prop: PropagatorConfig = PropagatorConfig(steps_per_period=PULSE_STEPS)) -> TransitionResult:
    """Excitation probabilities after a Gaussian pulse starting from the ground state."""
    sigma = pulse.sigma_over_T * TWO_PI
    span = pulse.truncation_sigmas * sigma
    x = dipole_matrix(cfg.n_max)
    fm = pulse.f_max
    gen = Generator(
        np.diag(unperturbed_energies(cfg)),
        ((lambda t: fm * np.exp(-0.5 * (t / sigma) ** 2) * np.cos(t), -x),),
    )
    psi0 = np.zeros(cfg.n_max, dtype=complex)
    psi0[0] = 1.0
    steps = int(round(prop.steps_per_period * 2 * span / TWO_PI))
    psi = propagate(gen, psi0, -span, span, prop, steps=steps)
    p = np.abs(psi) ** 2
    defect = abs(1.0 - p.sum())
    if defect > 1e-8:
        raise FloatingPointError(f"norm defect {defect:.3e}; increase steps_per_period")
    return TransitionResult(p, float(defect))


def label_at_zero(n: int, cfg: BoxConfig = BoxConfig()) -> tuple[int, int]:
    e = n * n / cfg.hbar_omega_over_e1
    return (n, int(round(fold(e) - e)))
