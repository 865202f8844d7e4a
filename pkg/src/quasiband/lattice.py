"""Quasienergy bands of the sinusoidally shaken cosine lattice.

Scaled equation in the co-moving frame, energies in hbar*omega, tau = omega*t:
H(tau) = (E_R/hbar w) [ -d2/dz2 + k^2 (+ beta^2/2) + (V0/2E_R) cos 2z
                        + 2 (k + beta sin tau) (1/i) d/dz ]
with k in units of k_L and beta = (F0/k_L)/(hbar w).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import constants
from scipy.optimize import linear_sum_assignment

from .basis import (
    BasisSpec,
    build_cosine_matrix,
    build_momentum_matrix,
    build_second_derivative_matrix,
    parity_signs,
)
from .bessel import j0
from .floquet import (
    TWO_PI,
    FloquetSpectrum,
    Generator,
    MonodromyMatrix,
    PropagatorConfig,
    _diabatic_post_pass,
    _unwrap_from,
    _vertex,
    assemble_monodromy,
    extract_quasienergies,
    fold,
    make_monodromy,
    propagate,
)
from .static_bands import StaticLatticeConfig, band_center_and_width

DEFAULT_N_BASIS = 32
DEFAULT_K_GRID = np.linspace(0.0, 1.0, 41)
RESONANCE_OVERLAP = 0.5


class SymmetryMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class DrivenLatticeConfig:
    v0_over_er: float
    hbar_omega_over_er: float
    beta: float = 0.0
    include_ponderomotive: bool = True
    n_basis: int = DEFAULT_N_BASIS
    propagator: PropagatorConfig = field(default_factory=PropagatorConfig)

    def __post_init__(self) -> None:
        if not self.v0_over_er >= 0:
            raise ValueError("lattice depth must be non-negative")
        if not self.hbar_omega_over_er > 0:
            raise ValueError("hbar omega must be positive")
        if not self.beta >= 0:
            raise ValueError("beta must be non-negative")
        BasisSpec(self.n_basis)

    def with_beta(self, beta: float) -> "DrivenLatticeConfig":
        return DrivenLatticeConfig(
            self.v0_over_er, self.hbar_omega_over_er, float(beta), self.include_ponderomotive, self.n_basis, self.propagator
        )

    @property
    def static(self) -> StaticLatticeConfig:
        return StaticLatticeConfig(self.v0_over_er, self.n_basis)


def _parts(n_basis: int):
    spec = BasisSpec(n_basis)
    return (
        build_second_derivative_matrix(spec).entries,
        build_momentum_matrix(spec).entries,
        build_cosine_matrix(spec).entries,
    )


def static_matrix(cfg: DrivenLatticeConfig, k_over_kL: float) -> np.ndarray:
    """Drive-free part in recoil units, including the ponderomotive constant if enabled."""
    d2, p, c = _parts(cfg.n_basis)
    shift = k_over_kL**2 + (0.5 * cfg.beta**2 if cfg.include_ponderomotive else 0.0)
    return d2 + shift * np.eye(cfg.n_basis) + 0.5 * cfg.v0_over_er * c + 2.0 * k_over_kL * p


def scaled_generator(cfg: DrivenLatticeConfig, k_over_kL: float) -> Generator:
    _, p, _ = _parts(cfg.n_basis)
    scale = 1.0 / cfg.hbar_omega_over_er
    return Generator(scale * static_matrix(cfg, k_over_kL), ((np.sin, 2.0 * cfg.beta * scale * p),))


def _transpose_conjugated(u: np.ndarray, s: np.ndarray) -> np.ndarray:
    # (S U^T S)_{mu nu} = s_mu s_nu U_{nu mu}
    return s[:, None] * u.T * s[None, :]


def symmetry_reduced_monodromy(
    cfg: DrivenLatticeConfig, k_over_kL: float, validate: bool = False, validate_tol: float = 1e-9
) -> tuple[MonodromyMatrix, int]:
    """Monodromy from the first and third quarter periods only.

    H(pi - tau) = S H(tau)^T S with S = diag((-1)^mu) gives
    U(pi, pi/2) = S U(pi/2, 0)^T S and U(2pi, 3pi/2) = S U(3pi/2, pi)^T S.
    Returns the monodromy and the number of right-hand-side evaluations.
    """
    prop = cfg.propagator
    if prop.steps_per_period % 4:
        raise ValueError("steps_per_period must be divisible by 4")
    gen = scaled_generator(cfg, k_over_kL)
    eye = np.eye(cfg.n_basis)
    q = prop.steps_per_period // 4
    q1 = propagate(gen, eye, 0.0, 0.5 * np.pi, prop, steps=q)
    q3 = propagate(gen, eye, np.pi, 1.5 * np.pi, prop, steps=q)
    s = parity_signs(cfg.n_basis)
    u = _transpose_conjugated(q3, s) @ q3 @ _transpose_conjugated(q1, s) @ q1
    mono = make_monodromy(u, TWO_PI, prop.unitarity_tolerance)
    if validate:
        direct = assemble_monodromy(scaled_generator(cfg, k_over_kL), prop)
        dev = float(np.max(np.abs(direct.entries - u)))
        if dev > validate_tol:
            raise SymmetryMismatch(f"symmetry-reduced monodromy deviates by {dev:.3e}")
    return mono, gen.evaluations


def monodromy(cfg: DrivenLatticeConfig, k_over_kL: float) -> MonodromyMatrix:
    if cfg.propagator.steps_per_period % 4 == 0:
        return symmetry_reduced_monodromy(cfg, k_over_kL)[0]
    return assemble_monodromy(scaled_generator(cfg, k_over_kL), cfg.propagator)


# --------------------------------------------------------------------------
# band identification


@dataclass(frozen=True)
class BandPoint:
    """Floquet states matched to the lowest static bands at one k."""

    k: float
    quasienergies: np.ndarray  # per band, folded
    weights: np.ndarray  # overlap with the static band state
    reference: np.ndarray  # static energies in hbar*omega (incl. ponderomotive shift)
    spectrum: FloquetSpectrum
    state_index: np.ndarray


def band_point(cfg: DrivenLatticeConfig, k_over_kL: float, n_bands: int = 3) -> BandPoint:
    spec = extract_quasienergies(monodromy(cfg, k_over_kL))
    # at tau = 0 the vector potential vanishes: compare with static Bloch states
    energies, vecs = np.linalg.eigh(static_matrix(cfg, k_over_kL))
    ov = np.abs(vecs[:, :n_bands].conj().T @ spec.eigenvectors) ** 2
    rows, cols = linear_sum_assignment(-ov)
    return BandPoint(
        float(k_over_kL),
        spec.quasienergies[cols],
        ov[rows, cols],
        energies[:n_bands] / cfg.hbar_omega_over_er,
        spec,
        cols,
    )


def _band_point_task(args):
    cfg, k, n_bands = args
    return band_point(cfg, k, n_bands)


@dataclass
class QuasienergyBandStructure:
    k_grid: np.ndarray
    unwrapped: np.ndarray  # (len(k), n_bands), continuous across k
    weights: np.ndarray
    coarse_grain_threshold: float
    resonance_flags: np.ndarray
    swaps: list = field(default_factory=list)

    @property
    def folded(self) -> np.ndarray:
        return fold(self.unwrapped)

    @property
    def photon_m(self) -> np.ndarray:
        return np.rint(self.folded - self.unwrapped).astype(int)

    @property
    def n_bands(self) -> int:
        return self.unwrapped.shape[1]

    def width(self, band: int = 0) -> float:
        u = self.unwrapped[:, band]
        return float(u.max() - u.min())


def _assemble_bands(points: list[BandPoint], threshold: float) -> QuasienergyBandStructure:
    ks = np.array([p.k for p in points])
    nb = len(points[0].quasienergies)
    folded = np.array([p.quasienergies for p in points])
    weights = np.array([p.weights for p in points])
    # representative nearest the undriven level at the first k, then continuity in k
    ref0 = points[0].reference
    start = ref0 + fold(folded[0] - ref0)
    cont = np.column_stack([_unwrap_from(start[j], folded[:, j]) for j in range(nb)])
    state_index = np.array([p.state_index for p in points])
    swaps = _diabatic_post_pass([p.spectrum for p in points], state_index, cont, ks, threshold, 12)
    if swaps:
        folded = np.array([p.spectrum.quasienergies[state_index[i]] for i, p in enumerate(points)])
        cont = np.column_stack([_unwrap_from(cont[0, j], folded[:, j]) for j in range(nb)])
    return QuasienergyBandStructure(ks, cont, weights, threshold, weights < RESONANCE_OVERLAP, swaps)


def band_structure(
    cfg: DrivenLatticeConfig,
    k_grid=DEFAULT_K_GRID,
    n_bands: int = 3,
    coarse_grain_threshold: float = 1e-3,
    workers: int = 1,
) -> QuasienergyBandStructure:
    from .sweep import parallel_map

    k_grid = np.asarray(k_grid, dtype=float)
    if np.any(np.abs(k_grid) > 1.0 + 1e-12):
        raise ValueError("k grid must lie within [-1, 1]")
    points = parallel_map(_band_point_task, [(cfg, float(k), n_bands) for k in k_grid], workers)
    return _assemble_bands(points, coarse_grain_threshold)


# --------------------------------------------------------------------------
# single-band comparison and sweeps


def bessel_single_band(cfg: DrivenLatticeConfig, k_grid) -> np.ndarray:
    """eps_0(k)/(hbar w) = [E_c - (W_0/2) J0(pi beta) cos(pi k)] / (hbar w), folded.

    The single-band result holds for the force (length-gauge) form. That form is
    related to the minimal-coupling equation with its beta^2/2 term by a
    time-periodic gauge change, which leaves quasienergies unchanged. Dropping
    the beta^2/2 term therefore lowers the prediction by beta^2/2.
    """
    ec, w0 = band_center_and_width(cfg.static, 0)
    if not cfg.include_ponderomotive:
        ec -= 0.5 * cfg.beta**2
    k = np.asarray(k_grid, dtype=float)
    return fold((ec - 0.5 * w0 * j0(np.pi * cfg.beta) * np.cos(np.pi * k)) / cfg.hbar_omega_over_er)


def cosine_fit(k_grid, eps) -> tuple[float, float]:
    """Least-squares (c, A) for eps(k) = c - A cos(pi k)."""
    k = np.asarray(k_grid, dtype=float)
    design = np.column_stack([np.ones_like(k), -np.cos(np.pi * k)])
    (c, a), *_ = np.linalg.lstsq(design, np.asarray(eps, dtype=float), rcond=None)
    return float(c), float(a)


@dataclass
class BandwidthSweep:
    betas: np.ndarray
    k_grid: np.ndarray
    band0: np.ndarray  # (len(beta), len(k)) unwrapped band-0 quasienergy in hbar w
    widths: np.ndarray  # hbar w units
    amplitudes: np.ndarray  # fitted cosine amplitudes, hbar w units
    flagged: np.ndarray  # any point with weak overlap with the static band
    minima: list  # refined (beta, width) pairs


def _sweep_task(args):
    cfg, k, n_bands = args
    p = band_point(cfg, k, n_bands)
    return p.quasienergies[0], p.weights[0], p.reference[0]


def bandwidth_sweep(
    cfg: DrivenLatticeConfig,
    beta_grid,
    k_grid=np.linspace(0.0, 1.0, 11),
    workers: int = 1,
) -> BandwidthSweep:
    """Width of band 0 versus beta, with local minima refined by a parabola through width^2."""
    from .sweep import parallel_map

    betas = np.asarray(beta_grid, dtype=float)
    if abs(betas[0]) > 1e-12:
        raise ValueError("beta grid must start at zero")
    ks = np.asarray(k_grid, dtype=float)
    tasks = [(cfg.with_beta(b), float(k), 1) for b in betas for k in ks]
    res = parallel_map(_sweep_task, tasks, workers)
    eps = np.array([r[0] for r in res]).reshape(len(betas), len(ks))
    wts = np.array([r[1] for r in res]).reshape(len(betas), len(ks))
    ref0 = np.array([r[2] for r in res]).reshape(len(betas), len(ks))[:, 0]
    band0 = np.empty_like(eps)
    for i in range(len(betas)):
        start = ref0[i] + fold(eps[i, 0] - ref0[i])
        band0[i] = _unwrap_from(start, eps[i])
    widths = band0.max(axis=1) - band0.min(axis=1)
    amps = np.array([cosine_fit(ks, row)[1] for row in band0])
    minima = []
    for i in range(1, len(betas) - 1):
        if widths[i] <= widths[i - 1] and widths[i] < widths[i + 1]:
            b, w2 = _vertex(betas[i - 1 : i + 2], widths[i - 1 : i + 2] ** 2)
            minima.append((b, float(np.sqrt(max(w2, 0.0)))))
    return BandwidthSweep(betas, ks, band0, widths, amps, (wts < RESONANCE_OVERLAP).any(axis=1), minima)


def group_velocity(k_grid, eps, k_over_kL: float) -> float:
    """d eps / d(k/k_L) at a grid point (hbar = 1, k in units of k_L).

    Endpoints use the periodic continuation eps(k) = eps(k + 2) when the grid
    spans a full zone, and second-order one-sided differences otherwise.
    """
    ks = np.asarray(k_grid, dtype=float)
    e = np.asarray(eps, dtype=float)
    if len(ks) < 3:
        raise ValueError("need at least three grid points")
    i = int(np.argmin(np.abs(ks - k_over_kL)))
    h = ks[1] - ks[0]
    periodic = abs((ks[-1] - ks[0]) - 2.0) < 1e-9
    if 0 < i < len(ks) - 1:
        return float((e[i + 1] - e[i - 1]) / (2 * h))
    if periodic:
        # ks[0] and ks[-1] are the same point modulo 2
        return float((e[1] - e[-2]) / (2 * h))
    if i == 0:
        return float((-3 * e[0] + 4 * e[1] - e[2]) / (2 * h))
    return float((3 * e[-1] - 4 * e[-2] + e[-3]) / (2 * h))


# --------------------------------------------------------------------------
# laboratory frame conversion

ATOM_MASSES_U = {"Cs-133": 132.905451961, "Rb-87": 86.909180527, "Na-23": 22.9897692820, "K-39": 38.9637064864}


def atom_mass(name_or_kg) -> float:
    if isinstance(name_or_kg, str):
        return ATOM_MASSES_U[name_or_kg] * constants.atomic_mass
    return float(name_or_kg)


@dataclass(frozen=True)
class FrameConversion:
    wavelength: float  # m
    atom_mass: float  # kg
    beta: float
    hbar_omega_over_er: float
    recoil_energy: float  # J
    recoil_frequency: float  # Hz, E_R / h
    lattice_constant: float  # m, a = pi / k_L
    shaking_amplitude: float  # m, Delta L
    peak_to_peak: float  # m, 2 Delta L
    force_amplitude: float  # N, F0 = M Delta L omega^2
    ponderomotive_energy: float  # J, beta^2/2 E_R


def recoil_energy(wavelength: float, mass: float) -> float:
    k_l = TWO_PI / wavelength
    return (constants.hbar * k_l) ** 2 / (2.0 * mass)


def shaking_amplitude(beta: float, hbar_omega_over_er: float, wavelength: float) -> float:
    return beta * (wavelength / 2.0) * (2.0 / np.pi) / hbar_omega_over_er


def beta_from_shaking(delta_l: float, hbar_omega_over_er: float, wavelength: float) -> float:
    return 0.5 * np.pi * hbar_omega_over_er * delta_l / (wavelength / 2.0)


def frame_convert(beta: float, hbar_omega_over_er: float, wavelength: float, mass) -> FrameConversion:
    if not (wavelength > 0):
        raise ValueError("wavelength must be positive")
    m = atom_mass(mass)
    if not m > 0:
        raise ValueError("mass must be positive")
    er = recoil_energy(wavelength, m)
    dl = shaking_amplitude(beta, hbar_omega_over_er, wavelength)
    omega = hbar_omega_over_er * er / constants.hbar
    return FrameConversion(
        wavelength, m, beta, hbar_omega_over_er, er, er / constants.h, wavelength / 2.0, dl, 2.0 * dl, m * dl * omega**2, 0.5 * beta**2 * er
    )
