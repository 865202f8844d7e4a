"""One test per acceptance criterion; each prints a PASS/FAIL line at the stated tolerance."""
import time

import numpy as np
import pytest
from conftest import record

from quasiband import box, lattice, mathieu, static_bands, two_level
from quasiband.bessel import j0
from quasiband.floquet import (
    PropagatorConfig,
    assemble_monodromy,
    extract_quasienergies,
    floquet_spectrum,
    fold,
    scan_anticrossings,
    verify_expansion_constancy,
)
from quasiband.floquet import _vertex


def test_criterion_01_table():
    t = time.perf_counter()
    got = {v: static_bands.table_summary(static_bands.StaticLatticeConfig(v)) for v in (4.0, 8.0)}
    elapsed = time.perf_counter() - t
    want = {4.0: (0.345, 1.969, 2.058), 8.0: (0.123, 3.770, 1.293)}
    dev = max(abs(a - b) for v in want for a, b in zip((got[v].w0, got[v].gap01, got[v].w1), want[v]))
    ok = dev <= 0.002 and elapsed < 1.0
    record(1, "band widths and gap table", ok, f"max deviation {dev:.2e} (tol 2e-3), {elapsed:.3f} s")
    assert ok


def test_criterion_02_mathieu_oracle():
    t = time.perf_counter()
    ch = static_bands.mathieu_characteristics([0.0, 1.0, 2.0], r_max=4)
    dev = 0.0
    for i, q in ((1, 1.0), (2, 2.0)):
        dev = max(dev, abs(ch.a_values[i, 0] - mathieu.a0(q)), abs(ch.b_values[i, 1] - mathieu.b1(q)))
    free = np.arange(5) ** 2
    dev0 = max(np.max(np.abs(ch.a_values[0] - free)), np.max(np.abs(ch.b_values[0, 1:] - free[1:])))
    elapsed = time.perf_counter() - t
    ok = dev < 1e-8 and dev0 < 1e-10 and elapsed < 1.0
    record(2, "Mathieu oracle", ok, f"q=1,2 deviation {dev:.1e} (tol 1e-8), q=0 {dev0:.1e} (tol 1e-10), {elapsed:.3f} s")
    assert ok


def test_criterion_03_two_level():
    t = time.perf_counter()
    dev = 0.0
    for w0 in np.linspace(0.2, 2.0, 5):
        for c in np.linspace(0.0, 1.6, 5):
            cfg = two_level.TwoLevelConfig(w0, c)
            num = np.sort(floquet_spectrum(two_level.generator(cfg)).quasienergies)
            om = two_level.generalized_rabi(cfg)
            ref = np.array([0.5 * (1 + om), 0.5 * (1 - om)])
            d = np.abs(fold(num[:, None] - ref[None, :]))
            dev = max(dev, d.min(axis=1).max(), d.min(axis=0).max())
    lim = 0.0
    for w0 in (1.4, 0.6):
        eps = np.sort(floquet_spectrum(two_level.generator(two_level.TwoLevelConfig(w0, 1e-9))).quasienergies)
        ref = [0.5 * w0, -0.5 * w0 + 1.0] if w0 > 1 else [-0.5 * w0 + 1.0, 0.5 * w0]
        lim = max(lim, np.max(np.abs(fold(eps - np.sort(fold(np.array(ref)))))))
    elapsed = time.perf_counter() - t
    ok = dev < 1e-10 and lim < 1e-6 and elapsed < 5.0
    record(3, "two-level oracle", ok, f"grid deviation {dev:.1e} (tol 1e-10), weak-drive limits {lim:.1e} (tol 1e-6), {elapsed:.2f} s")
    assert ok


CROSSING_PAIRS = (
    (((1, 0), (3, -3)), (0.7, 1.2)),
    (((1, 0), (4, -6)), (2.6, 3.1)),
    (((4, -6), (6, -13)), (1.4, 1.9)),
    (((1, 0), (5, -9)), (2.2, 2.7)),
)


def _box_at(f):
    return box.box_spectrum(box.BoxConfig(amplitude=f))


@pytest.mark.slow
def test_criterion_04_box_resonances(box_sweep):
    sw = box_sweep.value
    r3 = scan_anticrossings(sw, (1, 1), (3, -3))
    r4 = scan_anticrossings(sw, (1, 1), (4, -6))
    rule = []
    for (a, b), win in CROSSING_PAIRS:
        assert box.generalized_parity(a) != box.generalized_parity(b)
        r = scan_anticrossings(sw, a, b, window=win, spectrum_at=_box_at)
        rule.append(r.classification == "crossing")
    ok3 = abs(r3.sweep_location - 4.0) <= 0.1 and r3.classification == "anticrossing"
    ok4 = abs(r4.sweep_location - 5.7) <= 0.15 and r4.classification == "anticrossing"
    ok = ok3 and ok4 and sum(rule) >= 3 and box_sweep.seconds < 300
    record(
        4,
        "driven box resonances",
        ok,
        f"(1,1)/(3,-3) at f={r3.sweep_location:.3f} gap {r3.gap_width:.4f} {r3.classification} (want 4.0+-0.1); "
        f"(1,1)/(4,-6) at f={r4.sweep_location:.3f} gap {r4.gap_width:.4f} {r4.classification} (want 5.7+-0.15); "
        f"opposite-parity crossings {sum(rule)}/{len(rule)}; sweep {box_sweep.seconds:.0f} s",
    )
    assert ok


@pytest.mark.slow
def test_criterion_05_pulse(pulse_scan):
    fs, res = pulse_scan.value
    p3 = np.array([r.probabilities[2] for r in res])
    p4 = np.array([r.probabilities[3] for r in res])
    norm = max(r.norm_defect for r in res)
    low = float(p3[fs <= 3.0].max())
    window = float(p3[(fs >= 4.0) & (fs <= 5.0)].max())
    onset = float(fs[np.argmax(p4 > 0.01)]) if (p4 > 0.01).any() else np.inf
    ok = low < 0.02 and window > 0.1 and onset > 5.5 and norm < 1e-8 and pulse_scan.seconds < 600
    record(
        5,
        "pulse excitation",
        ok,
        f"max P3(f<=3) {low:.1e}, max P3 in [4,5] {window:.3f}, P4 > 0.01 first at f={onset:.2f}, "
        f"norm defect {norm:.1e}, {pulse_scan.seconds:.0f} s for {len(fs)} amplitudes",
    )
    assert ok


@pytest.mark.slow
def test_criterion_06_collapse(collapse_sweeps):
    s4, s8 = collapse_sweeps[4.0], collapse_sweeps[8.0]
    m4 = s4.value.minima[0][0]
    m8 = [b for b, _ in s8.value.minima]
    _, w0 = static_bands.band_center_and_width(static_bands.StaticLatticeConfig(8.0), 0)
    near1 = min(s8.value.minima, key=lambda m: abs(m[0] - 0.765))
    near2 = min(s8.value.minima, key=lambda m: abs(m[0] - 1.757))
    resid = max(near1[1], near2[1]) * 0.5 / w0
    ok = (
        abs(m4 - 0.74) <= 0.02
        and abs(near1[0] - 0.765) <= 0.02
        and abs(near2[0] - 1.757) <= 0.05
        and resid < 0.05
        and max(s4.seconds, s8.seconds) < 900
    )
    record(
        6,
        "band collapse",
        ok,
        f"V0=4 first minimum {m4:.4f} (want 0.74+-0.02); V0=8 minima {near1[0]:.4f}, {near2[0]:.4f} "
        f"(want 0.765+-0.02, 1.757+-0.05), residual {resid:.3f} W0 (tol 0.05); all minima {np.round(m8, 3).tolist()}; "
        f"sweeps {s4.seconds:.0f} s and {s8.seconds:.0f} s",
    )
    assert ok


@pytest.mark.slow
def test_criterion_07_bessel_shape(collapse_sweeps):
    sw = collapse_sweeps[8.0].value
    _, w0 = static_bands.band_center_and_width(static_bands.StaticLatticeConfig(8.0), 0)
    half = 0.5 * w0 / 0.5  # W0/2 in units of hbar omega
    pred = half * j0(np.pi * sw.betas)
    keep = ~sw.flagged
    dev = float(np.max(np.abs(sw.amplitudes[keep] - pred[keep])))
    ok = dev < 0.05 * half
    record(7, "Bessel shape", ok, f"max |A - (W0/2)J0| = {dev / half:.4f} W0/2 (tol 0.05) over {keep.sum()} of {keep.size} betas")
    assert ok


@pytest.mark.slow
def test_criterion_08_shaken_lattice_experiment():
    cfg = static_bands.StaticLatticeConfig(7.0)
    s0 = static_bands.band_separation(cfg, 0.0)
    s1 = static_bands.band_separation(cfg, 1.0)
    dx = lattice.frame_convert(0.17, 5.51, 1064e-9, "Cs-133").peak_to_peak * 1e9
    ks = np.linspace(-1, 1, 81)
    e = lattice.band_structure(lattice.DrivenLatticeConfig(7.0, 5.51, 0.17), ks, 3).unwrapped[:, 0]
    interior = [i for i in range(1, len(ks) - 1) if e[i] < e[i - 1] and e[i] < e[i + 1]]
    kmin = ks[interior]
    double = len(kmin) == 2 and abs(kmin[0] + kmin[1]) < 1e-12 and abs(kmin[0]) > 0 and abs(e[interior[0]] - e[interior[1]]) < 1e-8
    ok = abs(s0 - 4.96) <= 0.01 and abs(s1 - 3.34) <= 0.01 and abs(dx - 21) <= 1 and double
    record(
        8,
        "shaken-lattice experiment parameters",
        ok,
        f"separations {s0:.4f}, {s1:.4f} (want 4.96, 3.34 +-0.01); dx {dx:.2f} nm (want 21+-1); band-0 minima at k={kmin.tolist()}",
    )
    assert ok


@pytest.mark.slow
def test_criterion_09_resonance_engineering():
    k_static = static_bands.resonant_wavenumber(static_bands.StaticLatticeConfig(7.0), 4.15)
    ks = np.linspace(0, 1, 41)
    bs = lattice.band_structure(lattice.DrivenLatticeConfig(7.0, 4.15, 0.1), ks, 3)
    gap = np.abs(fold(bs.unwrapped[:, 0] - bs.unwrapped[:, 1]))
    i = int(np.clip(np.argmin(gap), 1, len(ks) - 2))
    k_driven, g2 = _vertex(ks[i - 1 : i + 2], gap[i - 1 : i + 2] ** 2)
    ok = abs(k_static - 0.41) <= 0.02 and abs(k_driven - k_static) <= 0.03
    record(
        9,
        "resonance engineering",
        ok,
        f"static k={k_static:.4f} (want 0.41+-0.02); driven minimal gap {np.sqrt(max(g2, 0)):.4f} hw at k={k_driven:.4f} (within 0.03)",
    )
    assert ok


def test_criterion_10_symmetry_speedup():
    dev, ratios = 0.0, []
    for beta in (0.2, 0.76, 1.5):
        for k in (0.0, 0.5, 0.9):
            cfg = lattice.DrivenLatticeConfig(8.0, 0.5, beta)
            mono, evals = lattice.symmetry_reduced_monodromy(cfg, k)
            gen = lattice.scaled_generator(cfg, k)
            direct = assemble_monodromy(gen, cfg.propagator)
            dev = max(dev, float(np.max(np.abs(mono.entries - direct.entries))))
            ratios.append(evals / gen.evaluations)
    ok = dev < 1e-9 and all(r == 0.5 for r in ratios)
    record(10, "symmetry speedup", ok, f"max entry deviation {dev:.1e} (tol 1e-9), evaluation ratio {set(ratios)}")
    assert ok


def test_criterion_11_property_suite():
    rng = np.random.default_rng(7)
    checks = {}
    checks["unitarity"] = max(
        [box.box_monodromy(box.BoxConfig(amplitude=f)).unitarity_defect for f in (0.0, 2.0, 4.0, 6.0)]
        + [lattice.monodromy(lattice.DrivenLatticeConfig(8.0, 0.5, b), 0.3).unitarity_defect for b in (0.3, 1.5)]
    )
    checks["expansion"] = max(
        verify_expansion_constancy(box.box_generator(box.BoxConfig(amplitude=3.0)), random_state=rng),
        verify_expansion_constancy(lattice.scaled_generator(lattice.DrivenLatticeConfig(4.0, 0.5, 0.7), 0.2), random_state=rng),
    )
    x = np.concatenate([rng.uniform(-50, 50, 10000), np.arange(-5, 5.5, 0.5)])
    checks["fold"] = float(np.max(np.abs(fold(fold(x)) - fold(x))))
    ks = np.array([-0.8, -0.35, 0.0, 0.35, 0.8])
    f = lattice.band_structure(lattice.DrivenLatticeConfig(4.0, 0.5, 0.5), ks, 3).folded
    checks["k_reflection"] = float(np.max(np.abs(fold(f - f[::-1]))))
    cfg = lattice.DrivenLatticeConfig(8.0, 0.5)
    eps = np.sort(extract_quasienergies(lattice.monodromy(cfg, 0.45)).quasienergies)
    ref = np.sort(fold(np.linalg.eigvalsh(static_bands.bloch_hamiltonian_matrix(cfg.static, 0.45).entries) / 0.5))
    checks["beta0"] = float(np.max(np.abs(fold(eps - ref))))
    tol = {"unitarity": 1e-8, "expansion": 1e-8, "fold": 0.0, "k_reflection": 1e-8, "beta0": 1e-9}
    ok = all(checks[k] <= tol[k] for k in tol)
    record(11, "property suite", ok, ", ".join(f"{k} {checks[k]:.1e} (tol {tol[k]:.0e})" for k in tol))
    assert ok
