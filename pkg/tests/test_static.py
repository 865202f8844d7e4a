import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasiband import mathieu
from quasiband.static_bands import (
    OutOfRangeError,
    StaticLatticeConfig,
    band_edges,
    bloch_hamiltonian_matrix,
    compute_band_dispersion,
    mathieu_characteristics,
    resonant_wavenumber,
)


def test_continued_fraction_oracle_values():
    # tabulated characteristic values
    assert mathieu.a0(1.0) == pytest.approx(-0.455139, abs=1e-6)
    assert mathieu.b1(1.0) == pytest.approx(-0.110249, abs=1e-6)
    assert mathieu.a1(1.0) == pytest.approx(1.859108, abs=1e-6)
    assert mathieu.b2(1.0) == pytest.approx(3.917025, abs=1e-6)


def test_bloch_matrix_examples():
    free = np.linalg.eigvalsh(bloch_hamiltonian_matrix(StaticLatticeConfig(0.0, 7), 0.0).entries)
    assert np.allclose(free, [0, 4, 4, 16, 16, 36, 36])
    cfg = StaticLatticeConfig(4.0)
    assert np.linalg.eigvalsh(bloch_hamiltonian_matrix(cfg, 0.0).entries)[0] == pytest.approx(-0.45514, abs=1e-5)
    assert np.linalg.eigvalsh(bloch_hamiltonian_matrix(cfg, 1.0).entries)[0] == pytest.approx(-0.11025, abs=1e-5)
    h = bloch_hamiltonian_matrix(cfg, 0.37).entries
    assert np.max(np.abs(h - h.conj().T)) < 1e-12
    assert np.abs(h.imag).max() > 0


def test_empty_lattice_dispersion():
    ks = np.linspace(-1, 1, 21)
    d = compute_band_dispersion(StaticLatticeConfig(0.0, 16), ks, 3)
    assert np.allclose(d.energies[0], ks**2, atol=1e-12)


def test_dispersion_properties():
    ks = np.linspace(-1, 1, 41)
    for depth in (4.0, 16.0):
        d = compute_band_dispersion(StaticLatticeConfig(depth, 32), ks, 6)
        assert np.all(np.diff(d.energies, axis=0) >= -1e-12)
        assert np.max(np.abs(d.energies - d.energies[:, ::-1])) < 1e-10


def test_dispersion_precondition():
    with pytest.raises(ValueError):
        compute_band_dispersion(StaticLatticeConfig(4.0, 8), [0.0], 5)
    with pytest.raises(ValueError):
        compute_band_dispersion(StaticLatticeConfig(4.0), [1.5], 1)


def test_mathieu_chart_limits_and_ordering():
    ch = mathieu_characteristics([0.0, 0.5, 1.0, 2.0, 4.0], r_max=5)
    a, b = ch.a_values, ch.b_values
    assert abs(a[0, 0]) < 1e-10
    for r in range(1, 6):
        assert abs(a[0, r] - r * r) < 1e-10 and abs(b[0, r] - r * r) < 1e-10
    for i in range(1, 5):
        for n in range(5):
            assert a[i, n] < b[i, n + 1] < a[i, n + 1]
    assert a[3, 0] < a[2, 0]


def test_band_edges_examples():
    lo, hi = band_edges(StaticLatticeConfig(4.0), 0)
    assert hi - lo == pytest.approx(0.345, abs=0.002)
    lo, hi = band_edges(StaticLatticeConfig(8.0), 1)
    assert hi - lo == pytest.approx(1.293, abs=0.002)
    lo, hi = band_edges(StaticLatticeConfig(0.0), 1)
    assert lo == pytest.approx(1.0) and hi == pytest.approx(4.0)
    # zero depth: edges of neighbouring bands touch
    assert band_edges(StaticLatticeConfig(0.0), 0)[1] == pytest.approx(lo, abs=1e-12)


def test_resonant_wavenumber():
    cfg = StaticLatticeConfig(7.0)
    assert resonant_wavenumber(cfg, 4.15) == pytest.approx(0.41, abs=0.01)
    assert resonant_wavenumber(cfg, 4.96) == pytest.approx(0.0, abs=0.05)
    assert resonant_wavenumber(cfg, 3.345) == pytest.approx(1.0, abs=0.05)
    with pytest.raises(OutOfRangeError):
        resonant_wavenumber(cfg, 3.34)
    with pytest.raises(OutOfRangeError):
        resonant_wavenumber(cfg, 10.0)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([0.0, 1.0, 4.0, 8.0, 12.0, 16.0]), st.floats(min_value=-1, max_value=1))
def test_convergence_in_basis(depth, k):
    a = np.linalg.eigvalsh(bloch_hamiltonian_matrix(StaticLatticeConfig(depth, 32), k).entries)[:6]
    b = np.linalg.eigvalsh(bloch_hamiltonian_matrix(StaticLatticeConfig(depth, 64), k).entries)[:6]
    assert np.max(np.abs(a - b)) < 1e-8
