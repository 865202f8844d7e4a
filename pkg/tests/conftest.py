import time

import numpy as np
import pytest

from quasiband import box, lattice

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, passed: bool, detail: str) -> None:
    line = f"[criterion {criterion:2d}] {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


class Timed:
    def __init__(self, value, seconds):
        self.value, self.seconds = value, seconds


def _timed(fn, *a, **kw):
    t = time.perf_counter()
    v = fn(*a, **kw)
    return Timed(v, time.perf_counter() - t)


@pytest.fixture(scope="session")
def box_sweep():
    """Driven-box sweep f = 0 ... 7 in steps of 0.05 (n_max = 50, defaults)."""
    return _timed(box.quasienergy_sweep, box.BoxConfig(), np.round(np.linspace(0.0, 7.0, 141), 12))


@pytest.fixture(scope="session")
def collapse_sweeps():
    """Band-0 width sweeps, 50 beta values x 11 k points each."""
    out = {}
    for depth in (4.0, 8.0):
        cfg = lattice.DrivenLatticeConfig(depth, 0.5)
        out[depth] = _timed(lattice.bandwidth_sweep, cfg, np.linspace(0.0, 1.8, 50), np.linspace(0.0, 1.0, 11))
    return out


@pytest.fixture(scope="session")
def pulse_scan():
    fs = np.linspace(0.0, 7.0, 40)
    t = time.perf_counter()
    res = [box.pulse_propagate(box.BoxConfig(), box.PulseConfig(float(f))) for f in fs]
    return Timed((fs, res), time.perf_counter() - t)
