"""Fast invariant checks backing the ``verify`` subcommand."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import box, lattice, static_bands, two_level
from .floquet import PropagatorConfig, assemble_monodromy, extract_quasienergies, fold, verify_expansion_constancy


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


def run_all(seed: int = 12345) -> list[CheckResult]:
    out = []
    rng = np.random.default_rng(seed)

    cfg = box.BoxConfig(amplitude=2.0)
    mono = box.box_monodromy(cfg)
    out.append(CheckResult("box_unitarity_defect", mono.unitarity_defect, 1e-8))
    out.append(CheckResult("box_expansion_constancy", verify_expansion_constancy(box.box_generator(cfg), random_state=rng), 1e-8))

    x = rng.uniform(-5, 5, 1000)
    out.append(CheckResult("fold_idempotence", float(np.max(np.abs(fold(fold(x)) - fold(x)))), 0.0))

    tl = two_level.TwoLevelConfig(0.8, 0.6)
    num = assemble_monodromy(two_level.circular_generator(tl)).entries
    out.append(CheckResult("two_level_oracle", float(np.max(np.abs(num - two_level.circular_monodromy(tl).entries))), 1e-10))

    lc = lattice.DrivenLatticeConfig(8.0, 0.5, 0.76)
    sym, _ = lattice.symmetry_reduced_monodromy(lc, 0.5)
    direct = assemble_monodromy(lattice.scaled_generator(lc, 0.5), lc.propagator)
    out.append(CheckResult("symmetry_path_equivalence", float(np.max(np.abs(sym.entries - direct.entries))), 1e-9))

    l0 = lattice.DrivenLatticeConfig(4.0, 0.5, 0.0)
    eps = np.sort(extract_quasienergies(lattice.monodromy(l0, 0.3)).quasienergies)
    stat = np.sort(fold(np.linalg.eigvalsh(static_bands.bloch_hamiltonian_matrix(l0.static, 0.3).entries) / 0.5))
    out.append(CheckResult("undriven_lattice_consistency", float(np.max(np.abs(fold(eps - stat)))), 1e-9))

    s = static_bands.table_summary(static_bands.StaticLatticeConfig(4.0))
    out.append(CheckResult("table_w0_depth4", abs(s.w0 - 0.345), 0.002))
    return out
