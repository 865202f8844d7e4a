"""Driven lattice versus beta: the three "lowest" Floquet states per k.

fig6:  band edges k=0, V0=4, hw=0.5
fig7:  V0=4, hw=0.5, k = 0, 0.1, ..., 1
fig9:  V0=8, hw=0.5, k = 0, 0.1, ..., 1
fig13: V0=7, hw=5.51, k = 0, 0.05, ..., 1
fig15: V0=7, hw=4.15, k = 0, 0.05, ..., 1
"""
import numpy as np
from _common import out_path, parser, write

from quasiband import lattice
from quasiband.sweep import parallel_map

FIGURES = {
    "6": (4.0, 0.5, np.linspace(0, 1.8, 91), np.array([0.0])),
    "7": (4.0, 0.5, np.linspace(0, 1.8, 91), np.linspace(0, 1, 11)),
    "9": (8.0, 0.5, np.linspace(0, 1.8, 91), np.linspace(0, 1, 11)),
    "13": (7.0, 5.51, np.linspace(0, 1.0, 51), np.linspace(0, 1, 21)),
    "15": (7.0, 4.15, np.linspace(0, 1.0, 51), np.linspace(0, 1, 21)),
}


def _task(args):
    cfg, k = args
    p = lattice.band_point(cfg, k, 3)
    return p.quasienergies, p.weights


def run(fig: str, out_dir: str, workers: int = 1) -> None:
    depth, hw, betas, ks = FIGURES[fig]
    base = lattice.DrivenLatticeConfig(depth, hw)
    tasks = [(base.with_beta(b), float(k)) for b in betas for k in ks]
    res = parallel_map(_task, tasks, workers)
    rows = []
    for (cfg, k), (eps, w) in zip(tasks, res):
        for n in range(3):
            rows.append((cfg.beta, k, n, eps[n], w[n]))
    params = {"depth": depth, "omega": hw, "beta_range": f"{betas[0]:g}:{betas[-1]:g}:{len(betas)}", "k_values": len(ks)}
    write(out_path(out_dir, f"fig{int(fig):02d}_lattice_sweep.csv"), f"fig{fig}", params, ["beta", "k_over_kL", "band", "eps_over_hw", "overlap_weight"], rows)


if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("figures", nargs="*", default=list(FIGURES))
    a = p.parse_args()
    for fig in a.figures:
        run(fig, a.out_dir, a.workers)
