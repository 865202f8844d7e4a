"""Driven-lattice dispersions eps_n(k) at fixed beta (Figs. 8, 10, 11, 12, 14) and band-0 width sweeps."""
from _common import cli, out_path, parser

PANELS = {
    "8": ("4", "0.5", ("0.2", "0.76", "1.5")),
    "10": ("8", "0.5", ("0.2", "0.76", "1.21")),
    "11": ("7", "5.51", ("0.17", "0.69", "1.0")),
    "12": ("7", "5.51", ("0.17", "0.35", "0.52", "0.69")),
    "14": ("7", "4.15", ("0.1", "0.5", "1.0")),
}


def run(fig, out_dir, workers):
    depth, hw, betas = PANELS[fig]
    for b in betas:
        name = f"fig{int(fig):02d}_bands_beta{b}.csv"
        cli("lattice-bands", "--depth", depth, "--omega", hw, "--beta", b, "--k-range", "-1:1:81", "--workers", str(workers), "--out", str(out_path(out_dir, name)))


def widths(out_dir, workers):
    for depth in ("4", "8"):
        cli("lattice-sweep", "--depth", depth, "--omega", "0.5", "--beta-range", "0:1.8:50", "--k-range", "0:1:11", "--workers", str(workers), "--out", str(out_path(out_dir, f"width_sweep_V{depth}.csv")))


if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("figures", nargs="*", default=[*PANELS, "widths"])
    a = p.parse_args()
    for fig in a.figures:
        widths(a.out_dir, a.workers) if fig == "widths" else run(fig, a.out_dir, a.workers)
