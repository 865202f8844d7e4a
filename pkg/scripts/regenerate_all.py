"""Regenerate every figure CSV into one directory (about 30 minutes on one core)."""
import box_figures
import lattice_dispersions
import lattice_sweeps
import static_figures
from _common import parser

if __name__ == "__main__":
    a = parser(__doc__).parse_args()
    static_figures.run(a.out_dir)
    for f in (box_figures.fig3, box_figures.fig4, box_figures.fig5):
        f(a.out_dir, a.workers)
    for fig in lattice_sweeps.FIGURES:
        lattice_sweeps.run(fig, a.out_dir, a.workers)
    for fig in lattice_dispersions.PANELS:
        lattice_dispersions.run(fig, a.out_dir, a.workers)
    lattice_dispersions.widths(a.out_dir, a.workers)
