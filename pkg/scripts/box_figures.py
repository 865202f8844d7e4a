"""Driven box: quasienergy sweep (Fig. 3), pulse excitation (Fig. 4), 13-photon anticrossing detail (Fig. 5)."""
import numpy as np
from _common import cli, out_path, parser, write

from quasiband import box
from quasiband.floquet import PropagatorConfig, scan_anticrossings


def fig3(out_dir, workers):
    cli("box-sweep", "--f-range", "0:7:141", "--fine-scan", "--workers", str(workers), "--out", str(out_path(out_dir, "fig03_box_sweep.csv")))


def fig4(out_dir, workers):
    cli("box-pulse", "--fmax-range", "0:7:40", "--workers", str(workers), "--out", str(out_path(out_dir, "fig04_box_pulse.csv")))


def fig5(out_dir, workers, widths=20.0, points=41):
    """The two states spanning the (1,0)/(6,-13) approach on a fine amplitude grid.

    The grid spans ``widths`` times the anticrossing width gap / |d(eps_a - eps_b)/df|.
    """
    sw = box.quasienergy_sweep(box.BoxConfig(), np.round(np.linspace(0.0, 3.2, 65), 12), workers=workers)
    prop = PropagatorConfig(2048, unitarity_tolerance=1e-11)

    def at(f):
        return box.box_spectrum(box.BoxConfig(amplitude=f), prop)

    rep = scan_anticrossings(sw, (1, 0), (6, -13), window=(2.8, 3.2), spectrum_at=at)
    i = rep.grid_index
    diff = sw.unwrapped[:, sw.column(1)] - sw.unwrapped[:, sw.column(6)]
    slope = abs(diff[i + 1] - diff[i - 1]) / (sw.params[i + 1] - sw.params[i - 1])
    half_width = widths * rep.gap_width / slope
    ref = np.column_stack([sw.vectors(i, sw.column(1)), sw.vectors(i, sw.column(6))])
    rows = []
    for f in np.linspace(rep.sweep_location - half_width, rep.sweep_location + half_width, points):
        s = at(float(f))
        ov = np.abs(ref.conj().T @ s.eigenvectors) ** 2
        top = np.argsort(-ov.sum(axis=0))[:2]
        lo, hi = sorted(top, key=lambda j: s.quasienergies[j])
        rows.append((f, s.quasienergies[lo], s.quasienergies[hi], ov[0, lo], ov[0, hi]))
    params = {"pair": "(1,0)/(6,-13)", "location": rep.sweep_location, "gap": rep.gap_width, "classification": rep.classification}
    cols = ["f", "eps_lower", "eps_upper", "weight_1_0_lower", "weight_1_0_upper"]
    write(out_path(out_dir, "fig05_box_detail.csv"), "fig05", params, cols, rows)


if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("figures", nargs="*", default=["3", "4", "5"])
    a = p.parse_args()
    for fig in a.figures:
        {"3": fig3, "4": fig4, "5": fig5}[fig](a.out_dir, a.workers)
