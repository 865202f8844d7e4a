"""Static lattice: Mathieu chart (Fig. 1), band dispersions (Fig. 2) and the band width and gap summary."""
from _common import cli, out_path, parser


def run(out_dir: str) -> None:
    cli("mathieu-chart", "--q-range", "0:5:101", "--r-max", "4", "--out", str(out_path(out_dir, "fig01_mathieu_chart.csv")))
    for depth in ("4", "8"):
        # the companion *_summary.csv holds W0, gap01 and W1 for this depth
        cli("static-bands", "--depth", depth, "--k-range", "-1:1:201", "--out", str(out_path(out_dir, f"fig02_static_bands_V{depth}.csv")))


if __name__ == "__main__":
    run(parser(__doc__).parse_args().out_dir)
