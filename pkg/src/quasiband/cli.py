"""Command-line front end: every subcommand writes a CSV with a '#' header."""
from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import box, lattice, static_bands, two_level
from .floquet import PropagatorConfig, fold, scan_anticrossings

BOX_PAIRS = (((1, 1), (3, -3)), ((1, 1), (4, -6)))


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# parsing helpers


def parse_range(text: str) -> np.ndarray:
    """'start:stop:count' with inclusive endpoints."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be start:stop:count, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 2:
        raise argparse.ArgumentTypeError("range count must be at least 2")
    return np.linspace(start, stop, count)


def read_config(path: str) -> list[str]:
    """Flat key=value file turned into command-line tokens."""
    tokens = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line without '=': {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            tokens += [flag, value]
    return tokens


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".11e")


class CsvWriter:
    def __init__(self, command: str, params: dict):
        self.buf = io.StringIO()
        self.buf.write(f"# quasiband {__version__}\n# command={command}\n")
        for key in sorted(params):
            self.buf.write(f"# {key}={params[key]}\n")

    def comment(self, text: str) -> None:
        self.buf.write(f"# {text}\n")

    def table(self, columns, rows) -> None:
        self.buf.write(",".join(columns) + "\n")
        for r in rows:
            self.buf.write(",".join(fmt(v) for v in r) + "\n")

    def text(self) -> str:
        return self.buf.getvalue()


def _params(args) -> dict:
    out = {}
    for k, v in vars(args).items():
        if k in ("func", "out", "workers", "config", "command"):
            continue
        if isinstance(v, np.ndarray):
            v = f"{v[0]:g}:{v[-1]:g}:{len(v)}"
        out[k] = v
    return out


def _emit(args, writer: CsvWriter, companion: CsvWriter | None = None) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(writer.text())
        if companion is not None:
            sys.stdout.write("\n" + companion.text())
        return
    out = Path(args.out)
    out.write_text(writer.text())
    if companion is not None:
        out.with_name(out.stem + "_summary" + out.suffix).write_text(companion.text())


def _prop(args, default_steps: int = 1024) -> PropagatorConfig:
    return PropagatorConfig(steps_per_period=args.steps or default_steps)


# --------------------------------------------------------------------------
# subcommands


def run_static_bands(args) -> None:
    cfg = static_bands.StaticLatticeConfig(args.depth, args.n_basis or 64)
    ks = args.k_range if args.k_range is not None else static_bands.DEFAULT_K_GRID
    disp = static_bands.compute_band_dispersion(cfg, ks, args.n_bands)
    w = CsvWriter("static-bands", {**_params(args), "n_basis_used": disp.n_basis_used})
    w.table(["k_over_kL"] + [f"E{n}_over_ER" for n in range(disp.n_bands)], [(k, *disp.energies[:, i]) for i, k in enumerate(ks)])
    s = static_bands.table_summary(cfg)
    summ = CsvWriter("static-bands-summary", _params(args))
    summ.table(["v0_over_er", "W0_over_ER", "gap01_over_ER", "W1_over_ER"], [(s.v0_over_er, s.w0, s.gap01, s.w1)])
    _emit(args, w, summ)


def run_mathieu_chart(args) -> None:
    qs = args.q_range if args.q_range is not None else np.linspace(0, 4, 41)
    ch = static_bands.mathieu_characteristics(qs, args.r_max, args.n_basis or 64)
    cols = ["q"] + [f"a{r}" for r in range(args.r_max + 1)] + [f"b{r}" for r in range(1, args.r_max + 1)]
    rows = [(q, *ch.a_values[i], *ch.b_values[i, 1:]) for i, q in enumerate(qs)]
    w = CsvWriter("mathieu-chart", _params(args))
    w.table(cols, rows)
    _emit(args, w)


def run_box_sweep(args) -> None:
    cfg = box.BoxConfig(args.n_max, args.omega or box.DEFAULT_HBAR_OMEGA)
    fs = args.f_range if args.f_range is not None else np.linspace(0, 7, 141)
    prop = _prop(args)
    sw = box.quasienergy_sweep(cfg, fs, prop, args.workers, args.gap_threshold)
    w = CsvWriter("box-sweep", _params(args))
    w.table(["f", "eps_over_hw", "label_n", "label_m", "overlap_l", "gparity"], box.sweep_rows(sw, args.labels))
    summ = CsvWriter("box-sweep-anticrossings", _params(args))
    rows = []
    for a, b in BOX_PAIRS:
        at = None
        if args.fine_scan:
            at = lambda f: box.box_spectrum(box.BoxConfig(cfg.n_max, cfg.hbar_omega_over_e1, f), prop)  # noqa: E731
        r = scan_anticrossings(sw, a, b, spectrum_at=at)
        rows.append((f"{a}/{b}".replace(" ", ""), r.sweep_location, r.gap_width, r.classification))
    summ.table(["pair", "location_f", "gap_over_hw", "classification"], rows)
    _emit(args, w, summ)


def _pulse_task(task):
    cfg, f_max, sigma, steps = task
    return box.pulse_propagate(cfg, box.PulseConfig(f_max, sigma), PropagatorConfig(steps_per_period=steps))


def run_box_pulse(args) -> None:
    from .sweep import parallel_map

    cfg = box.BoxConfig(args.n_max, args.omega or box.DEFAULT_HBAR_OMEGA)
    fs = args.fmax_range if args.fmax_range is not None else np.linspace(0, 7, 40)
    steps = args.steps or box.PULSE_STEPS
    res = parallel_map(_pulse_task, [(cfg, float(f), args.sigma, steps) for f in fs], args.workers)
    w = CsvWriter("box-pulse", _params(args))
    w.table(["f_max", "P1", "P2", "P3", "P4", "norm_defect"], [(f, *r.probabilities[:4], r.norm_defect) for f, r in zip(fs, res)])
    _emit(args, w)


def _lattice_cfg(args, beta=None) -> lattice.DrivenLatticeConfig:
    return lattice.DrivenLatticeConfig(
        args.depth,
        args.omega,
        args.beta if beta is None else beta,
        not args.no_ponderomotive,
        args.n_basis or lattice.DEFAULT_N_BASIS,
        _prop(args),
    )


def run_lattice_bands(args) -> None:
    cfg = _lattice_cfg(args)
    ks = args.k_range if args.k_range is not None else (np.array([args.k]) if args.k is not None else lattice.DEFAULT_K_GRID)
    bs = lattice.band_structure(cfg, ks, args.n_bands, args.threshold, args.workers)
    rows = []
    folded, m = bs.folded, bs.photon_m
    for i, k in enumerate(bs.k_grid):
        for n in range(bs.n_bands):
            rows.append((k, n, folded[i, n], n, m[i, n], bs.weights[i, n]))
    w = CsvWriter("lattice-bands", _params(args))
    w.table(["k_over_kL", "band_index", "eps_over_hw", "label_n", "label_m", "overlap_weight"], rows)
    _emit(args, w)


def run_lattice_sweep(args) -> None:
    cfg = _lattice_cfg(args, beta=0.0)
    betas = args.beta_range if args.beta_range is not None else np.linspace(0, 1.8, 50)
    ks = args.k_range if args.k_range is not None else np.linspace(0, 1, 11)
    sw = lattice.bandwidth_sweep(cfg, betas, ks, args.workers)
    rows = []
    for i, b in enumerate(sw.betas):
        pred = lattice.bessel_single_band(cfg.with_beta(b), ks)
        for j, k in enumerate(ks):
            rows.append((b, k, fold(sw.band0[i, j]), pred[j]))
    w = CsvWriter("lattice-sweep", _params(args))
    w.table(["beta", "k_over_kL", "eps_over_hw", "bessel_eps_over_hw"], rows)
    _, w0 = static_bands.band_center_and_width(cfg.static, 0)
    from .bessel import j0

    summ = CsvWriter("lattice-sweep-widths", _params(args))
    for b, wmin in sw.minima:
        summ.comment(f"width_minimum beta={b:.6f} width_over_hw={wmin:.6e}")
    summ.table(
        ["beta", "width_over_hw", "cos_amplitude_over_hw", "bessel_amplitude_over_hw", "flagged"],
        [(b, sw.widths[i], sw.amplitudes[i], 0.5 * w0 / args.omega * j0(np.pi * b), bool(sw.flagged[i])) for i, b in enumerate(sw.betas)],
    )
    _emit(args, w, summ)


def run_two_level(args) -> None:
    from .floquet import floquet_spectrum

    w0s = args.omega0_range if args.omega0_range is not None else np.linspace(0.2, 2.0, 5)
    cs = args.coupling_range if args.coupling_range is not None else np.linspace(0.0, 2.0, 5)
    rows = []
    for w0 in w0s:
        for c in cs:
            cfg = two_level.TwoLevelConfig(float(w0), float(c), args.polarization)
            num = np.sort(floquet_spectrum(two_level.generator(cfg), _prop(args)).quasienergies)
            rwa = np.sort(two_level.rwa_quasienergies(cfg))
            dev = float(np.max(np.abs(fold(num - rwa))))
            rows.append((w0, c, num[0], num[1], rwa[0], rwa[1], dev))
    w = CsvWriter("two-level", _params(args))
    w.table(["omega0_over_omega", "coupling_over_omega", "eps_lo_num", "eps_hi_num", "eps_lo_rwa", "eps_hi_rwa", "max_deviation"], rows)
    _emit(args, w)


def run_convert(args) -> None:
    fc = lattice.frame_convert(args.beta, args.omega, args.wavelength * 1e-9, args.atom)
    w = CsvWriter("convert", _params(args))
    names = [
        "recoil_energy_J",
        "recoil_frequency_Hz",
        "lattice_constant_m",
        "shaking_amplitude_m",
        "peak_to_peak_m",
        "force_amplitude_N",
        "ponderomotive_energy_J",
    ]
    w.table(
        names,
        [(fc.recoil_energy, fc.recoil_frequency, fc.lattice_constant, fc.shaking_amplitude, fc.peak_to_peak, fc.force_amplitude, fc.ponderomotive_energy)],
    )
    _emit(args, w)


def run_verify(args) -> int:
    from .invariants import run_all

    results = run_all(seed=args.seed)
    w = CsvWriter("verify", _params(args))
    w.table(["check", "value", "tolerance", "passed"], [(r.name, r.value, r.tolerance, r.passed) for r in results])
    _emit(args, w)
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=float, default=4.0, help="lattice depth V0/E_R")
    common.add_argument("--omega", type=float, default=None, help="drive quantum: hbar w/E_R (lattice) or hbar w/E_1 (box)")
    common.add_argument("--beta", type=float, default=0.0, help="scaled drive amplitude")
    common.add_argument("--beta-range", type=parse_range, default=None)
    common.add_argument("--k", type=float, default=None, help="single k/k_L")
    common.add_argument("--k-range", type=parse_range, default=None)
    common.add_argument("--n-basis", type=int, default=None)
    common.add_argument("--steps", type=int, default=None, help="steps per drive period")
    common.add_argument("--fine-scan", action="store_true")
    common.add_argument("--no-ponderomotive", action="store_true")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=12345)
    common.add_argument("--out", default=None, help="output CSV path (default stdout)")
    common.add_argument("--config", default=None, help="key=value file; command-line flags override it")

    p = argparse.ArgumentParser(prog="quasiband", description=__doc__)
    p.add_argument("--version", action="version", version=f"quasiband {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("static-bands", parents=[common])
    s.add_argument("--n-bands", type=int, default=3)
    s.set_defaults(func=run_static_bands)

    s = sub.add_parser("mathieu-chart", parents=[common])
    s.add_argument("--q-range", type=parse_range, default=None)
    s.add_argument("--r-max", type=int, default=4)
    s.set_defaults(func=run_mathieu_chart)

    s = sub.add_parser("box-sweep", parents=[common])
    s.add_argument("--f-range", type=parse_range, default=None)
    s.add_argument("--n-max", type=int, default=50)
    s.add_argument("--labels", type=int, default=box.EXPORT_LABELS)
    s.add_argument("--gap-threshold", type=float, default=box.BOX_GAP_THRESHOLD)
    s.set_defaults(func=run_box_sweep)

    s = sub.add_parser("box-pulse", parents=[common])
    s.add_argument("--fmax-range", type=parse_range, default=None)
    s.add_argument("--sigma", type=float, default=10.0, help="envelope width sigma/T")
    s.add_argument("--n-max", type=int, default=50)
    s.set_defaults(func=run_box_pulse)

    s = sub.add_parser("lattice-bands", parents=[common])
    s.add_argument("--n-bands", type=int, default=3)
    s.add_argument("--threshold", type=float, default=1e-3, help="coarse-grain gap threshold")
    s.set_defaults(func=run_lattice_bands)

    s = sub.add_parser("lattice-sweep", parents=[common])
    s.set_defaults(func=run_lattice_sweep)

    s = sub.add_parser("two-level", parents=[common])
    s.add_argument("--omega0-range", type=parse_range, default=None)
    s.add_argument("--coupling-range", type=parse_range, default=None)
    s.add_argument("--polarization", choices=("circular", "linear"), default="circular")
    s.set_defaults(func=run_two_level)

    s = sub.add_parser("convert", parents=[common])
    s.add_argument("--wavelength", type=float, default=1064.0, help="nm")
    s.add_argument("--atom", default="Cs-133", choices=sorted(lattice.ATOM_MASSES_U))
    s.set_defaults(func=run_convert)

    s = sub.add_parser("verify", parents=[common])
    s.set_defaults(func=run_verify)
    return p


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a path")
    tokens = read_config(argv[i + 1])
    rest = argv[:i] + argv[i + 2 :]
    # file values go first so explicit flags win
    return rest[:1] + tokens + rest[1:]


def _join_ranges(argv: list[str]) -> list[str]:
    # argparse mistakes "-1:1:5" for an option; bind it to its flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and tok.endswith("-range") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_ranges(_expand_config(argv)))
        if args.command in ("lattice-bands", "lattice-sweep") and args.omega is None:
            raise UsageError("--omega (hbar w / E_R) is required for lattice commands")
        if args.command == "convert" and args.omega is None:
            raise UsageError("--omega (hbar w / E_R) is required for convert")
        status = args.func(args)
        return int(status or 0)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - single reporting point
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
