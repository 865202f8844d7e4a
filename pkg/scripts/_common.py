"""Shared helpers for the figure scripts."""
from __future__ import annotations

import argparse
from pathlib import Path

from quasiband.cli import CsvWriter, main


def parser(doc: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=doc)
    p.add_argument("--out-dir", default="results", help="directory for CSV output")
    p.add_argument("--workers", type=int, default=1)
    return p


def out_path(out_dir: str, name: str) -> Path:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def cli(*argv: str) -> None:
    if main(list(argv)) != 0:
        raise SystemExit(f"quasiband {' '.join(argv)} failed")


def write(path: Path, command: str, params: dict, columns, rows) -> None:
    w = CsvWriter(command, params)
    w.table(columns, rows)
    path.write_text(w.text())
    print(f"wrote {path}")
