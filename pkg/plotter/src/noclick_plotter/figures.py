"""Regenerate the standard figure types from `noclick` CSV outputs.

Four figure kinds are supported, mirroring the entanglement-scan and
spectrum tables written by the simulation CLI:

* ``entropy-scaling`` - S against L_A (logarithmic L_A axis), one series
  per (gamma, d) pair; logarithmic-phase series rise along the axis while
  area-law series stay flat, which is the expected visual separation.
* ``c-vs-gamma``      - the local log coefficient c = L_A * dS against gamma.
* ``deltaS``          - the incremental ratio dS against gamma (or against d
  when the file scans d at a single gamma).
* ``spectrum``        - two panels, Re/Im of the quasiparticle energy vs k.

The plotter performs no numerical post-processing: every plotted quantity
is a CSV column (the only transforms are the logarithmic axis and series
grouping).  Rendering is deterministic: given identical inputs the output
image is byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__version__ = "0.1.0"

FIGURE_KINDS = ("entropy-scaling", "c-vs-gamma", "deltaS", "spectrum")

_REQUIRED = {
    "entropy-scaling": ("gamma", "L", "L_A", "S"),
    "c-vs-gamma": ("gamma", "L", "L_A", "c_est"),
    "deltaS": ("gamma", "L", "L_A", "delta_S"),
    "spectrum": ("gamma", "L", "k", "re_lambda", "im_lambda"),
}


class SchemaError(Exception):
    """CSV does not carry the columns a figure kind needs."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input tables, figure kind, output path."""

    csv_paths: tuple[str, ...]
    kind: str
    out_path: str
    title: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected {FIGURE_KINDS}")


@dataclass
class Table:
    """Parsed CSV: column name -> float array (blank fields become nan)."""

    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0


def read_table(path: str) -> Table:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise SchemaError(f"{path}: empty file")
    header, data = rows[0], rows[1:]
    if not data:
        raise SchemaError(f"{path}: no data rows")
    cols: dict[str, list[float]] = {name: [] for name in header}
    for row in data:
        for name, cell in zip(header, row):
            try:
                cols[name].append(float(cell) if cell != "" else np.nan)
            except ValueError:
                cols[name].append(np.nan)
    return Table(columns={k: np.asarray(v) for k, v in cols.items()})


def _require(table: Table, kind: str, path: str) -> None:
    missing = [c for c in _REQUIRED[kind] if c not in table.columns]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing} for kind {kind!r}")


def _series_label(gamma: float, d: float, L: float) -> str:
    label = f"gamma={gamma:g}"
    if not np.isnan(d):
        label += f", d={d:g}"
    return label + f", L={int(L)}"


def _group_indices(*keys: np.ndarray):
    """Row-index groups over the distinct joint key values, in sorted order."""
    stacked = np.stack([np.nan_to_num(k, nan=-1e300) for k in keys], axis=1)
    order = np.lexsort(stacked.T[::-1])
    sorted_keys = stacked[order]
    boundaries = np.any(np.diff(sorted_keys, axis=0) != 0, axis=1)
    splits = np.split(order, np.nonzero(boundaries)[0] + 1)
    return splits


def _draw_entropy_scaling(ax, tables):
    for table in tables:
        cols = table.columns
        d = cols.get("d", np.full(len(table), np.nan))
        for idx in _group_indices(cols["gamma"], d, cols["L"]):
            la, s = cols["L_A"][idx], cols["S"][idx]
            order = np.argsort(la)
            ax.plot(la[order], s[order], marker="o", ms=3,
                    label=_series_label(cols["gamma"][idx[0]], d[idx[0]], cols["L"][idx[0]]))
    ax.set_xscale("log")
    ax.set_xlabel(r"$L_A$")
    ax.set_ylabel(r"$S(L_A)$ [nats]")


def _draw_vs_gamma(ax, tables, column, ylabel):
    for table in tables:
        cols = table.columns
        d = cols.get("d", np.full(len(table), np.nan))
        many_gamma = len(np.unique(cols["gamma"])) > 1
        xcol = cols["gamma"] if many_gamma else d
        xlabel = r"$\gamma$" if many_gamma else r"$d$"
        group_keys = (d, cols["L"], cols["L_A"]) if many_gamma else (
            cols["gamma"], cols["L"], cols["L_A"])
        for idx in _group_indices(*group_keys):
            x, y = xcol[idx], cols[column][idx]
            order = np.argsort(x)
            first = idx[0]
            if many_gamma:
                label = (f"d={d[first]:g}, " if not np.isnan(d[first]) else "") + \
                    f"L={int(cols['L'][first])}, L_A={int(cols['L_A'][first])}"
            else:
                label = f"gamma={cols['gamma'][first]:g}, L={int(cols['L'][first])}"
            ax.plot(x[order], y[order], marker="o", ms=3, label=label)
        ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)


def _draw_spectrum(axes, tables):
    ax_re, ax_im = axes
    for table in tables:
        cols = table.columns
        d = cols.get("d", np.full(len(table), np.nan))
        for idx in _group_indices(cols["gamma"], d, cols["L"]):
            k = cols["k"][idx]
            order = np.argsort(k)
            label = _series_label(cols["gamma"][idx[0]], d[idx[0]], cols["L"][idx[0]])
            ax_re.plot(k[order], cols["re_lambda"][idx][order], lw=1.0, label=label)
            ax_im.plot(k[order], cols["im_lambda"][idx][order], lw=1.0, label=label)
    ax_re.set_ylabel(r"Re $\lambda_k$")
    ax_im.set_ylabel(r"Im $\lambda_k$")
    ax_im.set_xlabel(r"$k$")


def render(spec: FigureSpec) -> str:
    """Render one figure; returns the output path.

    Raises :class:`SchemaError` when an input lacks the required columns
    or contains no data rows.
    """
    tables = []
    for path in spec.csv_paths:
        table = read_table(path)
        _require(table, spec.kind, path)
        tables.append(table)

    plt.rcParams["svg.hashsalt"] = "noclick-plotter"
    if spec.kind == "spectrum":
        fig, axes = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
        _draw_spectrum(axes, tables)
        axes[0].legend(fontsize=7)
        fig.suptitle(spec.title or "")
    else:
        fig, ax = plt.subplots(figsize=(6.0, 4.2))
        if spec.kind == "entropy-scaling":
            _draw_entropy_scaling(ax, tables)
        elif spec.kind == "c-vs-gamma":
            _draw_vs_gamma(ax, tables, "c_est", r"$c = L_A\,\Delta S$")
        else:
            _draw_vs_gamma(ax, tables, "delta_S", r"$\Delta S$")
        ax.legend(fontsize=7)
        if spec.title:
            ax.set_title(spec.title)
    fig.tight_layout()
    metadata = {"Date": None} if spec.out_path.endswith(".svg") else {"Software": None}
    fig.savefig(spec.out_path, dpi=150, metadata=metadata)
    plt.close(fig)
    return spec.out_path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotter", description="Regenerate figures from noclick CSV tables"
    )
    parser.add_argument("kind", choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        help="input CSV path(s)")
    parser.add_argument("--out", required=True, help="output image path (.png or .svg)")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(csv_paths=tuple(args.inputs), kind=args.kind,
                          out_path=args.out, title=args.title))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
