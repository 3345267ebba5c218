#!/usr/bin/env python3
"""Regenerate precision-sweep figures from gqfi CSV output.

Reads the seven-column sweep format written by ``gqfi sweep-fig1`` and
``gqfi sweep-fig2`` (header ``tau,r,nu1,nu2,H,regime,N_trunc``) and renders

  * fig 1: one-mode zero-temperature curves, H against tau, one curve per
    squeezing value, logarithmic H axis;
  * fig 2: one panel per temperature pair (nu1, nu2), same curve layout.

Both PNG and SVG files are written next to the requested output path.  The
plot functions return the exact arrays they drew so CI can assert properties
(peak positions, panel orderings) on the plotted data.

Usage: plot.py --csv sweep.csv --fig {1,2} --out figure.png
"""

import argparse
import csv
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

EXPECTED_HEADER = ["tau", "r", "nu1", "nu2", "H", "regime", "N_trunc"]


class NoDataError(Exception):
    """The CSV selection contains no rows to plot."""


def load_table(path):
    """Parse a sweep CSV into a list of row dicts, validating the contract."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise NoDataError(f"{path} is empty")
        if header != EXPECTED_HEADER:
            raise ValueError(f"unexpected header {header!r}; need {EXPECTED_HEADER}")
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if not record or record == [""]:
                continue
            tau, r, nu1, nu2, h, regime, n_trunc = record
            h_val = float(h)
            if math.isnan(h_val):
                raise ValueError(f"{path}:{lineno}: NaN H value")
            rows.append({
                "tau": float(tau),
                "r": float(r),
                "nu1": float(nu1) if nu1 else None,
                "nu2": float(nu2) if nu2 else None,
                "H": h_val,
                "regime": regime,
                "N_trunc": int(n_trunc),
            })
    if not rows:
        raise NoDataError(f"{path} carries a header but no data rows")
    return rows


def _write_both(fig, out_path):
    base, _ = os.path.splitext(out_path)
    written = []
    for ext in (".png", ".svg"):
        target = base + ext
        fig.savefig(target, bbox_inches="tight")
        written.append(target)
    plt.close(fig)
    return written


def _curves_by_key(rows, key_fn):
    """Group rows into curves without reordering anything."""
    curves = {}
    for row in rows:
        curves.setdefault(key_fn(row), ([], []))
        taus, hs = curves[key_fn(row)]
        taus.append(row["tau"])
        hs.append(row["H"])
    return curves


def plot_fig1(rows, out_path):
    """One-mode sweep: H against tau, one labelled curve per squeezing.

    Returns {r: (tau_list, H_list)} exactly as plotted.
    """
    selected = [row for row in rows if row["regime"].startswith("one_mode")]
    if not selected:
        raise NoDataError("no one-mode sweep rows in the table")
    curves = _curves_by_key(selected, lambda row: row["r"])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for r, (taus, hs) in curves.items():
        ax.plot(taus, hs, label=f"r = {r:g}")
    ax.set_yscale("log")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel("H (zeroth order)")
    ax.set_title("One-mode probe, zero temperature")
    ax.legend()
    written = _write_both(fig, out_path)
    return curves, written


def plot_fig2(rows, out_path):
    """Two-mode sweep: one panel per (nu1, nu2), curves per squeezing.

    Returns {(nu1, nu2): {r: (tau_list, H_list)}} exactly as plotted.
    """
    selected = [row for row in rows if row["regime"].startswith("two_mode")]
    if not selected:
        raise NoDataError("no two-mode sweep rows in the table")
    panels = {}
    for row in selected:
        pair = (row["nu1"], row["nu2"])
        panels.setdefault(pair, {})
        panels[pair].setdefault(row["r"], ([], []))
        taus, hs = panels[pair][row["r"]]
        taus.append(row["tau"])
        hs.append(row["H"])
    n_panels = len(panels)
    ncols = min(3, n_panels)
    nrows = (n_panels + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 3.4 * nrows),
                             squeeze=False, sharex=True)
    flat = axes.ravel()
    for ax in flat[n_panels:]:
        ax.set_visible(False)
    for ax, (pair, by_r) in zip(flat, panels.items()):
        for r, (taus, hs) in by_r.items():
            ax.plot(taus, hs, label=f"r = {r:g}")
        ax.set_yscale("log")
        ax.set_title(rf"$\nu_1 = {pair[0]:g},\ \nu_2 = {pair[1]:g}$")
        ax.set_xlabel(r"$\tau$")
        ax.set_ylabel("H (zeroth order)")
        ax.legend(fontsize=8)
    fig.tight_layout()
    written = _write_both(fig, out_path)
    return panels, written


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True, help="sweep CSV from the gqfi CLI")
    parser.add_argument("--fig", required=True, choices=["1", "2"])
    parser.add_argument("--out", required=True, help="output image path (.png base)")
    args = parser.parse_args(argv)
    try:
        rows = load_table(args.csv)
        if args.fig == "1":
            _, written = plot_fig1(rows, args.out)
        else:
            _, written = plot_fig2(rows, args.out)
    except (NoDataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
