"""CSV / JSON / figure writers for the experiment runner.

All delimited output is written atomically (temp file then rename) with 17
significant digits in scientific notation, so identical configurations
produce byte-identical files.  Each command also renders a small matplotlib
figure next to its data files; figures are a convenience view, the CSVs
remain the interface.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def fmt(value: float) -> str:
    return f"{float(value):.16e}"


def _atomic_write(path: Path, writer) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], rows) -> None:
    def writer(handle):
        out = csv.writer(handle)
        out.writerow(header)
        for row in rows:
            out.writerow([cell if isinstance(cell, str) else fmt(cell) for cell in row])

    _atomic_write(path, writer)


def write_json(path: Path, doc: dict) -> None:
    _atomic_write(path, lambda h: json.dump(doc, h, indent=2, sort_keys=True))


def write_verdict(path: Path, passed: bool, claim: str, tolerance: float, metrics: dict) -> None:
    """Machine-readable verdict with the claim text and tolerance used."""
    write_json(
        path,
        {
            "verdict": "pass" if passed else "fail",
            "claim": claim,
            "tolerance": tolerance,
            "metrics": metrics,
        },
    )


def save_figure(fig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)


def render_jost(path: Path, x, values, k) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(x, values.real, lw=0.9, label="Re f")
    ax.plot(x, values.imag, lw=0.9, label="Im f")
    ax.plot(x, np.abs(values), "k--", lw=0.8, label="|f|")
    ax.set_xlabel("x")
    ax.set_title(f"Jost solution, k = {k:g}")
    ax.legend(loc="upper right", fontsize=8)
    save_figure(fig, path)


def render_transform(path: Path, x, w, V) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(8.4, 3.2))
    axes[0].plot(x, w.real, lw=0.9, label="Re w")
    axes[0].plot(x, w.imag, lw=0.9, label="Im w")
    axes[0].set_title("superpotential w")
    axes[1].plot(x, V.real, lw=0.9, label="Re V")
    axes[1].plot(x, V.imag, lw=0.9, label="Im V")
    axes[1].set_title("transformed potential V")
    for ax in axes:
        ax.set_xlabel("x")
        ax.legend(fontsize=8)
    save_figure(fig, path)


def render_identity(path: Path, profile) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(8.4, 3.2))
    xs = np.asarray(profile.xs)
    for m, label in enumerate(profile.members):
        axes[0].plot(xs, profile.values[m].real, "o-", ms=3, lw=0.8, label=label)
        axes[0].plot(xs, profile.targets[m], "k.", ms=4)
        axes[1].semilogy(xs, np.maximum(profile.abs_errors[m], 1e-17), "o-", ms=3, lw=0.8)
    axes[0].set_title("reconstruction I(x) vs Phi(x) (dots)")
    axes[0].legend(fontsize=6)
    axes[1].set_title("|I(x) - Phi(x)|")
    for ax in axes:
        ax.set_xlabel("x")
    save_figure(fig, path)


def render_binorm(path: Path, table) -> None:
    fig, ax = plt.subplots(figsize=(5.4, 3.4))
    etas = [row[0] for row in table]
    vals = [row[1] for row in table]
    ax.plot(etas, np.real(vals), "o-", lw=0.9, label="Re")
    ax.plot(etas, np.imag(vals), "s-", lw=0.9, label="Im")
    ax.set_xscale("log")
    ax.set_xlabel("damping eta")
    ax.set_ylabel("partial pairing value")
    ax.legend(fontsize=8)
    ax.set_title("damped pairing vs eta")
    save_figure(fig, path)


def render_scan(path: Path, scan) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    ax.semilogy(scan.k_samples, np.abs(scan.values), lw=0.9)
    for m in scan.minima:
        ax.axvline(m.k_star, color="r" if m.verdict == "singularity" else "gray",
                   ls="--", lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("|phi'(0) + w(0) phi(0)|")
    ax.set_title("boundary functional of the transformed Jost solution")
    save_figure(fig, path)


def render_schwartz(path: Path, rows) -> None:
    fig, ax = plt.subplots(figsize=(6.6, 3.2))
    labels = [r[0] for r in rows]
    metrics = [max(float(r[1]), 1e-18) for r in rows]
    tols = [float(r[2]) for r in rows]
    pos = np.arange(len(rows))
    ax.bar(pos, metrics, 0.6, label="metric")
    ax.plot(pos, tols, "r_", ms=16, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(pos)
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=7)
    ax.legend(fontsize=8)
    ax.set_title("closed-form oracle battery")
    save_figure(fig, path)
