"""Matplotlib figures for benchmark CSVs.

Three figures per sweep, written next to the CSV:

* ``<stem>_runtime.png``  median total runtime per parameter, one line per scheme
* ``<stem>_phases.png``   per-scheme stacked phase shares (keygen/encrypt/cloud/decrypt)
* ``<stem>_size.png``     ciphertext bytes per operand
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import PHASES, BenchRecord, medians, phase_shares  # noqa: E402

_LABELS = {"input": "summand width (bits)", "key": "key size k"}
_COLORS = {"keygen": "#4c72b0", "encrypt": "#55a868", "cloud": "#8172b2", "decrypt": "#c44e52"}


def _by_scheme(records) -> Dict[str, List[BenchRecord]]:
    out: Dict[str, List[BenchRecord]] = {}
    for r in records:
        out.setdefault(r.scheme, []).append(r)
    return out


def plot_runtime(records: Sequence[BenchRecord], ax, log_scale=False):
    for scheme, recs in sorted(_by_scheme(records).items()):
        meds = medians(recs)
        if meds:
            ax.plot(list(meds), [v / 1e6 for v in meds.values()], marker="o", label=scheme)
    ax.set_ylabel("median runtime (ms)")
    if log_scale:
        ax.set_yscale("log")
    ax.legend()
    ax.grid(alpha=0.3)


def plot_phase_shares(records: Sequence[BenchRecord], axes):
    groups = sorted(_by_scheme(records).items())
    for ax, (scheme, recs) in zip(axes, groups):
        params = sorted({r.param for r in recs if r.ok})
        bottom = [0.0] * len(params)
        for phase in PHASES[:-1]:
            share = [100 * phase_shares(recs, p)[phase] for p in params]
            ax.bar([str(p) for p in params], share, bottom=bottom, label=phase, color=_COLORS[phase])
            bottom = [b + s for b, s in zip(bottom, share)]
        ax.set_title(scheme)
        ax.set_ylim(0, 100)
    axes[0].set_ylabel("share of runtime (%)")
    axes[-1].legend(loc="upper left", bbox_to_anchor=(1.0, 1.0))


def plot_sizes(records: Sequence[BenchRecord], ax):
    for scheme, recs in sorted(_by_scheme(records).items()):
        sizes = {}
        for r in recs:
            if r.ok and r.phase == "total":
                sizes[r.param] = r.ct_bytes
        params = sorted(sizes)
        ax.step(params, [sizes[p] for p in params], where="post", marker=".", label=scheme)
    ax.set_ylabel("ciphertext bytes per operand")
    ax.set_yscale("log")
    ax.legend()
    ax.grid(alpha=0.3)


def render(records: Sequence[BenchRecord], csv_path) -> List[Path]:
    """Write the three figures beside ``csv_path`` and return their paths."""
    records = list(records)
    csv_path = Path(csv_path)
    sweep = records[0].sweep if records else "input"
    xlabel = _LABELS.get(sweep, "parameter")
    stem = csv_path.with_suffix("")
    written = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    plot_runtime(records, ax, log_scale=sweep == "key")
    ax.set_xlabel(xlabel)
    written.append(_save(fig, f"{stem}_runtime.png"))

    n = len(_by_scheme(records)) or 1
    fig, axes = plt.subplots(1, n, figsize=(4 * n + 1.5, 4.5), squeeze=False, sharey=True)
    plot_phase_shares(records, list(axes[0]))
    crowded = len({r.param for r in records}) > 12
    for ax in axes[0]:
        ax.set_xlabel(xlabel)
        if crowded:
            ax.tick_params(axis="x", labelrotation=90, labelsize=7)
    written.append(_save(fig, f"{stem}_phases.png"))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    plot_sizes(records, ax)
    ax.set_xlabel(xlabel)
    written.append(_save(fig, f"{stem}_size.png"))
    return written


def _save(fig, path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
