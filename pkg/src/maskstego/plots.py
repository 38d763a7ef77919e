"""Figure rendering for sweep reports (payload capacity and distortion
against the masking interval and the probability threshold)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _numeric_rows(rows: list[dict]) -> list[dict]:
    out = []
    for row in rows:
        if row.get("errors"):
            continue
        out.append({
            "f": int(row["f"]),
            "p": float(row["p"]),
            "bits_per_word": float(row["bits_per_word"]),
            "distortion_rate": float(row["distortion_rate"]),
        })
    return out


def render_sweep_figures(rows: list[dict], outdir) -> list[Path]:
    """Write capacity-vs-f, capacity-vs-p, and distortion-vs-f line plots as
    PNG files next to the CSV output. Returns the paths written."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data = _numeric_rows(rows)
    written: list[Path] = []
    if not data:
        return written

    p_values = sorted({r["p"] for r in data})
    f_values = sorted({r["f"] for r in data})

    def series(fixed_key, fixed_val, x_key, y_key):
        pts = sorted((r[x_key], r[y_key]) for r in data if r[fixed_key] == fixed_val)
        return [x for x, _ in pts], [y for _, y in pts]

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for p in p_values:
        xs, ys = series("p", p, "f", "bits_per_word")
        ax.plot(xs, ys, marker="o", label=f"p = {p:g}")
    ax.set_xlabel("masking interval f")
    ax.set_ylabel("bits per word")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / "capacity_vs_f.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for f in f_values:
        xs, ys = series("f", f, "p", "bits_per_word")
        ax.plot(xs, ys, marker="o", label=f"f = {f}")
    ax.set_xscale("log")
    ax.set_xlabel("probability threshold p")
    ax.set_ylabel("bits per word")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / "capacity_vs_p.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for p in p_values:
        xs, ys = series("p", p, "f", "distortion_rate")
        ax.plot(xs, ys, marker="o", label=f"p = {p:g}")
    ax.set_xlabel("masking interval f")
    ax.set_ylabel("unsafe-candidate rate")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / "distortion_vs_f.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    return written
