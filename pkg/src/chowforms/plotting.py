"""Matplotlib figures for formula tables, written next to the delimited output."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .formulas import WaringProfile  # noqa: E402


def plot_profiles(rows: Sequence[WaringProfile], path: str | Path, max_series: int = 6) -> Path:
    """Summand counts against degree, one panel per invariant, one line per ``n``.

    Defective pairs are marked on the left panel; the right panel shows the
    number of decimal digits of the VSH degree.
    """
    by_n: dict[int, list[WaringProfile]] = defaultdict(list)
    for row in rows:
        by_n[row.n].append(row)
    ns = sorted(by_n)[:max_series]

    fig, (ax_s, ax_deg) = plt.subplots(1, 2, figsize=(10, 4))
    for n in ns:
        pts = sorted(by_n[n], key=lambda r: r.d)
        ds = [r.d for r in pts]
        line, = ax_s.plot(ds, [r.smin for r in pts], marker="o", ms=3, label=f"n={n} smin")
        ax_s.plot(ds, [r.sexp for r in pts], ls="--", color=line.get_color(), lw=1)
        bad = [r for r in pts if r.defective]
        ax_s.scatter([r.d for r in bad], [r.smin for r in bad], marker="x",
                     color=line.get_color(), zorder=3)
        ax_deg.plot(ds, [len(str(r.vsh_degree)) for r in pts], marker=".", label=f"n={n}")
    ax_s.set_xlabel("degree d")
    ax_s.set_ylabel("summands (solid: smin, dashed: sexp, x: defective)")
    ax_deg.set_xlabel("degree d")
    ax_deg.set_ylabel("digits of deg VSH")
    ax_s.legend(fontsize=7)
    ax_deg.legend(fontsize=7)
    fig.tight_layout()

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
