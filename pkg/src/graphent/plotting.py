"""Render report figures to files next to the delimited output."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _columns(header: Sequence[str], rows: Sequence[tuple]) -> dict[str, np.ndarray]:
    cols: dict[str, np.ndarray] = {}
    for k, name in enumerate(header):
        values = [row[k] for row in rows]
        if values and isinstance(values[0], str):
            cols[name] = np.array(values, dtype=object)
        else:
            cols[name] = np.array(values, dtype=float)
    return cols


def render_report(mode: str, header: Sequence[str], rows: Sequence[tuple], out_path: Path) -> Path:
    """Draw the mode-specific figure and save it as a PNG."""
    cols = _columns(header, rows)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    if mode == "exact-pauli":
        ax.plot(cols["p"], cols["negativity"], color="black")
        ax.set_xlabel("p")
        ax.set_ylabel("negativity")
    elif mode == "bounds":
        ax.plot(cols["p"], cols["ub"], "-.", color="tab:blue", label="UB")
        ax.plot(cols["p"], cols["exact_or_oracle"], "-", color="black", label="exact")
        ax.plot(cols["p"], cols["lb_thetapi4"], "--", color="tab:brown", label=r"LB($\pi/4$)")
        ax.plot(cols["p"], cols["lb_theta0"], ":", color="tab:red", label="LB(0)")
        ax.plot(cols["p"], cols["llb"], "-", color="tab:cyan", label="LLB")
        ax.set_xlabel("p")
        ax.set_ylabel("negativity")
        ax.legend(fontsize=8)
    elif mode == "theta-scan":
        ax.plot(cols["theta"], cols["lb"], color="tab:blue", label=r"LB($\theta$)")
        ref = cols["reference"]
        if np.isfinite(ref).all():
            ax.axhline(float(ref[0]), color="gray", lw=0.8, label="exact")
        ax.axvline(math.pi / 4.0, color="tab:red", lw=0.8)
        ax.set_xlabel(r"$\theta$")
        ax.set_ylabel("negativity")
        ax.legend(fontsize=8)
    elif mode == "oracle-check":
        ax.semilogy(cols["case_id"], np.maximum(cols["abs_diff"], 1e-18), "o", ms=3)
        ax.set_xlabel("case")
        ax.set_ylabel("|fast - oracle|")
    else:
        raise ValueError(f"no figure defined for mode {mode!r}")
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path
