"""Figure builders over the solver CSV schema."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class SchemaError(ValueError):
    """An input CSV misses a required column."""


@dataclass
class FigureSpec:
    kind: str                       # snapshot | convergence | heatmap
    inputs: List[Path]
    output: Path
    exact: Optional[Path] = None
    var: Optional[str] = None
    xlabel: str = "x"
    ylabel: str = ""
    title: str = ""
    labels: List[str] = field(default_factory=list)


def load_table(path: Path) -> Dict[str, np.ndarray]:
    """CSV with a header row and optional '#' comment lines -> column dict."""
    path = Path(path)
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    header = [c.strip() for c in lines[0].split(",")]
    rows = [ln.rstrip("\n").split(",") for ln in lines[1:]]
    cols: Dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        vals = [r[j] if j < len(r) else "" for r in rows]
        cols[name] = np.array([float(v) if v else np.nan for v in vals])
    return cols


def _require(cols: Dict[str, np.ndarray], name: str, path: Path) -> np.ndarray:
    if name not in cols:
        raise SchemaError(f"missing column '{name}' in {path}")
    return cols[name]


def _value_column(cols: Dict[str, np.ndarray], path: Path,
                  var: Optional[str]) -> tuple:
    """Pick the variable column of a snapshot table (points, averages or an
    exact-solution file)."""
    coords = [c for c in ("x_interface", "x_center", "x") if c in cols]
    if not coords:
        raise SchemaError(f"missing column 'x_interface'/'x_center'/'x' in {path}")
    x = cols[coords[0]]
    candidates = [c for c in cols if c not in ("t", "x", "x_center", "x_interface", "y")]
    if var is not None:
        for prefix in ("point_", "avg_", ""):
            if prefix + var in cols:
                return x, cols[prefix + var], var
        raise SchemaError(f"missing column '{var}' in {path}")
    if not candidates:
        raise SchemaError(f"missing value column in {path}")
    name = candidates[0]
    return x, cols[name], name.replace("point_", "").replace("avg_", "")


def _new_figure():
    return plt.figure(figsize=(6.4, 4.2), dpi=130)


def _finish(fig, spec: FigureSpec) -> Path:
    ax = fig.gca()
    ax.set_xlabel(spec.xlabel)
    if spec.ylabel:
        ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={"Software": "afplot"})
    plt.close(fig)
    return out


def plot_snapshot(spec: FigureSpec) -> Path:
    """Numerical DOFs as markers (first input) plus line overlays for the
    remaining inputs and the optional exact-solution curve."""
    if not spec.inputs:
        raise SchemaError("snapshot needs at least one input CSV")
    fig = _new_figure()
    ax = fig.gca()
    var = spec.var
    for k, path in enumerate(spec.inputs):
        cols = load_table(path)
        x, q, found = _value_column(cols, path, var)
        var = var or found
        label = spec.labels[k] if k < len(spec.labels) else Path(path).stem
        if k == 0:
            ax.plot(x, q, "x", ms=4, color="C0", label=label)
        else:
            ax.plot(x, q, "-", lw=1.2, color=f"C{k}", label=label)
    if spec.exact is not None:
        cols = load_table(spec.exact)
        x, q, _ = _value_column(cols, spec.exact, var)
        ax.plot(x, q, "k-", lw=1.0, label="exact")
    ax.legend(loc="best", fontsize=8)
    if not spec.ylabel:
        spec.ylabel = var or "q"
    return _finish(fig, spec)


def plot_convergence(spec: FigureSpec) -> Path:
    """log-log error vs dx for every error column, with a slope-3 guide
    triangle when at least two resolutions are present."""
    if not spec.inputs:
        raise SchemaError("convergence needs at least one report CSV")
    fig = _new_figure()
    ax = fig.gca()
    color = 0
    dx_all, err_all = [], []
    for k, path in enumerate(spec.inputs):
        cols = load_table(path)
        dx = _require(cols, "dx", path)
        err_cols = [c for c in cols if c.startswith(("avg_err_", "point_err_"))]
        if not err_cols:
            raise SchemaError(f"missing column 'avg_err_*' in {path}")
        tag = spec.labels[k] if k < len(spec.labels) else Path(path).stem
        for name in err_cols:
            label = name.replace("_err_", " ") + (f" [{tag}]" if len(spec.inputs) > 1 else "")
            ax.loglog(dx, cols[name], "o-", ms=4, lw=1.0, color=f"C{color % 10}",
                      label=label)
            color += 1
            dx_all.append(dx)
            err_all.append(cols[name])
    if len(dx_all[0]) >= 2:
        dx0 = np.array([dx_all[0][-1], dx_all[0][0]])
        anchor = err_all[0][-1]
        ax.loglog(dx0, anchor * (dx0 / dx0[0]) ** 3, "k--", lw=0.9,
                  label="slope 3")
    ax.legend(loc="best", fontsize=7)
    spec.xlabel = spec.xlabel if spec.xlabel != "x" else "dx"
    if not spec.ylabel:
        spec.ylabel = "l1 error"
    return _finish(fig, spec)


def plot_heatmap(spec: FigureSpec) -> Path:
    """2D averages (x, y, avg_q columns) as a pseudocolor map."""
    if not spec.inputs:
        raise SchemaError("heatmap needs one 2D solution CSV")
    path = spec.inputs[0]
    cols = load_table(path)
    x = _require(cols, "x", path)
    y = _require(cols, "y", path)
    q = _require(cols, "avg_q", path)
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((len(xs), len(ys)), np.nan)
    ix = np.searchsorted(xs, x)
    iy = np.searchsorted(ys, y)
    grid[ix, iy] = q
    fig = _new_figure()
    ax = fig.gca()
    mesh = ax.pcolormesh(xs, ys, grid.T, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=spec.var or "avg_q")
    ax.set_aspect("equal")
    if not spec.ylabel:
        spec.ylabel = "y"
    return _finish(fig, spec)
