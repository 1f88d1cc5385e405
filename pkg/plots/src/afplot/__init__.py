"""Render solver CSV outputs: solution snapshots, log-log convergence plots
with a slope-3 guide, and 2D heatmaps.

The scripts read only the solver's CSV schema and a small key = value spec
file; repeated invocations on the same inputs produce identical images.
"""

from .figures import (FigureSpec, SchemaError, load_table, plot_convergence,
                      plot_heatmap, plot_snapshot)

__all__ = ["FigureSpec", "SchemaError", "load_table", "plot_convergence",
           "plot_heatmap", "plot_snapshot"]
