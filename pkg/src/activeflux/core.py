"""Grids, degree-of-freedom storage and cell lookup for 1D lines and 2D meshes.

The scheme carries two DOF families per cell: the conservative cell average
and point values shared between neighbouring cells.  In 1D the point values
sit on the interfaces; in 2D they sit on cell corners and edge midpoints and
every shared location is stored exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np


class BoundaryMode(Enum):
    """Domain-edge behaviour: index wrapping or zeroth-order continuation."""

    PERIODIC = "periodic"
    EXTRAPOLATE = "extrapolate"


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D grid; cell i spans [x_min + i*dx, x_min + (i+1)*dx)."""

    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.n_cells < 3:
            raise ValueError("grid needs at least 3 cells")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    def n_interfaces(self, bc: BoundaryMode) -> int:
        # Periodic grids identify interface n with interface 0.
        return self.n_cells if bc is BoundaryMode.PERIODIC else self.n_cells + 1

    def interfaces(self, bc: BoundaryMode) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_interfaces(bc))

    def centers(self) -> np.ndarray:
        return self.x_min + self.dx * (np.arange(self.n_cells) + 0.5)


@dataclass(frozen=True)
class Grid2D:
    """Uniform Cartesian 2D grid.

    Point values live on the (nx+1)(ny+1) corners, the nx(ny+1) midpoints of
    x-parallel edges and the (nx+1)ny midpoints of y-parallel edges; periodic
    grids drop the duplicated boundary layer.
    """

    x_min: float
    y_min: float
    nx: int
    ny: int
    dx: float
    dy: float

    def __post_init__(self) -> None:
        if self.nx < 3 or self.ny < 3:
            raise ValueError("grid needs at least 3 cells per direction")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("cell sizes must be positive")

    @property
    def x_max(self) -> float:
        return self.x_min + self.nx * self.dx

    @property
    def y_max(self) -> float:
        return self.y_min + self.ny * self.dy

    def n_ifaces_x(self, bc: BoundaryMode) -> int:
        return self.nx if bc is BoundaryMode.PERIODIC else self.nx + 1

    def n_ifaces_y(self, bc: BoundaryMode) -> int:
        return self.ny if bc is BoundaryMode.PERIODIC else self.ny + 1

    def ifaces_x(self, bc: BoundaryMode) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_ifaces_x(bc))

    def ifaces_y(self, bc: BoundaryMode) -> np.ndarray:
        return self.y_min + self.dy * np.arange(self.n_ifaces_y(bc))

    def mids_x(self) -> np.ndarray:
        return self.x_min + self.dx * (np.arange(self.nx) + 0.5)

    def mids_y(self) -> np.ndarray:
        return self.y_min + self.dy * (np.arange(self.ny) + 0.5)

    def centers_x(self) -> np.ndarray:
        return self.mids_x()

    def centers_y(self) -> np.ndarray:
        return self.mids_y()


@dataclass
class State1D:
    """Cell averages and interface point values at one time level.

    averages has shape (n_cells, m), points (n_interfaces, m) where m is the
    model's system size.  Treated as immutable; the solver returns new states.
    """

    t: float
    averages: np.ndarray
    points: np.ndarray

    @property
    def m(self) -> int:
        return self.averages.shape[1]

    def copy(self) -> "State1D":
        return State1D(self.t, self.averages.copy(), self.points.copy())


@dataclass
class State2D:
    """Scalar 2D state: averages plus corner and edge-midpoint point values.

    xmid holds values at midpoints of x-parallel edges (index [i, j] sits at
    (x_min + (i+1/2)dx, y_min + j*dy)), ymid at midpoints of y-parallel edges.
    """

    t: float
    averages: np.ndarray
    corners: np.ndarray
    xmid: np.ndarray
    ymid: np.ndarray

    def copy(self) -> "State2D":
        return State2D(self.t, self.averages.copy(), self.corners.copy(),
                       self.xmid.copy(), self.ymid.copy())


def _require_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite values in {what}")


def locate_cell(grid: Grid1D, x, bc: BoundaryMode):
    """Map coordinates to owning cell indices.

    Periodic wraps x by the domain length and returns the wrapped coordinate;
    Extrapolate clamps coordinates outside the domain to the nearest boundary
    cell.  Accepts scalars or arrays; non-finite input raises.
    """
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)):
        raise ValueError("non-finite coordinate passed to locate_cell")
    if bc is BoundaryMode.PERIODIC:
        x_eff = grid.x_min + np.mod(x_arr - grid.x_min, grid.length)
    else:
        x_eff = np.clip(x_arr, grid.x_min, grid.x_max)
    idx = np.floor((x_eff - grid.x_min) / grid.dx).astype(np.intp)
    idx = np.clip(idx, 0, grid.n_cells - 1)
    if np.ndim(x) == 0:
        return int(idx), float(x_eff)
    return idx, x_eff


def _sample(q0: Callable, xs: np.ndarray, m: int) -> np.ndarray:
    vals = np.asarray(q0(xs), dtype=float)
    if vals.ndim == 0:
        vals = np.full((len(xs), 1), float(vals))
    elif vals.ndim == 1:
        vals = vals[:, None]
    if vals.shape != (len(xs), m):
        raise ValueError(f"initial function returned shape {vals.shape}, "
                         f"expected ({len(xs)}, {m})")
    return vals


def init_state(grid: Grid1D, model, q0: Callable, bc: BoundaryMode) -> State1D:
    """Build a state at t=0 from an initial function.

    Point values are sampled pointwise at the interfaces; averages use
    Simpson's rule per cell (endpoints plus midpoint), whose O(dx^4) error
    does not cap third-order convergence.
    """
    m = model.m
    points = _sample(q0, grid.interfaces(bc), m)
    xl = grid.x_min + grid.dx * np.arange(grid.n_cells)
    q_l = _sample(q0, xl, m)
    q_c = _sample(q0, xl + 0.5 * grid.dx, m)
    q_r = _sample(q0, xl + grid.dx, m)
    # difference form of Simpson: bitwise exact on constant data
    averages = q_c + ((q_l - q_c) + (q_r - q_c)) / 6.0
    _require_finite(points, "initial point values")
    _require_finite(averages, "initial averages")
    return State1D(0.0, averages, points)


def init_state_2d(grid: Grid2D, q0: Callable, bc: BoundaryMode) -> State2D:
    """2D analogue of init_state for scalar models.

    q0 takes broadcastable coordinate arrays (x, y).  Averages use the
    tensor-product Simpson rule (3x3 nodes per cell).
    """
    ix, iy = grid.ifaces_x(bc), grid.ifaces_y(bc)
    mx, my = grid.mids_x(), grid.mids_y()
    corners = np.asarray(q0(ix[:, None], iy[None, :]), dtype=float)
    xmid = np.asarray(q0(mx[:, None], iy[None, :]), dtype=float)
    ymid = np.asarray(q0(ix[:, None], my[None, :]), dtype=float)

    xl = grid.x_min + grid.dx * np.arange(grid.nx)
    yl = grid.y_min + grid.dy * np.arange(grid.ny)
    w = (1.0, 4.0, 1.0)
    xs3 = (xl, xl + 0.5 * grid.dx, xl + grid.dx)
    ys3 = (yl, yl + 0.5 * grid.dy, yl + grid.dy)
    q_cc = np.asarray(q0(xs3[1][:, None], ys3[1][None, :]), dtype=float)
    # tensor Simpson in difference form: bitwise exact on constant data
    correction = np.zeros((grid.nx, grid.ny))
    for a in range(3):
        for b in range(3):
            if a == 1 and b == 1:
                continue
            sample = np.asarray(q0(xs3[a][:, None], ys3[b][None, :]), dtype=float)
            correction += (w[a] * w[b]) * (sample - q_cc)
    averages = q_cc + correction / 36.0
    for arr, name in ((corners, "corners"), (xmid, "xmid"), (ymid, "ymid"),
                      (averages, "averages")):
        _require_finite(arr, f"initial {name}")
    return State2D(0.0, averages, corners, xmid, ymid)


def total_conserved(state: State1D, grid: Grid1D) -> np.ndarray:
    """Integral of the averages over the domain, per variable."""
    return state.averages.sum(axis=0) * grid.dx


def total_conserved_2d(state: State2D, grid: Grid2D) -> float:
    return float(state.averages.sum() * grid.dx * grid.dy)
