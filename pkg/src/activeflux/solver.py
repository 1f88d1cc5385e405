"""The scheme's time loop.

One step: build the (limited) reconstruction from the current averages and
point values, evolve every point DOF to t + dt/2 and t + dt with the
configured operator, form intercell fluxes by Simpson quadrature in time
(and along edges in 2D), update the averages conservatively and replace the
point DOFs by their full-step evolutions.  The time step obeys
dt = cfl * dx / lam_max with lam_max taken over the point values (half the
edge length in 2D); the final step is clipped to land exactly on t_end.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np

from .core import BoundaryMode, Grid1D, Grid2D, State1D, State2D
from .evolution_scalar import (fixpoint_modified_1d, fixpoint_modified_2d,
                               fixpoint_simple, fixpoint_simple_2d)
from .evolution_system import RK2Config, evolve_point_projector, evolve_point_rk2
from .models import ScalarModel, ScalarModel2D
from .reconstruction import (LimiterMode, NO_LIMITER, Reconstruction1D,
                             Reconstruction2D)


class SolverError(RuntimeError):
    """A step produced an invalid state; carries time/step diagnostics."""


class Operator(Enum):
    SCALAR_SIMPLE = "simple"
    SCALAR_MODIFIED = "modified"
    SYSTEM_PROJECTOR = "projector"
    SYSTEM_RK2 = "rk2"
    SYSTEM_RK2_FIXED = "rk2-fixed"


_SCALAR_OPS = (Operator.SCALAR_SIMPLE, Operator.SCALAR_MODIFIED)


@dataclass(frozen=True)
class SolverConfig:
    cfl: float
    t_end: float
    operator: Operator
    limiter: LimiterMode = NO_LIMITER
    bc: BoundaryMode = BoundaryMode.PERIODIC
    rk_alpha: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.cfl < 1.0:
            raise ValueError("cfl must lie in (0, 1)")
        if self.t_end < 0.0:
            raise ValueError("t_end must be nonnegative")
        if not 0.0 < self.rk_alpha <= 1.0:
            raise ValueError("rk_alpha must lie in (0, 1]")


@dataclass(frozen=True)
class StepRecord:
    t: float
    dt: float
    avg_min: np.ndarray
    avg_max: np.ndarray
    point_min: np.ndarray
    point_max: np.ndarray


def check_compatible(model, operator: Operator) -> None:
    scalar = isinstance(model, (ScalarModel, ScalarModel2D))
    if scalar and operator not in _SCALAR_OPS:
        raise ValueError(f"operator {operator.value} needs a system model")
    if not scalar and operator in _SCALAR_OPS:
        raise ValueError(f"operator {operator.value} needs a scalar model")
    if operator in (Operator.SYSTEM_RK2, Operator.SYSTEM_RK2_FIXED):
        if not model.has_characteristic_variables:
            raise ValueError(
                f"{model.name} has no characteristic variables; use projector")


def compute_dt(state: State1D, grid: Grid1D, model, cfl: float,
               t_remaining: Optional[float] = None) -> float:
    """cfl * dx / lam_max with lam_max over the point values; capped by the
    remaining time (equal to it when no wave moves)."""
    if isinstance(model, ScalarModel):
        lam_max = float(np.max(np.abs(model.speed(state.points[:, 0]))))
    else:
        w = model.to_working(state.points)
        model.validate(w, "time-step estimate")
        lam_max = model.max_speed(w)
    dt = cfl * grid.dx / lam_max if lam_max > 0.0 else np.inf
    if t_remaining is not None:
        dt = min(dt, t_remaining)
    if not np.isfinite(dt) or dt <= 0.0:
        raise SolverError(f"no admissible time step (lam_max={lam_max})")
    return dt


def compute_dt_2d(state: State2D, grid: Grid2D, model: ScalarModel2D,
                  cfl: float, t_remaining: Optional[float] = None) -> float:
    """2D rule: half the shortest edge over the largest edge-midpoint speed."""
    mags = [np.hypot(model.speed_x(arr), model.speed_y(arr))
            for arr in (state.xmid, state.ymid)]
    lam_max = float(max(np.max(m) for m in mags))
    dt = cfl * min(grid.dx, grid.dy) / (2.0 * lam_max) if lam_max > 0.0 else np.inf
    if t_remaining is not None:
        dt = min(dt, t_remaining)
    if not np.isfinite(dt) or dt <= 0.0:
        raise SolverError(f"no admissible time step (lam_max={lam_max})")
    return dt


def _make_evolver(model, grid: Grid1D, cfg: SolverConfig,
                  recon: Reconstruction1D) -> Callable:
    """Point evolution closure (xs, tau) -> (len(xs), m) conservative values.

    Data and speeds both come from the frozen time-t^n reconstruction."""
    op = cfg.operator
    if op in _SCALAR_OPS:
        def sdata(y):
            return recon(y)[:, 0]

        def sspeed(y):
            return model.speed(sdata(y))

        if op is Operator.SCALAR_SIMPLE:
            return lambda xs, tau: fixpoint_simple(xs, tau, sdata, sspeed).value[:, None]
        return lambda xs, tau: fixpoint_modified_1d(xs, tau, sdata, sspeed,
                                                    grid.dx).value[:, None]
    if op is Operator.SYSTEM_PROJECTOR:
        return lambda xs, tau: evolve_point_projector(xs, tau, model, recon)
    rk_cfg = RK2Config(alpha=cfg.rk_alpha,
                       fix_enabled=op is Operator.SYSTEM_RK2_FIXED,
                       dx=grid.dx if op is Operator.SYSTEM_RK2_FIXED else 0.0)
    return lambda xs, tau: evolve_point_rk2(xs, tau, model, recon, rk_cfg)


def step(state: State1D, grid: Grid1D, model, cfg: SolverConfig) -> Tuple[State1D, StepRecord]:
    """Advance one step; returns the new state and its record."""
    check_compatible(model, cfg.operator)
    remaining = cfg.t_end - state.t
    if remaining <= 0.0:
        raise SolverError("step called at or beyond t_end")
    dt = compute_dt(state, grid, model, cfg.cfl, remaining)

    recon = Reconstruction1D(grid, cfg.bc, state.averages, state.points,
                             cfg.limiter)
    evolve = _make_evolver(model, grid, cfg, recon)
    xs = grid.interfaces(cfg.bc)
    q_half = evolve(xs, 0.5 * dt)
    q_full = evolve(xs, dt)

    f_now = model.flux(state.points)
    f_half = model.flux(q_half)
    f_full = model.flux(q_full)
    # difference form of Simpson in time: constants telescope bitwise
    f_edge = f_half + ((f_now - f_half) + (f_full - f_half)) / 6.0
    if cfg.bc is BoundaryMode.PERIODIC:
        df = np.roll(f_edge, -1, axis=0) - f_edge
    else:
        df = f_edge[1:] - f_edge[:-1]
    averages = state.averages - (dt / grid.dx) * df

    t_new = cfg.t_end if dt >= remaining else state.t + dt
    if not (np.all(np.isfinite(averages)) and np.all(np.isfinite(q_full))):
        raise SolverError(f"non-finite state after step at t={state.t:.6g}, dt={dt:.3g}")
    new_state = State1D(t_new, averages, q_full)
    rec = StepRecord(t_new, dt, averages.min(axis=0), averages.max(axis=0),
                     q_full.min(axis=0), q_full.max(axis=0))
    return new_state, rec


def run(state: State1D, grid: Grid1D, model, cfg: SolverConfig,
        on_step: Optional[Callable] = None,
        max_steps: int = 10_000_000) -> Tuple[State1D, List[StepRecord]]:
    """Repeat step until t_end (exact landing); optional per-step callback."""
    records: List[StepRecord] = []
    steps = 0
    while cfg.t_end - state.t > 0.0:
        if steps >= max_steps:
            raise SolverError(f"exceeded {max_steps} steps")
        state, rec = step(state, grid, model, cfg)
        records.append(rec)
        if on_step is not None:
            on_step(state)
        steps += 1
    return state, records


def _coord_batches_2d(grid: Grid2D, bc: BoundaryMode):
    ix, iy = grid.ifaces_x(bc), grid.ifaces_y(bc)
    mx, my = grid.mids_x(), grid.mids_y()
    cx, cy = np.meshgrid(ix, iy, indexing="ij")
    xx, xy = np.meshgrid(mx, iy, indexing="ij")
    yx, yy = np.meshgrid(ix, my, indexing="ij")
    shapes = (cx.shape, xx.shape, yx.shape)
    xs = np.concatenate([cx.ravel(), xx.ravel(), yx.ravel()])
    ys = np.concatenate([cy.ravel(), xy.ravel(), yy.ravel()])
    return xs, ys, shapes


def _split_2d(flat: np.ndarray, shapes) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    sizes = [int(np.prod(s)) for s in shapes]
    parts = np.split(flat, np.cumsum(sizes)[:-1])
    return tuple(p.reshape(s) for p, s in zip(parts, shapes))


def step_2d(state: State2D, grid: Grid2D, model: ScalarModel2D,
            cfg: SolverConfig) -> Tuple[State2D, StepRecord]:
    """2D scalar step: evolve corners and edge midpoints, update averages
    with the tensor space-time Simpson flux."""
    check_compatible(model, cfg.operator)
    remaining = cfg.t_end - state.t
    if remaining <= 0.0:
        raise SolverError("step called at or beyond t_end")
    dt = compute_dt_2d(state, grid, model, cfg.cfl, remaining)

    recon = Reconstruction2D(grid, cfg.bc, state)

    def speed(xq, yq):
        q = recon(xq, yq)
        return model.speed_x(q), model.speed_y(q)

    xs, ys, shapes = _coord_batches_2d(grid, cfg.bc)

    def evolve(tau: float):
        if cfg.operator is Operator.SCALAR_SIMPLE:
            res = fixpoint_simple_2d(xs, ys, tau, recon, speed)
        else:
            res = fixpoint_modified_2d(xs, ys, tau, recon, speed, grid.dx, grid.dy)
        return _split_2d(res.value, shapes)

    halves = evolve(0.5 * dt)
    fulls = evolve(dt)
    currents = (state.corners, state.xmid, state.ymid)

    def time_simpson(fn, idx_pair):
        g_now = fn(currents[idx_pair[0]], currents[idx_pair[1]])
        g_half = fn(halves[idx_pair[0]], halves[idx_pair[1]])
        g_full = fn(fulls[idx_pair[0]], fulls[idx_pair[1]])
        return g_half + ((g_now - g_half) + (g_full - g_half)) / 6.0

    per = cfg.bc is BoundaryMode.PERIODIC

    # Vertical edges (normal x): corners (i, j), (i, j+1) and ymid (i, j).
    def fx_edge(corner, ymid):
        c_lo = corner if per else corner[:, :-1]
        c_hi = np.roll(corner, -1, axis=1) if per else corner[:, 1:]
        f_mid = model.flux_x(ymid)
        return f_mid + ((model.flux_x(c_lo) - f_mid)
                        + (model.flux_x(c_hi) - f_mid)) / 6.0

    # Horizontal edges (normal y): corners (i, j), (i+1, j) and xmid (i, j).
    def gy_edge(corner, xmid):
        c_lo = corner if per else corner[:-1, :]
        c_hi = np.roll(corner, -1, axis=0) if per else corner[1:, :]
        f_mid = model.flux_y(xmid)
        return f_mid + ((model.flux_y(c_lo) - f_mid)
                        + (model.flux_y(c_hi) - f_mid)) / 6.0

    fx = time_simpson(fx_edge, (0, 2))
    gy = time_simpson(gy_edge, (0, 1))

    if per:
        dfx = np.roll(fx, -1, axis=0) - fx
        dgy = np.roll(gy, -1, axis=1) - gy
    else:
        dfx = fx[1:, :] - fx[:-1, :]
        dgy = gy[:, 1:] - gy[:, :-1]
    averages = state.averages - dt * (dfx / grid.dx + dgy / grid.dy)

    t_new = cfg.t_end if dt >= remaining else state.t + dt
    arrays = (averages,) + fulls
    if not all(np.all(np.isfinite(a)) for a in arrays):
        raise SolverError(f"non-finite 2D state after step at t={state.t:.6g}")
    new_state = State2D(t_new, averages, *fulls)
    pt_min = min(float(a.min()) for a in fulls)
    pt_max = max(float(a.max()) for a in fulls)
    rec = StepRecord(t_new, dt, np.array([averages.min()]), np.array([averages.max()]),
                     np.array([pt_min]), np.array([pt_max]))
    return new_state, rec


def run_2d(state: State2D, grid: Grid2D, model: ScalarModel2D, cfg: SolverConfig,
           on_step: Optional[Callable] = None,
           max_steps: int = 10_000_000) -> Tuple[State2D, List[StepRecord]]:
    records: List[StepRecord] = []
    steps = 0
    while cfg.t_end - state.t > 0.0:
        if steps >= max_steps:
            raise SolverError(f"exceeded {max_steps} steps")
        state, rec = step_2d(state, grid, model, cfg)
        records.append(rec)
        if on_step is not None:
            on_step(state)
        steps += 1
    return state, records


def l1_errors(state: State1D, grid: Grid1D, bc: BoundaryMode,
              reference: Callable) -> Tuple[np.ndarray, np.ndarray]:
    """l1 distances to an evaluable reference, per variable.

    Average error: sum_i |avg_i - ref_avg_i| * dx with the reference cell
    averages from per-cell Simpson.  Point error: sum_j |q_j - ref(x_j)| * dx.
    """
    def ref(xq: np.ndarray) -> np.ndarray:
        vals = np.asarray(reference(xq), dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        return vals

    ref_pts = ref(grid.interfaces(bc))
    point_err = np.sum(np.abs(state.points - ref_pts), axis=0) * grid.dx

    xl = grid.x_min + grid.dx * np.arange(grid.n_cells)
    r_l = ref(xl)
    r_c = ref(xl + 0.5 * grid.dx)
    r_r = ref(xl + grid.dx)
    ref_avg = r_c + ((r_l - r_c) + (r_r - r_c)) / 6.0
    avg_err = np.sum(np.abs(state.averages - ref_avg), axis=0) * grid.dx
    return avg_err, point_err
