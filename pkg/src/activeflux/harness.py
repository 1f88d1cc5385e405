"""Problem presets, convergence studies, Riemann suite and CSV output.

Every preset encodes one published experiment's parameters (grid, CFL,
final time, limiter, operator) so a figure is one command.  Output files are
plain CSV with 17-significant-digit scientific notation, deterministic for a
fixed configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import BoundaryMode, Grid1D, Grid2D, init_state, init_state_2d
from . import models
from .models import EulerState, exact_burgers_piecewise_linear, \
    exact_euler_riemann, exact_scalar_riemann
from .reconstruction import LimiterKind, LimiterMode, Reconstruction1D
from .solver import (Operator, SolverConfig, StepRecord, l1_errors, run,
                     run_2d)

_LIMITERS = {k.value: k for k in LimiterKind}
_OPERATORS = {o.value: o for o in Operator}
_BCS = {b.value: b for b in BoundaryMode}


@dataclass(frozen=True)
class Preset:
    """One experiment: model, initial data, grid and solver defaults."""

    name: str
    figure: str
    kind: str                      # "1d" or "2d"
    model_id: str
    ic_id: str
    x_min: float
    x_max: float
    n_cells: int
    cfl: float
    t_end: float
    limiter: str = "none"
    operator: str = "modified"
    bc: str = "periodic"
    rk_alpha: float = 0.5
    domain_padding: float = 0.0
    reference: str = "none"        # none | pwlinear | exact-riemann |
                                   # exact-euler | exact-advection | fine:<n>:<op>
    notes: str = ""


def _gaussian(base: float, amp: float, beta: float, center: float) -> Callable:
    return lambda x: base + amp * np.exp(-beta * (np.asarray(x) - center) ** 2)


def _step_fn(left: float, right: float, jump: float) -> Callable:
    return lambda x: np.where(np.asarray(x) < jump, left, right)


def _advection_profile(x) -> np.ndarray:
    """Square pulse + triangle + Gaussian on [0, 3.5] (limiter demo data)."""
    x = np.asarray(x, dtype=float)
    sq = ((x > 0.5) & (x < 1.0)).astype(float)
    tri = np.clip(1.0 - np.abs(x - 1.75) / 0.35, 0.0, None)
    gs = np.exp(-((x - 2.6) / 0.1) ** 2)
    return sq + tri + gs


_SOD = (EulerState(1.0, 0.0, 1.0), EulerState(0.125, 0.0, 0.1))
_LAX = (EulerState(0.445, 0.698, 3.528), EulerState(0.5, 0.0, 0.571))


def _euler_rp_ic(model, left: EulerState, right: EulerState, jump: float) -> Callable:
    def ic(x):
        x = np.asarray(x)
        w = np.where(x[:, None] < jump,
                     np.array([left.rho, left.v, left.p]),
                     np.array([right.rho, right.v, right.p]))
        return model.to_conservative(w)
    return ic


def _shu_osher_ic(model) -> Callable:
    def ic(x):
        x = np.asarray(x)
        rho = np.where(x < 0.1, 3.857143, 1.0 + 0.2 * np.sin(50.0 * x))
        v = np.where(x < 0.1, 2.629369, 0.0)
        p = np.where(x < 0.1, 10.33333, 1.0)
        return model.to_conservative(np.stack([rho, v, p], axis=-1))
    return ic


def _quadrant_ic(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    east = x >= 0.5
    north = y >= 0.5
    return np.where(east, np.where(north, -1.0, 0.8),
                    np.where(north, -0.2, 0.5))


PRESETS: Dict[str, Preset] = {p.name: p for p in [
    Preset("burgers-gauss", "smooth convergence study", "1d", "burgers",
           "gauss-1-05-80", 0.0, 1.0, 100, 0.45, 0.05,
           operator="modified", reference="pwlinear",
           notes="gaussian base 1 amp 0.5 exponent 80, figure-calibrated"),
    Preset("burgers-rp-10", "entropy-fix demonstration pair", "1d", "burgers",
           "rp-1-0", 0.0, 2.0, 200, 0.9, 0.6, limiter="power",
           operator="modified", bc="extrapolate", reference="exact-riemann"),
    Preset("burgers-selfsteepen", "tanh data steepening into a moving shock",
           "1d", "burgers", "tanh-075", 0.0, 3.0, 300, 0.9, 0.6,
           limiter="power", operator="modified", bc="extrapolate",
           notes="q = 0.75 - 1.25 tanh((x-1)/0.375), shock speed 0.75"),
    Preset("burgers-transonic", "transonic rarefaction", "1d", "burgers",
           "rp--1-1", 0.0, 2.0, 100, 0.45, 0.1, limiter="power",
           operator="modified", bc="extrapolate", reference="exact-riemann"),
    Preset("quartic-rp", "strong quartic-flux shock", "1d", "quartic",
           "rp-1--5", 0.0, 2.0, 100, 0.45, 0.01, limiter="power",
           operator="modified", bc="extrapolate", reference="exact-riemann"),
    Preset("quartic-transonic", "quartic transonic rarefaction", "1d",
           "quartic", "rp--1-1", 0.0, 2.0, 100, 0.45, 0.1, limiter="power",
           operator="modified", bc="extrapolate", reference="exact-riemann"),
    Preset("advection-limiter", "limiter effect after one revolution", "1d",
           "advection", "composite", 0.0, 3.5, 250, 0.45, 3.5,
           limiter="power", operator="simple", reference="exact-advection",
           notes="square+triangle+gaussian profile, figure-calibrated"),
    Preset("psystem-gauss", "p-system smooth convergence", "1d", "p-system",
           "density-gauss", 0.0, 1.0, 100, 0.45, 0.2, operator="rk2",
           reference="fine:16384:rk2"),
    Preset("psystem-rp", "p-system Riemann box", "1d", "p-system",
           "box-psystem", 0.0, 1.0, 100, 0.45, 0.1, limiter="sym-power",
           operator="rk2"),
    Preset("isentropic-gauss", "isentropic Euler smooth convergence", "1d",
           "isentropic", "density-gauss", 0.0, 1.0, 100, 0.45, 0.1,
           operator="rk2", reference="fine:16384:rk2",
           notes="final time not printed in the source figure; 0.1 chosen"),
    Preset("isentropic-rp", "isentropic double rarefaction + shocks", "1d",
           "isentropic", "box-isentropic", 0.0, 1.0, 200, 0.45, 0.05,
           limiter="power", operator="rk2-fixed"),
    Preset("euler-gauss", "full Euler smooth convergence", "1d", "euler",
           "density-gauss", 0.0, 1.0, 100, 0.7, 0.25, operator="projector",
           reference="fine:2048:projector",
           notes="rho0 = p0 = 1 + exp(-80 (x-1/2)^2)/2, v0 = 0"),
    Preset("sod", "Sod shock tube", "1d", "euler", "sod", 0.0, 1.0, 200,
           0.7, 0.1, limiter="sym-power", operator="projector",
           bc="extrapolate", reference="exact-euler"),
    Preset("lax", "Lax shock tube", "1d", "euler", "lax", 0.0, 1.0, 200,
           0.7, 0.1, limiter="sym-power", operator="projector",
           bc="extrapolate", reference="exact-euler",
           notes="standard Lax states, external to the source"),
    Preset("shu-osher", "shock / sound-wave interaction", "1d", "euler",
           "shu-osher", 0.0, 1.0, 240, 0.7, 0.18, limiter="sym-power",
           operator="projector", bc="extrapolate"),
    Preset("burgers2d-quadrant", "4-quadrant 2D Riemann problem", "2d",
           "burgers2d", "quadrant", 0.0, 1.0, 200, 0.9, 0.3,
           operator="modified", domain_padding=0.5),
]}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        valid = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset '{name}'; valid: {valid}") from None


def build_model(preset: Preset):
    return {
        "burgers": models.burgers,
        "quartic": models.quartic,
        "advection": models.advection,
        "burgers2d": models.burgers_2d,
        "p-system": models.p_system,
        "isentropic": models.isentropic_euler,
        "euler": models.full_euler,
    }[preset.model_id]()


def build_ic(preset: Preset, model) -> Callable:
    ic_id = preset.ic_id
    if ic_id == "gauss-1-05-80":
        return _gaussian(1.0, 0.5, 80.0, 0.5)
    if ic_id == "rp-1-0":
        return _step_fn(1.0, 0.0, 0.5)
    if ic_id == "rp--1-1":
        return _step_fn(-1.0, 1.0, 0.5 * (preset.x_min + preset.x_max))
    if ic_id == "rp-1--5":
        return _step_fn(1.0, -5.0, 0.5 * (preset.x_min + preset.x_max))
    if ic_id == "tanh-075":
        return lambda x: 0.75 - 1.25 * np.tanh((np.asarray(x) - 1.0) / 0.375)
    if ic_id == "composite":
        return _advection_profile
    if ic_id == "density-gauss":
        rho = _gaussian(1.0, 0.5, 80.0, 0.5)
        if preset.model_id == "p-system":
            return lambda x: np.stack([rho(x), np.zeros_like(np.asarray(x, dtype=float))], axis=-1)
        if preset.model_id == "isentropic":
            def ic(x):
                r = rho(x)
                return model.to_conservative(np.stack([r, np.zeros_like(r)], axis=-1))
            return ic
        def ic(x):
            r = rho(x)
            z = np.zeros_like(r)
            return model.to_conservative(np.stack([r, z, r], axis=-1))
        return ic
    if ic_id == "euler-gauss":
        rho = _gaussian(1.0, 0.5, 80.0, 0.5)
        def ic(x):
            r = rho(x)
            return model.to_conservative(np.stack([r, np.zeros_like(r), r], axis=-1))
        return ic
    if ic_id == "box-psystem":
        def ic(x):
            x = np.asarray(x)
            inside = (x > 0.3) & (x < 0.7)
            return np.stack([np.where(inside, 2.0, 0.1),
                             np.where(inside, 1.0, -0.5)], axis=-1)
        return ic
    if ic_id == "box-isentropic":
        def ic(x):
            x = np.asarray(x)
            inside = (x > 0.3) & (x < 0.7)
            w = np.stack([np.where(inside, 2.0, 1.0),
                          np.where(inside, 1.8, -1.4)], axis=-1)
            return model.to_conservative(w)
        return ic
    if ic_id == "sod":
        return _euler_rp_ic(model, *_SOD, 0.5)
    if ic_id == "lax":
        return _euler_rp_ic(model, *_LAX, 0.5)
    if ic_id == "shu-osher":
        return _shu_osher_ic(model)
    if ic_id == "quadrant":
        return _quadrant_ic
    raise KeyError(f"unknown initial condition '{ic_id}'")


@dataclass
class RunResult:
    preset: Preset
    config: Dict[str, str]
    grid: object
    model: object
    state: object
    records: List[StepRecord]
    snapshots: Optional[List[Tuple[float, np.ndarray]]] = None


def _padded_grid(preset: Preset, n_cells: int):
    dx = (preset.x_max - preset.x_min) / n_cells
    n_pad = int(round(preset.domain_padding / dx))
    lo = preset.x_min - n_pad * dx
    if preset.kind == "2d":
        n_tot = n_cells + 2 * n_pad
        return Grid2D(lo, lo, n_tot, n_tot, dx, dx)
    return Grid1D(lo, preset.x_max + n_pad * dx, n_cells + 2 * n_pad)


def solver_config(preset: Preset, **overrides) -> Tuple[SolverConfig, int]:
    """SolverConfig plus cell count after applying overrides."""
    n_cells = int(overrides.get("n_cells", preset.n_cells))
    if "dx" in overrides and overrides["dx"]:
        n_cells = int(round((preset.x_max - preset.x_min) / float(overrides["dx"])))
    cfg = SolverConfig(
        cfl=float(overrides.get("cfl", preset.cfl)),
        t_end=float(overrides.get("t_end", preset.t_end)),
        operator=_OPERATORS[str(overrides.get("operator", preset.operator))],
        limiter=LimiterMode(_LIMITERS[str(overrides.get("limiter", preset.limiter))]),
        bc=_BCS[str(overrides.get("bc", preset.bc))],
        rk_alpha=float(overrides.get("rk_alpha", preset.rk_alpha)),
    )
    return cfg, n_cells


def run_preset(name: str, collect_snapshots: bool = False,
               **overrides) -> RunResult:
    """Run one preset to its final time (overrides: n_cells/dx, cfl, t_end,
    operator, limiter, bc, rk_alpha)."""
    preset = get_preset(name)
    model = build_model(preset)
    cfg, n_cells = solver_config(preset, **overrides)
    grid = _padded_grid(preset, n_cells)
    ic = build_ic(preset, model)

    config_echo = emit_config_dict(preset, cfg, n_cells)
    snapshots: Optional[list] = [] if collect_snapshots else None

    if preset.kind == "2d":
        state = init_state_2d(grid, ic, cfg.bc)
        on_step = (lambda s: snapshots.append((s.t, s.averages.copy()))) \
            if collect_snapshots else None
        final, records = run_2d(state, grid, model, cfg, on_step=on_step)
    else:
        state = init_state(grid, model, ic, cfg.bc)
        on_step = (lambda s: snapshots.append((s.t, s.averages.copy()))) \
            if collect_snapshots else None
        final, records = run(state, grid, model, cfg, on_step=on_step)
    return RunResult(preset, config_echo, grid, model, final, records, snapshots)


def reference_callable(preset: Preset, model, t: float,
                       n_cells: int) -> Optional[Callable]:
    """Evaluable reference solution at time t for a preset, or None."""
    ref = preset.reference
    if ref == "none" or not ref:
        return None
    if ref == "pwlinear":
        ic = build_ic(preset, model)
        length = preset.x_max - preset.x_min
        h = length / (30.0 * n_cells)
        probe = np.abs(ic(np.linspace(preset.x_min, preset.x_max, 2049)))
        pad = (float(np.max(probe)) + 1.0) * t + 10.0 * h
        nodes = np.arange(preset.x_min - pad, preset.x_max + pad + 0.5 * h, h)
        vals = ic(preset.x_min + np.mod(nodes - preset.x_min, length))
        return lambda x: exact_burgers_piecewise_linear(nodes, vals, t, x)
    if ref == "exact-riemann":
        ic = build_ic(preset, model)
        xs = np.array([preset.x_min, preset.x_max])
        q_l, q_r = float(ic(xs)[0]), float(ic(xs)[1])
        jump = _riemann_jump_location(preset)
        return lambda x: exact_scalar_riemann(model, q_l, q_r,
                                              (np.asarray(x) - jump) / t)
    if ref == "exact-euler":
        left, right = _SOD if preset.ic_id == "sod" else _LAX
        def evaluate(x):
            rho, v, p = exact_euler_riemann(left, right, (np.asarray(x) - 0.5) / t)
            return model.to_conservative(np.stack([rho, v, p], axis=-1))
        return evaluate
    if ref == "exact-advection":
        ic = build_ic(preset, model)
        length = preset.x_max - preset.x_min
        speed = float(model.speed(np.float64(0.0)))
        return lambda x: ic(preset.x_min + np.mod(np.asarray(x) - speed * t
                                                  - preset.x_min, length))
    if ref.startswith("fine:"):
        _, n_ref, op = ref.split(":")
        result = run_preset(preset.name, n_cells=int(n_ref), operator=op,
                            t_end=t)
        recon = Reconstruction1D(result.grid, _BCS[preset.bc],
                                 result.state.averages, result.state.points)
        return recon
    raise KeyError(f"unknown reference kind '{ref}'")


def _riemann_jump_location(preset: Preset) -> float:
    return 0.5 if preset.ic_id == "rp-1-0" else 0.5 * (preset.x_min + preset.x_max)


# Convergence studies


@dataclass
class ConvergenceRow:
    n_cells: int
    dx: float
    avg_err: np.ndarray
    point_err: np.ndarray
    avg_eoc: Optional[np.ndarray] = None
    point_eoc: Optional[np.ndarray] = None


@dataclass
class ConvergenceReport:
    preset: str
    operator: str
    var_names: Sequence[str]
    rows: List[ConvergenceRow] = field(default_factory=list)


def convergence_study(name: str, n_list: Sequence[int],
                      **overrides) -> ConvergenceReport:
    """l1 errors and EOC over a refinement sequence against the preset's
    reference (exact oracle or fine-grid self-reference)."""
    preset = get_preset(name)
    if preset.reference == "none":
        raise ValueError(f"preset '{name}' has no reference solution")
    model = build_model(preset)
    cfg, _ = solver_config(preset, **overrides)
    report = ConvergenceReport(name, cfg.operator.value, _var_names(model))
    fine_ref = None
    if preset.reference.startswith("fine:"):
        fine_ref = reference_callable(preset, model, cfg.t_end, 0)
    for n in n_list:
        result = run_preset(name, n_cells=int(n), **overrides)
        ref = fine_ref if fine_ref is not None else \
            reference_callable(preset, model, cfg.t_end, int(n))
        avg_err, point_err = l1_errors(result.state, result.grid, cfg.bc, ref)
        row = ConvergenceRow(int(n), result.grid.dx, avg_err, point_err)
        if report.rows:
            prev = report.rows[-1]
            row.avg_eoc = np.log2(prev.avg_err / avg_err)
            row.point_eoc = np.log2(prev.point_err / point_err)
        report.rows.append(row)
    return report


def _var_names(model) -> Sequence[str]:
    return tuple(model.var_names)


# Shock-front measurement


def crossing_position(averages: np.ndarray, grid: Grid1D, level: float) -> float:
    """Position where the averages cross the level, by linear interpolation
    between adjacent cell centers; exactly one crossing required."""
    q = averages[:, 0] if averages.ndim == 2 else averages
    d = q - level
    sign = np.sign(d)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if len(idx) != 1:
        raise ValueError(f"level {level} crossed {len(idx)} times, need exactly 1")
    i = int(idx[0])
    centers = grid.centers()
    return float(centers[i] + grid.dx * d[i] / (d[i] - d[i + 1]))


def measure_shock_speed(snapshots: Sequence[Tuple[float, np.ndarray]],
                        grid: Grid1D, level: float) -> float:
    """Least-squares slope of the level-crossing position over the last half
    of the snapshots."""
    if len(snapshots) < 2:
        raise ValueError("need at least two snapshots")
    tail = snapshots[len(snapshots) // 2:]
    if len(tail) < 2:
        tail = snapshots
    ts = np.array([t for t, _ in tail])
    xs = np.array([crossing_position(avg, grid, level) for _, avg in tail])
    return float(np.polyfit(ts, xs, 1)[0])


# Riemann-problem suite


@dataclass
class RiemannCase:
    q_l: float
    q_r: float
    t_end: float


_SUITE_CASES = {
    "burgers": [RiemannCase(1.0, 0.0, 0.3), RiemannCase(0.0, 1.0, 0.3),
                RiemannCase(2.0, 1.0, 0.2), RiemannCase(1.0, 2.0, 0.2),
                RiemannCase(1.0, -1.0, 0.3), RiemannCase(-1.0, 1.0, 0.3),
                RiemannCase(11.0, 1.0, 0.05), RiemannCase(-1.0, -2.0, 0.2),
                RiemannCase(-2.0, -1.0, 0.2)],
    "quartic": [RiemannCase(1.0, -5.0, 0.01), RiemannCase(-1.0, 1.0, 0.1),
                RiemannCase(1.0, 0.0, 0.3), RiemannCase(0.0, 1.0, 0.3),
                RiemannCase(1.5, 1.0, 0.1)],
}


@dataclass
class RiemannRow:
    q_l: float
    q_r: float
    wave: str
    t_end: float
    l1_points: float
    speed_measured: Optional[float]
    speed_exact: Optional[float]
    ok: bool


def riemann_suite(model_name: str, operator: str = "modified",
                  n_cells: int = 100, cfl: float = 0.45,
                  speed_rtol: float = 0.05) -> List[RiemannRow]:
    """Battery of two-state problems: l1 distance to the exact solution and,
    for shocks, the measured front speed."""
    model = {"burgers": models.burgers, "quartic": models.quartic}[model_name]()
    rows: List[RiemannRow] = []
    for case in _SUITE_CASES[model_name]:
        grid = Grid1D(0.0, 2.0, n_cells)
        bc = BoundaryMode.EXTRAPOLATE
        ic = _step_fn(case.q_l, case.q_r, 1.0)
        state = init_state(grid, model, ic, bc)
        cfg = SolverConfig(cfl=cfl, t_end=case.t_end,
                           operator=_OPERATORS[operator],
                           limiter=LimiterMode(LimiterKind.POWER_LAW), bc=bc)
        snapshots: List[Tuple[float, np.ndarray]] = []
        final, _ = run(state, grid, model, cfg,
                       on_step=lambda s: snapshots.append((s.t, s.averages.copy())))
        ref = lambda x: exact_scalar_riemann(model, case.q_l, case.q_r,
                                             (np.asarray(x) - 1.0) / case.t_end)
        _, point_err = l1_errors(final, grid, bc, ref)
        l1 = float(point_err[0])

        a_l = float(model.speed(np.float64(case.q_l)))
        a_r = float(model.speed(np.float64(case.q_r)))
        is_shock = a_l > a_r
        speed_meas = speed_ex = None
        if is_shock:
            speed_ex = model.shock_speed(case.q_l, case.q_r)
            level = 0.5 * (case.q_l + case.q_r)
            speed_meas = measure_shock_speed(snapshots, grid, level)
            tol = speed_rtol * max(abs(speed_ex), max(abs(a_l), abs(a_r)))
            ok = abs(speed_meas - speed_ex) <= tol
        else:
            ok = l1 <= 0.05 * abs(case.q_r - case.q_l) * max(abs(a_l), abs(a_r), 1.0)
        rows.append(RiemannRow(case.q_l, case.q_r,
                               "shock" if is_shock else "rarefaction",
                               case.t_end, l1, speed_meas, speed_ex, ok))
    return rows


# Flat key = value config files


def emit_config_dict(preset: Preset, cfg: SolverConfig, n_cells: int) -> Dict[str, str]:
    return {
        "preset": preset.name,
        "n_cells": str(n_cells),
        "cfl": repr(cfg.cfl),
        "t_end": repr(cfg.t_end),
        "operator": cfg.operator.value,
        "limiter": cfg.limiter.kind.value,
        "bc": cfg.bc.value,
        "rk_alpha": repr(cfg.rk_alpha),
        "domain_padding": repr(preset.domain_padding),
        "notes": preset.notes,
    }


def emit_config(values: Dict[str, str]) -> str:
    lines = ["# solver configuration"]
    for key in sorted(values):
        lines.append(f"{key} = {values[key]}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


# CSV emission


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def write_solution_csv(result: RunResult, out_dir: Path) -> List[Path]:
    """solution.csv (+ solution_points.csv in 1D), meta.csv, exact.csv when
    the preset has an exact oracle.  Returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    state = result.state
    if result.preset.kind == "2d":
        grid = result.grid
        path = out_dir / "solution.csv"
        with open(path, "w") as fh:
            fh.write("x,y,avg_q\n")
            cx, cy = grid.centers_x(), grid.centers_y()
            for i in range(grid.nx):
                for j in range(grid.ny):
                    fh.write(f"{_fmt(cx[i])},{_fmt(cy[j])},{_fmt(state.averages[i, j])}\n")
        written.append(path)
    else:
        grid = result.grid
        names = _var_names(result.model)
        path = out_dir / "solution.csv"
        with open(path, "w") as fh:
            fh.write("t,x_center," + ",".join(f"avg_{v}" for v in names) + "\n")
            centers = grid.centers()
            for i in range(grid.n_cells):
                vals = ",".join(_fmt(state.averages[i, k]) for k in range(len(names)))
                fh.write(f"{_fmt(state.t)},{_fmt(centers[i])},{vals}\n")
        written.append(path)
        path = out_dir / "solution_points.csv"
        bc = _BCS[result.config["bc"]]
        with open(path, "w") as fh:
            fh.write("t,x_interface," + ",".join(f"point_{v}" for v in names) + "\n")
            ifs = grid.interfaces(bc)
            for j in range(len(ifs)):
                vals = ",".join(_fmt(state.points[j, k]) for k in range(len(names)))
                fh.write(f"{_fmt(state.t)},{_fmt(ifs[j])},{vals}\n")
        written.append(path)

        ref = reference_callable(result.preset, result.model, state.t,
                                 grid.n_cells)
        if ref is not None:
            path = out_dir / "exact.csv"
            xs = np.linspace(grid.x_min, grid.x_max, 2001)
            vals = np.asarray(ref(xs), dtype=float)
            if vals.ndim == 1:
                vals = vals[:, None]
            with open(path, "w") as fh:
                fh.write("t,x," + ",".join(names) + "\n")
                for i, x in enumerate(xs):
                    row = ",".join(_fmt(vals[i, k]) for k in range(len(names)))
                    fh.write(f"{_fmt(state.t)},{_fmt(x)},{row}\n")
            written.append(path)

    written.append(write_meta_csv(result, out_dir))
    return written


def write_meta_csv(result: RunResult, out_dir: Path) -> Path:
    """Config echo as comment lines, then the per-step log table."""
    path = Path(out_dir) / "meta.csv"
    m = len(result.records[0].avg_min) if result.records else 1
    names = _var_names(result.model) if result.preset.kind == "1d" else ("q",)
    cols = ["step", "t", "dt"]
    for tag in ("avg_min", "avg_max", "point_min", "point_max"):
        cols += [f"{tag}_{v}" for v in names[:m]]
    with open(path, "w") as fh:
        for key in sorted(result.config):
            fh.write(f"# {key} = {result.config[key]}\n")
        fh.write(",".join(cols) + "\n")
        for k, rec in enumerate(result.records):
            row = [str(k), _fmt(rec.t), _fmt(rec.dt)]
            for arr in (rec.avg_min, rec.avg_max, rec.point_min, rec.point_max):
                row += [_fmt(v) for v in np.atleast_1d(arr)]
            fh.write(",".join(row) + "\n")
    return path


def write_convergence_csv(report: ConvergenceReport, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = report.var_names
    cols = ["n_cells", "dx"]
    for v in names:
        cols += [f"avg_err_{v}", f"point_err_{v}", f"avg_eoc_{v}", f"point_eoc_{v}"]
    with open(path, "w") as fh:
        fh.write(f"# preset = {report.preset}\n# operator = {report.operator}\n")
        fh.write(",".join(cols) + "\n")
        for row in report.rows:
            cells = [str(row.n_cells), _fmt(row.dx)]
            for k in range(len(names)):
                cells.append(_fmt(row.avg_err[k]))
                cells.append(_fmt(row.point_err[k]))
                cells.append("" if row.avg_eoc is None else _fmt(row.avg_eoc[k]))
                cells.append("" if row.point_eoc is None else _fmt(row.point_eoc[k]))
            fh.write(",".join(cells) + "\n")
    return path


def write_riemann_csv(rows: List[RiemannRow], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("q_l,q_r,wave,t_end,l1_points,speed_measured,speed_exact,ok\n")
        for r in rows:
            sm = "" if r.speed_measured is None else _fmt(r.speed_measured)
            se = "" if r.speed_exact is None else _fmt(r.speed_exact)
            fh.write(f"{_fmt(r.q_l)},{_fmt(r.q_r)},{r.wave},{_fmt(r.t_end)},"
                     f"{_fmt(r.l1_points)},{sm},{se},{'pass' if r.ok else 'fail'}\n")
    return path
