import numpy as np
import pytest

import activeflux as af
from activeflux.core import (BoundaryMode, Grid1D, Grid2D, State1D, init_state,
                             init_state_2d, total_conserved, total_conserved_2d)
from activeflux.models import EulerState
from activeflux.reconstruction import LimiterKind, LimiterMode
from activeflux.solver import (Operator, SolverConfig, SolverError, compute_dt,
                               compute_dt_2d, check_compatible, l1_errors, run,
                               run_2d, step, step_2d)

PER = BoundaryMode.PERIODIC
EXT = BoundaryMode.EXTRAPOLATE


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(cfl=0.0, t_end=1.0, operator=Operator.SCALAR_SIMPLE)
        with pytest.raises(ValueError):
            SolverConfig(cfl=1.0, t_end=1.0, operator=Operator.SCALAR_SIMPLE)
        with pytest.raises(ValueError):
            SolverConfig(cfl=0.5, t_end=-1.0, operator=Operator.SCALAR_SIMPLE)

    def test_operator_model_compatibility(self):
        with pytest.raises(ValueError):
            check_compatible(af.burgers(), Operator.SYSTEM_PROJECTOR)
        with pytest.raises(ValueError):
            check_compatible(af.p_system(), Operator.SCALAR_MODIFIED)
        with pytest.raises(ValueError):
            check_compatible(af.full_euler(), Operator.SYSTEM_RK2)
        check_compatible(af.full_euler(), Operator.SYSTEM_PROJECTOR)
        check_compatible(af.p_system(), Operator.SYSTEM_RK2_FIXED)


class TestComputeDt:
    def test_burgers_riemann_max_speed(self):
        grid = Grid1D(0.0, 2.0, 200)
        model = af.burgers()
        state = init_state(grid, model, lambda x: np.where(x < 1.0, 11.0, 1.0), EXT)
        dt = compute_dt(state, grid, model, 0.45)
        assert dt == pytest.approx(0.45 * grid.dx / 11.0, rel=1e-14)

    def test_stationary_state_uses_remaining_time(self):
        grid = Grid1D(0.0, 1.0, 10)
        model = af.burgers()
        state = init_state(grid, model, lambda x: np.zeros_like(x), PER)
        assert compute_dt(state, grid, model, 0.5, t_remaining=0.37) == 0.37
        with pytest.raises(SolverError):
            compute_dt(state, grid, model, 0.5)     # no cap, no wave

    def test_sod_initial_max_speed(self):
        grid = Grid1D(0.0, 1.0, 200)
        model = af.full_euler()
        left, right = EulerState(1, 0, 1), EulerState(0.125, 0, 0.1)

        def ic(x):
            w = np.where(np.asarray(x)[:, None] < 0.5,
                         np.array([left.rho, left.v, left.p]),
                         np.array([right.rho, right.v, right.p]))
            return model.to_conservative(w)

        state = init_state(grid, model, ic, EXT)
        dt = compute_dt(state, grid, model, 0.7)
        assert dt == pytest.approx(0.7 * grid.dx / np.sqrt(1.4), rel=1e-12)

    def test_2d_rule_uses_half_edge(self):
        grid = Grid2D(0.0, 0.0, 8, 8, 0.125, 0.125)
        model = af.burgers_2d()
        state = init_state_2d(grid, lambda x, y: np.full(np.broadcast(x, y).shape, -1.0), PER)
        dt = compute_dt_2d(state, grid, model, 0.9)
        assert dt == pytest.approx(0.9 * 0.125 / (2.0 * np.sqrt(2.0)), rel=1e-13)


class TestStepProperties:
    def test_constant_state_fixed_point(self):
        cases = [
            (af.burgers(), Operator.SCALAR_SIMPLE, lambda x: np.full_like(x, 0.8)),
            (af.burgers(), Operator.SCALAR_MODIFIED, lambda x: np.full_like(x, -0.4)),
            (af.p_system(), Operator.SYSTEM_RK2,
             lambda x: np.stack([np.full_like(x, 1.2), np.full_like(x, 0.3)], axis=-1)),
            (af.full_euler(), Operator.SYSTEM_PROJECTOR,
             lambda x: af.full_euler().to_conservative(
                 np.stack([np.full_like(x, 1.2), np.full_like(x, 0.3),
                           np.full_like(x, 2.0)], axis=-1))),
        ]
        for model, op, ic in cases:
            grid = Grid1D(0.0, 1.0, 16)
            state = init_state(grid, model, ic, PER)
            cfg = SolverConfig(cfl=0.6, t_end=10.0, operator=op,
                               limiter=LimiterMode(LimiterKind.POWER_LAW))
            s = state
            for _ in range(5):
                s, _ = step(s, grid, model, cfg)
            np.testing.assert_array_equal(s.averages, state.averages)
            np.testing.assert_array_equal(s.points, state.points)

    def test_conservation_periodic(self):
        grid = Grid1D(0.0, 1.0, 64)
        model = af.burgers()
        state = init_state(grid, model,
                           lambda x: 1.0 + 0.5 * np.exp(-80 * (x - 0.5) ** 2), PER)
        cfg = SolverConfig(cfl=0.45, t_end=0.05, operator=Operator.SCALAR_MODIFIED)
        total0 = total_conserved(state, grid)
        final, recs = run(state, grid, model, cfg)
        drift = np.abs(total_conserved(final, grid) - total0)
        assert np.all(drift < 1e-13 * np.abs(total0))

    def test_determinism_bitwise(self):
        def one():
            grid = Grid1D(0.0, 1.0, 50)
            model = af.quartic()
            state = init_state(grid, model, lambda x: np.sin(2 * np.pi * x), PER)
            cfg = SolverConfig(cfl=0.4, t_end=0.02, operator=Operator.SCALAR_MODIFIED,
                               limiter=LimiterMode(LimiterKind.SYMMETRIZED_POWER_LAW))
            final, _ = run(state, grid, model, cfg)
            return final

        a, b = one(), one()
        assert a.averages.tobytes() == b.averages.tobytes()
        assert a.points.tobytes() == b.points.tobytes()

    def test_flux_difference_cancellation_order4(self):
        # linear advection, one step from exact data: the average error
        # shrinks like h^4 under simultaneous refinement (fixed CFL)
        model = af.advection(1.0)
        errs = []
        for n in (32, 64, 128):
            grid = Grid1D(0.0, 1.0, n)
            edges = np.linspace(0.0, 1.0, n + 1)
            means = (np.cos(2 * np.pi * edges[:-1])
                     - np.cos(2 * np.pi * edges[1:])) / (2 * np.pi * grid.dx)
            state = State1D(0.0, means[:, None],
                            np.sin(2 * np.pi * edges[:-1])[:, None])
            cfg = SolverConfig(cfl=0.4, t_end=1.0, operator=Operator.SCALAR_SIMPLE)
            new, rec = step(state, grid, model, cfg)
            dt = rec.dt
            exact = (np.cos(2 * np.pi * (edges[:-1] - dt))
                     - np.cos(2 * np.pi * (edges[1:] - dt))) / (2 * np.pi * grid.dx)
            errs.append(np.max(np.abs(new.averages[:, 0] - exact)))
        assert errs[0] / errs[1] > 11.0
        assert errs[1] / errs[2] > 11.0

    def test_exact_landing_on_t_end(self):
        grid = Grid1D(0.0, 1.0, 16)
        model = af.burgers()
        state = init_state(grid, model, lambda x: 1.0 + 0.1 * np.sin(2 * np.pi * x), PER)
        cfg = SolverConfig(cfl=0.37, t_end=0.0731, operator=Operator.SCALAR_SIMPLE)
        final, _ = run(state, grid, model, cfg)
        assert final.t == 0.0731

    def test_zero_t_end_returns_initial(self):
        grid = Grid1D(0.0, 1.0, 16)
        model = af.burgers()
        state = init_state(grid, model, lambda x: np.sin(2 * np.pi * x), PER)
        cfg = SolverConfig(cfl=0.4, t_end=0.0, operator=Operator.SCALAR_SIMPLE)
        final, recs = run(state, grid, model, cfg)
        assert recs == []
        assert final is state

    def test_split_run_matches_whole_run(self):
        # dt is constant for advection; choose t_end as an exact multiple so
        # both schedules take identical steps
        model = af.advection(1.0)
        grid = Grid1D(0.0, 1.0, 64)
        state = init_state(grid, model, lambda x: np.sin(2 * np.pi * x), PER)
        dt = 0.5 * grid.dx          # cfl 0.5, speed 1 -> exact binary
        t_half = 16 * dt
        cfg_half = SolverConfig(cfl=0.5, t_end=t_half, operator=Operator.SCALAR_SIMPLE)
        cfg_full = SolverConfig(cfl=0.5, t_end=2 * t_half, operator=Operator.SCALAR_SIMPLE)
        mid, _ = run(state.copy(), grid, model, cfg_half)
        joined, _ = run(mid, grid, model, cfg_full)
        direct, _ = run(state.copy(), grid, model, cfg_full)
        assert joined.averages.tobytes() == direct.averages.tobytes()
        assert joined.points.tobytes() == direct.points.tobytes()

    def test_inadmissible_run_aborts(self):
        model = af.full_euler()
        grid = Grid1D(0.0, 1.0, 50)

        def ic(x):
            x = np.asarray(x)
            w = np.stack([np.ones_like(x), np.where(x < 0.5, -3.0, 3.0),
                          np.where(x < 0.5, 10.0, 1e-3)], axis=-1)
            return model.to_conservative(w)

        state = init_state(grid, model, ic, EXT)
        cfg = SolverConfig(cfl=0.7, t_end=0.1, operator=Operator.SYSTEM_PROJECTOR,
                           bc=EXT)
        with pytest.raises(af.InadmissibleStateError):
            run(state, grid, model, cfg)


class TestAdvection:
    def test_one_period_third_order(self):
        # the constant-speed evolution operator is exact; the remaining
        # error (reconstruction + flux quadrature) converges at third order
        errs = []
        model = af.advection(1.0)
        q0 = lambda x: np.exp(-100 * (np.mod(x, 1.0) - 0.5) ** 2)
        for n in (64, 128, 256):
            grid = Grid1D(0.0, 1.0, n)
            state = init_state(grid, model, q0, PER)
            cfg = SolverConfig(cfl=0.45, t_end=1.0, operator=Operator.SCALAR_SIMPLE)
            final, _ = run(state, grid, model, cfg)
            avg_err, _ = l1_errors(final, grid, PER, q0)
            errs.append(avg_err[0])
        assert errs[0] / errs[1] > 6.0
        assert errs[1] / errs[2] > 6.0

    def test_limiter_tames_revolution_overshoot(self):
        # square + triangle + gaussian data after one revolution: limiting
        # cuts the overshoot by an order of magnitude (frozen observations:
        # 0.0026 limited vs 0.053 unlimited)
        from activeflux.harness import run_preset
        overshoot = {}
        for lim in ("power", "none"):
            res = run_preset("advection-limiter", limiter=lim)
            pts = res.state.points[:, 0]
            overshoot[lim] = max(pts.max() - 1.0, -pts.min())
        assert overshoot["power"] <= 0.01
        assert overshoot["none"] >= 0.03


class TestL1Errors:
    def test_identical_state_zero_error(self):
        grid = Grid1D(0.0, 1.0, 32)
        model = af.burgers()
        q0 = lambda x: np.sin(2 * np.pi * x)
        state = init_state(grid, model, q0, PER)

        def ref(x):
            # reproduce the Simpson averages exactly by echoing q0
            return q0(x)

        avg_err, point_err = l1_errors(state, grid, PER, ref)
        assert point_err[0] == 0.0
        assert avg_err[0] < 1e-16

    def test_constant_offset(self):
        grid = Grid1D(0.0, 2.0, 40)
        model = af.burgers()
        state = init_state(grid, model, lambda x: np.ones_like(x), PER)
        avg_err, point_err = l1_errors(state, grid, PER,
                                       lambda x: np.ones_like(x) + 0.25)
        assert avg_err[0] == pytest.approx(0.25 * 2.0, rel=1e-13)
        assert point_err[0] == pytest.approx(0.25 * 2.0, rel=1e-13)


class Test2DSolver:
    def test_constant_state_2d(self):
        grid = Grid2D(0.0, 0.0, 6, 6, 1 / 6, 1 / 6)
        model = af.burgers_2d()
        state = init_state_2d(grid, lambda x, y: np.full(np.broadcast(x, y).shape, 0.7), PER)
        cfg = SolverConfig(cfl=0.8, t_end=1.0, operator=Operator.SCALAR_MODIFIED)
        s = state
        for _ in range(3):
            s, _ = step_2d(s, grid, model, cfg)
        np.testing.assert_array_equal(s.averages, state.averages)
        np.testing.assert_array_equal(s.corners, state.corners)

    def test_conservation_2d(self):
        grid = Grid2D(0.0, 0.0, 16, 16, 1 / 16, 1 / 16)
        model = af.burgers_2d()
        state = init_state_2d(
            grid, lambda x, y: 1.0 + 0.3 * np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y), PER)
        cfg = SolverConfig(cfl=0.7, t_end=0.05, operator=Operator.SCALAR_MODIFIED)
        total0 = total_conserved_2d(state, grid)
        final, _ = run_2d(state, grid, model, cfg)
        assert abs(total_conserved_2d(final, grid) - total0) < 1e-13 * abs(total0)

    def test_diagonal_wave_point_accuracy(self):
        # data varying only in x + y solve a 1D problem along the diagonal
        # (q_t + 2 q q_s = 0); corner point values track its exact solution
        # at third order
        errs = []
        for n in (16, 32):
            grid = Grid2D(0.0, 0.0, n, n, 1.0 / n, 1.0 / n)
            model = af.burgers_2d()
            q0 = lambda x, y: 1.0 + 0.2 * np.sin(2 * np.pi * (x + y))
            state = init_state_2d(grid, q0, PER)
            cfg = SolverConfig(cfl=0.45, t_end=0.02, operator=Operator.SCALAR_MODIFIED)
            final, _ = run_2d(state, grid, model, cfg)
            nodes = np.linspace(-1.5, 2.5, 64001)
            vals = 1.0 + 0.2 * np.sin(2 * np.pi * np.mod(nodes, 1.0))
            moved = nodes + 2.0 * vals * cfg.t_end
            exact_diag = lambda s: np.interp(s, moved, vals)
            ix = grid.ifaces_x(PER)
            exact = exact_diag(ix[:, None] + ix[None, :])
            errs.append(np.max(np.abs(final.corners - exact)))
        assert errs[1] < errs[0] / 6.0      # ~ third order
