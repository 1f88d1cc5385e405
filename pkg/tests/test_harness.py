import numpy as np
import pytest

import activeflux as af
from activeflux import cli
from activeflux.core import Grid1D
from activeflux.harness import (PRESETS, ConvergenceReport, build_ic,
                                build_model, convergence_study,
                                crossing_position, emit_config, get_preset,
                                measure_shock_speed, parse_config,
                                riemann_suite, run_preset, solver_config,
                                write_convergence_csv, write_solution_csv,
                                emit_config_dict)


class TestPresetTable:
    def test_models_and_ics_resolve(self):
        for preset in PRESETS.values():
            model = build_model(preset)
            ic = build_ic(preset, model)
            if preset.kind == "1d":
                vals = np.asarray(ic(np.linspace(preset.x_min, preset.x_max, 7)))
                assert np.all(np.isfinite(vals))
            else:
                assert np.all(np.isfinite(ic(np.array([[0.25]]), np.array([[0.75]]))))

    def test_unknown_preset_lists_names(self):
        with pytest.raises(KeyError, match="burgers-gauss"):
            get_preset("nope")

    def test_config_roundtrip_identity(self):
        for preset in PRESETS.values():
            cfg, n_cells = solver_config(preset)
            values = emit_config_dict(preset, cfg, n_cells)
            assert parse_config(emit_config(values)) == values

    def test_parse_config_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_config("cfl 0.4\n")
        assert parse_config("# comment\n\ncfl = 0.4\n") == {"cfl": "0.4"}

    def test_dx_override(self):
        result = run_preset("burgers-gauss", dx=0.02, t_end=0.005)
        assert result.grid.n_cells == 50


class TestShockSpeed:
    def test_translating_ramp_recovers_slope(self):
        # q(t, x) = x - s t crosses level 0 at exactly s t
        grid = Grid1D(0.0, 1.0, 50)
        centers = grid.centers()
        s = 0.731
        snapshots = [(t, (centers - 0.5 - s * t)[:, None])
                     for t in np.linspace(0.001, 0.009, 9)]
        got = measure_shock_speed(snapshots, grid, 0.0)
        assert got == pytest.approx(s, rel=1e-10)

    def test_stationary_zero(self):
        grid = Grid1D(0.0, 1.0, 50)
        centers = grid.centers()
        snapshots = [(t, (centers - 0.5)[:, None]) for t in (0.1, 0.2, 0.3)]
        assert measure_shock_speed(snapshots, grid, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_multiple_crossings_rejected(self):
        grid = Grid1D(0.0, 1.0, 50)
        wavy = np.sin(6 * np.pi * grid.centers())
        with pytest.raises(ValueError):
            crossing_position(wavy, grid, 0.0)

    def test_no_crossing_rejected(self):
        grid = Grid1D(0.0, 1.0, 50)
        with pytest.raises(ValueError):
            crossing_position(np.ones(50), grid, 0.0)


class TestRiemannSuite:
    def test_quartic_suite_passes_and_is_deterministic(self):
        rows1 = riemann_suite("quartic")
        rows2 = riemann_suite("quartic")
        assert rows1 == rows2
        assert all(r.ok for r in rows1)
        strong = next(r for r in rows1 if r.q_r == -5.0)
        assert strong.wave == "shock"
        assert strong.speed_exact == pytest.approx(-26.0)
        assert abs(strong.speed_measured - (-26.0)) < 0.05 * 26.0


class TestCsvOutput:
    def test_run_outputs_deterministic_bytes(self, tmp_path):
        paths1 = write_solution_csv(run_preset("burgers-gauss", n_cells=50),
                                    tmp_path / "a")
        paths2 = write_solution_csv(run_preset("burgers-gauss", n_cells=50),
                                    tmp_path / "b")
        for p1, p2 in zip(paths1, paths2):
            assert p1.read_bytes() == p2.read_bytes()
        names = {p.name for p in paths1}
        assert {"solution.csv", "solution_points.csv", "meta.csv"} <= names

    def test_meta_echoes_config(self, tmp_path):
        result = run_preset("burgers-gauss", n_cells=50)
        write_solution_csv(result, tmp_path)
        text = (tmp_path / "meta.csv").read_text()
        assert "# preset = burgers-gauss" in text
        assert "# cfl = 0.45" in text
        header = [l for l in text.splitlines() if l.startswith("step,")][0]
        assert header.startswith("step,t,dt,avg_min_q")

    def test_solution_schema_1d_system(self, tmp_path):
        result = run_preset("sod", n_cells=60, t_end=0.02)
        write_solution_csv(result, tmp_path)
        head = (tmp_path / "solution.csv").read_text().splitlines()[0]
        assert head == "t,x_center,avg_rho,avg_mom,avg_energy"
        head = (tmp_path / "solution_points.csv").read_text().splitlines()[0]
        assert head == "t,x_interface,point_rho,point_mom,point_energy"
        assert (tmp_path / "exact.csv").exists()

    def test_convergence_csv(self, tmp_path):
        report = convergence_study("burgers-gauss", [16, 32], t_end=0.01)
        assert isinstance(report, ConvergenceReport)
        assert report.rows[1].avg_eoc is not None
        dxs = [row.dx for row in report.rows]
        assert dxs == sorted(dxs, reverse=True)     # monotone refinement
        path = write_convergence_csv(report, tmp_path / "conv.csv")
        lines = path.read_text().splitlines()
        assert lines[2].startswith("n_cells,dx,avg_err_q,point_err_q")
        assert len(lines) == 5


class TestCli:
    def test_list_presets(self, capsys):
        assert cli.main(["list-presets"]) == 0
        out = capsys.readouterr().out
        assert "burgers-gauss" in out and "sod" in out

    def test_unknown_preset_usage_error(self, capsys):
        assert cli.main(["run", "--preset", "nope"]) == 2
        assert "valid" in capsys.readouterr().err

    def test_run_writes_files(self, tmp_path, capsys):
        rc = cli.main(["run", "--preset", "burgers-gauss", "--n", "50",
                       "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "solution.csv").exists()

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n_cells = 50\ncfl = 0.4\n")
        rc = cli.main(["run", "--preset", "burgers-gauss", "--config", str(cfg),
                       "--cfl", "0.5", "--out", str(tmp_path / "o")])
        assert rc == 0
        meta = (tmp_path / "o" / "meta.csv").read_text()
        assert "# cfl = 0.5" in meta           # flag wins over file
        assert "# n_cells = 50" in meta        # file value survives

    def test_numerical_abort_exit_code(self, tmp_path, capsys):
        # wrapping the shock tube periodically puts an inadmissible-strength
        # jump on the seam; the run aborts with exit code 3
        rc = cli.main(["run", "--preset", "sod", "--bc", "periodic",
                       "--out", str(tmp_path)])
        assert rc == 3
        assert "numerical abort" in capsys.readouterr().err

    def test_converge_cli(self, tmp_path, capsys):
        rc = cli.main(["converge", "--preset", "burgers-gauss",
                       "--grids", "16,32", "--out", str(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out.strip()
        assert out.endswith(".csv")
