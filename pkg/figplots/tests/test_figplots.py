import importlib.util

import pytest

from figplots.cli import main
from figplots.panels import PlotSpec, SchemaError, load_table, render

PULSE_HEADER = "t_us,omega_rad_per_us,delta_rad_per_us,phi_rad\n"
TAU_HEADER = "scheme,V_rad_per_us,step_time_us,fidelity\n"
ROBUST_HEADER = "scheme,axis,deviation,fidelity\n"


def write_pulse_csv(path, t_max=1.0, points=21):
    rows = [PULSE_HEADER]
    for k in range(points):
        t = t_max * k / (points - 1)
        rows.append(f"{t},{6.0 * t * (t_max - t)},{3.0 * (t - 0.5 * t_max)},0.0\n")
    path.write_text("".join(rows))
    return path


def write_tau_csv(path):
    rows = [TAU_HEADER]
    for v in (251.327, 1256.64):
        for tau, fid in ((1.5, 0.89), (4.0, 0.99)):
            rows.append(f"adiabatic,{v},{tau},{fid}\n")
    rows.append("sta,251.327,1.0,0.998\n")
    path.write_text("".join(rows))
    return path


def write_robust_csv(path, scheme="sta"):
    rows = [ROBUST_HEADER]
    for dev, fid in ((-0.1, 0.97), (0.0, 0.998), (0.1, 0.96)):
        rows.append(f"{scheme},omega_rel,{dev},{fid}\n")
    path.write_text("".join(rows))
    return path


class TestLoadTable:
    def test_reads_columns(self, tmp_path):
        table = load_table(write_pulse_csv(tmp_path / "p.csv"), "pulses")
        assert len(table["t_us"]) == 21

    def test_missing_column_named(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("t_us,omega_rad_per_us,phi_rad\n0,1,0\n")
        with pytest.raises(SchemaError) as exc:
            load_table(bad, "pulses")
        assert "delta_rad_per_us" in str(exc.value)

    def test_empty_file_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(ROBUST_HEADER)
        with pytest.raises(ValueError):
            load_table(empty, "robustness")


class TestRender:
    def test_pulses_panel(self, tmp_path):
        csv1 = write_pulse_csv(tmp_path / "a.csv")
        csv2 = write_pulse_csv(tmp_path / "b.csv", t_max=4.0)
        out = tmp_path / "fig.png"
        render(PlotSpec("pulses", (csv1, csv2), out))
        assert out.stat().st_size > 0

    def test_tau_scan_panel(self, tmp_path):
        out = tmp_path / "fig.png"
        render(PlotSpec("tau_scan", (write_tau_csv(tmp_path / "t.csv"),), out))
        assert out.exists()

    def test_robustness_panel(self, tmp_path):
        csvs = (
            write_robust_csv(tmp_path / "a.csv", "sta"),
            write_robust_csv(tmp_path / "b.csv", "nonadiabatic"),
        )
        out = tmp_path / "fig.png"
        render(PlotSpec("robustness", csvs, out))
        assert out.exists()

    def test_deterministic_output(self, tmp_path):
        csv1 = write_robust_csv(tmp_path / "a.csv")
        out1, out2 = tmp_path / "f1.png", tmp_path / "f2.png"
        render(PlotSpec("robustness", (csv1,), out1))
        render(PlotSpec("robustness", (csv1,), out2))
        assert out1.read_bytes() == out2.read_bytes()

    def test_schema_error_leaves_no_image(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("scheme,axis,fidelity\nsta,omega_rel,0.9\n")
        out = tmp_path / "fig.png"
        with pytest.raises(SchemaError):
            render(PlotSpec("robustness", (bad,), out))
        assert not out.exists()

    def test_unknown_panel_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            PlotSpec("sparkline", (tmp_path / "a.csv",), tmp_path / "o.png")


class TestCli:
    def test_happy_path(self, tmp_path, capsys):
        csv1 = write_robust_csv(tmp_path / "a.csv")
        out = tmp_path / "fig.png"
        code = main(["robustness", "--in", str(csv1), "--out", str(out)])
        assert code == 0
        assert out.exists()
        assert str(out) in capsys.readouterr().out

    def test_missing_column_exit_code_and_message(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("scheme,V_rad_per_us,fidelity\nsta,251,0.9\n")
        code = main(["tau_scan", "--in", str(bad), "--out",
                     str(tmp_path / "f.png")])
        assert code != 0
        assert "step_time_us" in capsys.readouterr().err
        assert not (tmp_path / "f.png").exists()

    def test_empty_grid_is_error(self, tmp_path, capsys):
        empty = tmp_path / "empty.csv"
        empty.write_text(ROBUST_HEADER)
        code = main(["robustness", "--in", str(empty), "--out",
                     str(tmp_path / "f.png")])
        assert code != 0
        assert not (tmp_path / "f.png").exists()

    def test_missing_input_file(self, tmp_path, capsys):
        code = main(["pulses", "--in", str(tmp_path / "nope.csv"), "--out",
                     str(tmp_path / "f.png")])
        assert code != 0

    def test_raw_time_flag(self, tmp_path):
        csv1 = write_pulse_csv(tmp_path / "a.csv", t_max=4.0)
        out = tmp_path / "fig.png"
        code = main(["pulses", "--in", str(csv1), "--out", str(out),
                     "--raw-time"])
        assert code == 0 and out.exists()

    def test_usage_error(self, capsys):
        assert main(["robustness"]) == 1


@pytest.mark.skipif(importlib.util.find_spec("rydsim") is None,
                    reason="rydsim not installed")
class TestWithSimulatorOutput:
    def test_pulses_from_synth_csv(self, tmp_path, capsys):
        from rydsim.cli import main as rydsim_main

        csvs = []
        for scheme in ("sta", "adiabatic", "nonadiabatic"):
            path = tmp_path / f"{scheme}.csv"
            assert rydsim_main(["synth", "--scheme", scheme, "--points", "101",
                                "--out", str(path)]) == 0
            csvs.append(str(path))
        capsys.readouterr()
        out = tmp_path / "pulses.png"
        argv = ["pulses", "--out", str(out)]
        for c in csvs:
            argv += ["--in", c]
        assert main(argv) == 0
        assert out.stat().st_size > 0
