import json
import subprocess
import sys

import pytest

from samqubits import ProtocolOutcome, SpinDensity, format_spin_density, parse_spin_density
from samqubits import tables
from samqubits.cli import RunConfig, build_parser, main, parse_config, resolve_config

from conftest import G_E, H, MU0_4PI, MU_B


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def d_oracle_mhz(a):
    return MU0_4PI * G_E**2 * MU_B**2 / (H * a**3) / 1e6


def test_levels_default(capsys):
    status, out, _ = run(capsys, "levels")
    assert status == 0
    data = tables.read_levels_csv(out)
    levels, freqs = data["level"], data["transition"]
    assert set(levels) == {"S00", "S01", "S10", "S11"}
    assert sum(levels.values()) == pytest.approx(0.0, abs=1e-9)
    assert freqs["w2_1"] - freqs["w2_0"] == pytest.approx(d_oracle_mhz(1e-9), rel=1e-9)
    assert "w2_1 - w2_0 = 52.04 MHz" in out


def test_freqs_alias(capsys):
    assert run(capsys, "freqs")[1] == run(capsys, "levels")[1]


def test_levels_degenerate(capsys):
    status, out, _ = run(capsys, "levels", "--gradient", "0", "--coupling-mhz", "0")
    freqs = tables.read_levels_csv(out)["transition"]
    assert len(set(freqs.values())) == 1


def test_levels_json(capsys):
    status, out, _ = run(capsys, "--format", "json", "levels")
    data = json.loads(out)
    assert data["D_MHz"] == pytest.approx(52.041, abs=1e-3)
    assert set(data["transitions_MHz"]) == {"w2_0", "w1_0", "w2_1", "w1_1"}


def test_invalid_parameters_exit_1(capsys):
    status, _, err = run(capsys, "levels", "--b0", "-1")
    assert status == 1
    assert "b0 must be > 0" in err


def test_sweep_classical(capsys):
    status, out, _ = run(capsys, "sweep", "--a-min-nm", "1", "--a-max-nm", "2", "-n", "11")
    rows = tables.read_sweep_csv(out)
    assert out.splitlines()[0] == "a_nm,D_MHz,method,label"
    assert len(rows) == 11
    assert rows[0][1] == pytest.approx(d_oracle_mhz(1e-9), rel=1e-12)
    assert rows[-1][1] == pytest.approx(d_oracle_mhz(2e-9), rel=1e-12)
    assert round(rows[0][1], 2) == 52.04 and round(rows[-1][1], 3) == 6.505


def test_sweep_n1_usage_error(capsys):
    status, _, err = run(capsys, "sweep", "-n", "1")
    assert status == 2
    assert "usage" in err


def test_sweep_density_needs_file(capsys):
    status, _, err = run(capsys, "sweep", "--method", "density")
    assert status == 1
    assert "density_file" in err


def test_sweep_both_interleaved(capsys, tmp_path):
    path = tmp_path / "point.txt"
    path.write_text("# single spin\n0 0 0 1.0\n")
    status, out, _ = run(capsys, "sweep", "--method", "both", "--density-file", str(path), "-n", "5")
    rows = tables.read_sweep_csv(out)
    assert [r[2] for r in rows] == ["classical", "density"] * 5
    for cl, sd in zip(rows[::2], rows[1::2]):
        assert cl[0] == sd[0]
        assert sd[1] == pytest.approx(cl[1], rel=1e-14)
    assert rows[1][3] == "point"


def test_dtensor(capsys, tmp_path):
    status, out, _ = run(capsys, "dtensor")
    d = tables.read_tensor_csv(out)
    assert d[2, 2] == pytest.approx(-d_oracle_mhz(1e-9), rel=1e-12)
    assert d[1, 1] == pytest.approx(2 * d_oracle_mhz(1e-9), rel=1e-12)
    path = tmp_path / "pair.txt"
    path.write_text("0 0 2 0.5\n0 0 -2 0.5\n")
    status, out, _ = run(capsys, "--format", "json", "dtensor", "--method", "density", "--density-file", str(path))
    data = json.loads(out)
    assert data["coupling_MHz"] == pytest.approx(43.40604791988522, rel=1e-12)


def test_entangle(capsys):
    status, out, _ = run(capsys, "entangle", "--trials", "10000")
    assert status == 0
    counts = tables.read_histogram_csv(out)
    assert sum(counts.values()) == 10000
    assert counts[ProtocolOutcome.O2A] == counts[ProtocolOutcome.O3] == 0
    assert 0.48 <= counts[ProtocolOutcome.O1] / 10000 <= 0.52
    assert "concurrence 1.000000" in tables.comments(out)


def test_entangle_deterministic(capsys):
    a = run(capsys, "entangle", "--trials", "500", "--seed", "5")[1]
    b = run(capsys, "entangle", "--trials", "500", "--seed", "5")[1]
    c = run(capsys, "entangle", "--trials", "500", "--seed", "6")[1]
    assert a == b
    assert a != c


def test_entangle_unresolvable(capsys):
    status, _, err = run(capsys, "entangle", "--coupling-mhz", "0")
    assert status == 1
    assert "w2_0" in err and "w2_1" in err and "coupling D is too small" in err


def test_adiabatic(capsys):
    status, out, _ = run(capsys, "adiabatic", "--b1", "1e-3", "--delta-b", "0.01", "--f-c", "5000")
    row = tables.read_csv(out)[0]
    assert status == 0 and row["verdict"] == "ADIABATIC"
    assert float(row["eta"]) == pytest.approx(1.784e-3, rel=1e-3)
    status, out, _ = run(capsys, "adiabatic", "--delta-b", "0")
    assert status == 0 and float(tables.read_csv(out)[0]["eta"]) == 0.0
    status, out, _ = run(capsys, "adiabatic", "--b1", "1e-6")
    row = tables.read_csv(out)[0]
    assert status != 0 and row["verdict"] == "VIOLATED"
    assert float(row["eta"]) == pytest.approx(1.784e3, rel=1e-3)


def test_gshift(capsys):
    status, out, _ = run(capsys, "gshift", "8922", "0", "4206")
    g = [r["g"] for r in tables.read_csv(out)]
    assert g == ["2.011241", "2.002319", "2.006525"]


def test_gshift_non_numeric(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gshift", "abc"])
    assert info.value.code == 2


def test_output_file(capsys, tmp_path):
    out = tmp_path / "levels.csv"
    status, stdout, _ = run(capsys, "levels", "--output", str(out))
    assert stdout == ""
    assert "level,S00" in out.read_text()


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test config\nb0 = 1.0\ngradient = 2e5  # T/m\nseed = 3\nformat = json\n")
    parser = build_parser()
    c = resolve_config(parser.parse_args(["--config", str(cfg), "levels", "--b0", "2.0"]))
    assert c.b0 == 2.0  # flag over file
    assert c.gradient == 2e5  # file over default
    assert c.seed == 3 and c.format == "json"
    assert c.separation_nm == RunConfig().separation_nm  # default
    per_field = {"b0": "0.5", "g_zz": "2.01", "b1": "0.002", "f_c": "1000", "coupling_mhz": "10"}
    for key, flag_value in per_field.items():
        cfg.write_text(f"{key} = 9\n")
        flag = "--" + key.replace("_", "-")
        assert getattr(resolve_config(parser.parse_args(["--config", str(cfg), "levels"])), key) == 9
        assert getattr(resolve_config(parser.parse_args(["--config", str(cfg), "levels", flag, flag_value])), key) == float(flag_value)


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    status, _, err = run(capsys, "--config", str(cfg), "levels")
    assert status == 1 and "unknown key" in err
    with pytest.raises(Exception):
        parse_config("b0 1.0")


def test_density_roundtrip_through_cli(capsys, tmp_path):
    density = SpinDensity([[0, 0, 1.9e-10], [0.3e-10, 0, -1.7e-10], [0, 0.2e-10, 0]], [0.62, 0.55, -0.17], "nitro-like")
    path = tmp_path / "nitro.txt"
    path.write_text(format_spin_density(density))
    assert parse_spin_density(path.read_text()) == density
    status, out, _ = run(capsys, "sweep", "--method", "density", "--density-file", str(path), "-n", "4")
    assert status == 0
    rows = tables.read_sweep_csv(out)
    # every emitted value is recovered exactly
    for line, row in zip(out.splitlines()[1:], rows):
        assert line.split(",") == [repr(row[0]), repr(row[1]), row[2], row[3]]
    assert rows[0][3] == "nitro-like"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "samqubits", "gshift", "63"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "2.002382" in res.stdout
