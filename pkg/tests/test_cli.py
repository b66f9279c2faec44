import json

import numpy as np
import pytest

from ep2stefan import cli

EXPECTED_FILES = {
    "solve": ("solution.csv", "manifest.json"),
    "stefan": ("front.csv", "stefan_report.json"),
    "reciprocal": ("reciprocal.csv", "reciprocal_front.csv", "reciprocal_report.json"),
    "modulate": ("modulated.csv", "modulate_report.json"),
    "gardner": ("gardner.csv", "gardner_report.json"),
    "zeros": ("zeros.json",),
}


@pytest.mark.parametrize("command", sorted(EXPECTED_FILES))
def test_commands_write_their_files(tmp_path, command, capsys):
    assert cli.main([command, "--out", str(tmp_path)]) == 0
    for name in EXPECTED_FILES[command]:
        assert (tmp_path / name).stat().st_size > 0
    json.loads(capsys.readouterr().out)


def test_solve_lattice_and_manifest(tmp_path):
    cli.main(["solve", "--out", str(tmp_path), "--nx", "12", "--nt", "7"])
    lines = (tmp_path / "solution.csv").read_text().splitlines()
    assert lines[0] == "t,x,u,u_x,u_xx,u_xxx,u_t"
    assert len(lines) == 1 + 12 * 7
    data = np.loadtxt(tmp_path / "solution.csv", delimiter=",", skiprows=1)
    assert data.shape == (84, 7)
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["schema_version"] == 1
    for k in ("epsilon", "delta", "lambda", "L_m", "P_m", "H0", "S0", "z_first_zero"):
        assert k in m
    assert m["lambda"] == pytest.approx(-1 / 12)


def test_zeros(tmp_path):
    cli.main(["zeros", "--out", str(tmp_path)])
    z = json.loads((tmp_path / "zeros.json").read_text())
    assert z["z_first_zero"] == pytest.approx(2 ** (1 / 3) * 2.338107410459767, abs=1e-9)
    assert z["gamma_bound"] == pytest.approx(z["epsilon"] * z["z_first_zero"])


def test_invalid_grid_writes_nothing(tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(["solve", "--nx", "1", "--out", str(out)]) == 2
    assert not out.exists()
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError"


def test_domain_error_reported_as_json(tmp_path, capsys):
    assert cli.main(["stefan", "--gamma", "7", "--out", str(tmp_path)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["schema_version"] == 1 and "gamma" in err["message"]
    assert list(tmp_path.iterdir()) == []


def test_tolerance_precedence(monkeypatch):
    args = cli._parser().parse_args(["solve"])
    assert cli._config(args).tol == 1e-13
    monkeypatch.setenv("EP2_TOL", "1e-11")
    assert cli._config(args).tol == 1e-11
    args = cli._parser().parse_args(["solve", "--tol", "1e-12"])
    assert cli._config(args).tol == 1e-12
    monkeypatch.setenv("EP2_TOL", "abc")
    with pytest.raises(cli.ConfigError):
        cli._config(cli._parser().parse_args(["solve"]))


def test_lm_override_moves_front(tmp_path):
    cli.main(["reciprocal", "--out", str(tmp_path), "--lm-override", "0"])
    rep = json.loads((tmp_path / "reciprocal_report.json").read_text())
    assert rep["front"]["L_m_is_override"] is True
    assert rep["front"]["coefficient"] > 0.1
    s = np.loadtxt(tmp_path / "reciprocal_front.csv", delimiter=",", skiprows=1)
    assert np.all(np.diff(s[:, 1]) > 0)


def test_solve_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        cli.main(["solve", "--out", str(d)])
    for name in ("solution.csv", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
