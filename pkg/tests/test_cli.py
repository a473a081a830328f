import math

import numpy as np
import pytest

from talbotgauss import io
from talbotgauss.cli import main


def rows_of(text):
    lines = [l for l in text.strip().splitlines()]
    header = lines[0].split(",")
    return [dict(zip(header, l.split(","))) for l in lines[1:]]


def test_gauss_all_kappa(capsys):
    assert main(["gauss", "--q", "4", "--p", "1", "--all-kappa", "--method", "direct"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert [r["kappa"] for r in rows] == ["0", "1", "2", "3"]
    assert float(rows[1]["modulus"]) < 1e-9 and float(rows[3]["modulus"]) < 1e-9
    assert float(rows[0]["modulus"]) == pytest.approx(math.sqrt(8))


def test_gauss_trivial(capsys):
    assert main(["gauss", "--q", "1", "--p", "0", "--kappa", "0"]) == 0
    row = rows_of(capsys.readouterr().out)[0]
    assert float(row["re"]) == 1 and float(row["im"]) == 0


def test_gauss_talbot_within_estimate(capsys):
    assert main(["gauss", "--q", "3", "--p", "1", "--kappa", "0", "--method", "talbot",
                 "--K", "100000"]) == 0
    row = rows_of(capsys.readouterr().out)[0]
    err = abs(complex(float(row["re"]), float(row["im"])) + 1j * math.sqrt(3))
    assert err <= float(row["error_estimate"])


def test_gauss_parity_and_superosc(capsys):
    assert main(["gauss", "--q", "4", "--p", "3", "--all-kappa", "--method", "parity"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert float(rows[2]["modulus"]) == pytest.approx(math.sqrt(8))
    assert main(["gauss", "--q", "2", "--p", "1", "--kappa", "1", "--method", "superosc",
                 "--N", "64", "--Nprime", "64"]) == 0
    row = rows_of(capsys.readouterr().out)[0]
    assert row["method"] == "superosc"


@pytest.mark.parametrize("argv", [
    ["gauss", "--q", "4", "--p", "2"],
    ["gauss", "--q", "4", "--p", "1", "--method", "closed"],
    ["gauss", "--q", "3", "--p", "1", "--kappa", "5"],
    ["gauss", "--q", "3", "--p", "1", "--method", "talbot", "--K", "2"],
    ["gauss", "--q", "3"],
    ["evolve", "--alpha", "2", "--out", "x.csv"],
])
def test_parameter_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_gauss_figure(tmp_path, capsys):
    fig = tmp_path / "g.png"
    out = tmp_path / "g.csv"
    assert main(["gauss", "--q", "5", "--p", "2", "--all-kappa", "--out", str(out),
                 "--figure", str(fig)]) == 0
    assert fig.stat().st_size > 0
    header, rows = io.read_csv(out)
    assert header[0] == "q" and len(rows) == 5


def test_carpet_pgm_and_table(tmp_path, capsys):
    out = tmp_path / "c.pgm"
    fig = tmp_path / "c.png"
    assert main(["carpet", "--rows", "64", "--cols", "48", "--K", "50", "--out", str(out),
                 "--figure", str(fig)]) == 0
    text = capsys.readouterr().out
    assert "intensity min=" in text
    assert f"1,2,{1 / (4 * math.pi)!r}" in text
    assert io.read_pgm(out).shape == (64, 48)
    assert fig.stat().st_size > 0


def test_carpet_degenerate_and_csv(tmp_path, capsys):
    out = tmp_path / "tiny.pgm"
    assert main(["carpet", "--rows", "2", "--cols", "2", "--out", str(out)]) == 0
    assert io.read_pgm(out).size == 4
    csv_out = tmp_path / "c.csv"
    assert main(["carpet", "--rows", "3", "--cols", "4", "--out", str(csv_out)]) == 0
    header, rows = io.read_csv(csv_out)
    assert header == ["t", "x", "intensity"] and len(rows) == 12


def test_carpet_deterministic_single_thread(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("TALBOTGAUSS_THREADS", "1")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["carpet", "--rows", "8", "--cols", "8", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("TALBOTGAUSS_THREADS", "zero")
    assert main(["carpet", "--rows", "8", "--cols", "8", "--out", str(a)]) == 2


def test_carpet_unwritable(tmp_path, capsys):
    assert main(["carpet", "--rows", "4", "--cols", "4",
                 "--out", str(tmp_path / "missing" / "x.pgm")]) == 3


def test_evolve_free(tmp_path, capsys):
    out = tmp_path / "f.csv"
    assert main(["evolve", "--omega", "0.7", "--alpha", "1", "--t", "0.8",
                 "--xgrid", "16", "--out", str(out)]) == 0
    _, rows = io.read_csv(out)
    data = np.array(rows, dtype=float)
    exact = np.exp(1j * 0.7 * data[:, 1] - 0.49j * data[:, 0])
    assert np.abs(data[:, 2] + 1j * data[:, 3] - exact).max() < 1e-12


def test_evolve_cos_potential(tmp_path, capsys):
    pot = tmp_path / "cos.txt"
    pot.write_text("1 1.0 0.0\n")
    out = tmp_path / "f.csv"
    modes = tmp_path / "m.csv"
    fig = tmp_path / "f.png"
    assert main(["evolve", "--potential", str(pot), "--out", str(out), "--tgrid", "3",
                 "--modes-out", str(modes), "--figure", str(fig)]) == 0
    text = capsys.readouterr().out
    dev = float(text.split("max_deviation_from_oracle=")[1].split()[0])
    assert dev < 1e-6
    assert "mode_norm_l2=" in text
    header, rows = io.read_csv(modes)
    assert header == ["omega_j", "t", "re", "im"] and len(rows) == 33 * 3
    assert fig.stat().st_size > 0


def test_evolve_literal_flagged(tmp_path, capsys):
    pot = tmp_path / "cos.txt"
    pot.write_text("1 1.0 0.0\n")
    assert main(["evolve", "--potential", str(pot), "--engine", "literal",
                 "--out", str(tmp_path / "f.csv")]) == 0
    text = capsys.readouterr().out
    assert "PAPER-LITERAL (no -i): documented divergence" in text


def test_evolve_bad_potential(tmp_path, capsys):
    pot = tmp_path / "bad.txt"
    pot.write_text("1 x y\n")
    assert main(["evolve", "--potential", str(pot), "--out", str(tmp_path / "f.csv")]) == 2
    assert main(["evolve", "--potential", str(tmp_path / "nope.txt"),
                 "--out", str(tmp_path / "f.csv")]) == 3


def test_config_defaults_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("method = talbot\nK = 1000\nall_kappa = true\n")
    assert main(["--config", str(cfg), "gauss", "--q", "2", "--p", "1"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert len(rows) == 2 and rows[0]["method"] == "talbot"
    assert main(["--config", str(cfg), "gauss", "--q", "2", "--p", "1",
                 "--method", "direct"]) == 0
    assert rows_of(capsys.readouterr().out)[0]["method"] == "direct"
    cfg.write_text("bogus = 1\n")
    assert main(["--config", str(cfg), "gauss", "--q", "2", "--p", "1"]) == 2


def test_verify_gauss_suite(tmp_path, capsys):
    assert main(["verify", "--suite", "gauss", "--report", str(tmp_path / "rep")]) == 0
    text = capsys.readouterr().out
    assert text.count("status=PASS") == 5 and "failed=0" in text
    assert (tmp_path / "rep" / "verify_summary.csv").exists()


def test_verify_failure_exit_code(monkeypatch, capsys):
    from talbotgauss import verify
    monkeypatch.setitem(verify.SUITES, "gauss",
                        [lambda: verify.CheckResult("forced", False, "x")])
    assert main(["verify", "--suite", "gauss"]) == 1
