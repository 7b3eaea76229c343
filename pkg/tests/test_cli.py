import subprocess
import sys

import pytest

from laguerre_hpw.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main

SMALL = "[sweep]\ncatalog = gaussian_b1_e1\n[grid]\nn_x = 128\nn_t = 256\nm_max = 32\n"


@pytest.fixture
def small_ini(tmp_path):
    path = tmp_path / "small.ini"
    path.write_text(SMALL)
    return path


def test_constants_output(capsys):
    assert main(["constants", "--alpha", "0"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "0.125" in out and "0.308425137534042" in out
    assert "case1 constant (p=1)" in out and "0.000186799605534" in out


def test_constants_flags_violated_hypothesis(capsys):
    assert main(["constants", "--alpha", "0", "--b", "1"]) == EXIT_OK
    assert "hypothesis violated" in capsys.readouterr().out


def test_constants_bad_alpha(capsys):
    assert main(["constants", "--alpha", "-1"]) == EXIT_CONFIG


def test_selftest_small(small_ini, capsys):
    assert main(["selftest", "--config", str(small_ini)]) == EXIT_OK
    assert "checks passed" in capsys.readouterr().out


def test_selftest_starved_grid(tmp_path, capsys):
    path = tmp_path / "starved.ini"
    path.write_text("[grid]\nn_x = 4\n")
    assert main(["selftest", "--config", str(path)]) == EXIT_FAIL
    assert "grid-resolution" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["[grid]\nn_x = many\n", "[sweep]\ncolour = red\n", "garbage"])
def test_config_errors(tmp_path, text, capsys):
    path = tmp_path / "bad.ini"
    path.write_text(text)
    assert main(["selftest", "--config", str(path)]) == EXIT_CONFIG
    assert main(["sweep", "--config", str(path)]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_missing_config(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "nope.ini")]) == EXIT_CONFIG


def test_usage_errors():
    assert main(["frobnicate"]) == EXIT_CONFIG
    assert main([]) == EXIT_CONFIG
    assert main(["sweep", "--config", "x", "--threads", "zero"]) == EXIT_CONFIG


def test_sweep(small_ini, tmp_path, capsys):
    out = tmp_path / "res"
    assert main(["sweep", "--config", str(small_ini), "--out", str(out), "--threads", "2"]) == EXIT_OK
    text = (out / "sweep.csv").read_text()
    assert text.startswith("entry_id,alpha,p,a,b,theorem,admissible,")
    assert len(text.splitlines()) == 1 + 27
    assert (out / "ratio_vs_a.dat").exists() and (out / "ratio_vs_p.dat").exists()
    assert "27 rows, 0 failed, 2 threads" in capsys.readouterr().out


def test_sweep_bad_threads(small_ini, tmp_path):
    assert main(["sweep", "--config", str(small_ini), "--out", str(tmp_path), "--threads", "0"]) == EXIT_CONFIG


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "laguerre_hpw", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
