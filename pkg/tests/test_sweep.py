import csv
import io

import numpy as np
import pytest

from laguerre_hpw.config import SweepConfig
from laguerre_hpw.sweep import CSV_HEADER, THREADS_ENV, SweepRow, resolve_threads, run_sweep
from laguerre_hpw.uncertainty import HpwRecord

SMALL = dict(n_x=128, n_t=256, m_max=32, catalog=("gaussian_b1_e1", "modulated_l1"))


@pytest.fixture(scope="module")
def report():
    return run_sweep(SweepConfig(**SMALL))


@pytest.fixture(scope="module")
def table(report):
    return list(csv.DictReader(io.StringIO(report.csv_text())))


def test_header(report):
    first = report.csv_text().splitlines()[0]
    assert first == ",".join(CSV_HEADER)
    assert first == ("entry_id,alpha,p,a,b,theorem,admissible,norm_p,wnorm_space,wnorm_dual,"
                     "lhs,rhs,ratio,plancherel_defect,scale_defect,error")


def test_rows(report, table):
    assert len(table) == 2 * 3 * 3 * 3
    assert report.n_failed == 0
    assert [r.key for r in report.rows] == sorted(r.key for r in report.rows)
    for row in table:
        assert row["error"] == ""
        assert float(row["ratio"]) > 0
        assert float(row["scale_defect"]) < 1e-4
        assert float(row["plancherel_defect"]) < 1e-8
        assert row["theorem"] == {"1.0": "T15", "1.5": "T15", "2.0": "T17"}[row["p"]]


def test_ratio_from_columns(table):
    for row in table:
        a, b = float(row["a"]), float(row["b"])
        n, ws, wd = float(row["norm_p"]), float(row["wnorm_space"]), float(row["wnorm_dual"])
        np.testing.assert_allclose(float(row["ratio"]), ws**b * wd**a / n ** (a + b), rtol=1e-12)
        np.testing.assert_allclose(float(row["lhs"]), n ** (a + b), rtol=1e-12)


def test_inadmissible_rows_are_populated(table):
    # p = 1 requires b > Q / 2 = 2 at alpha = 0
    rows = [r for r in table if r["p"] == "1.0"]
    assert {r["admissible"] for r in rows if float(r["b"]) <= 2} == {"false"}
    assert {r["admissible"] for r in rows if float(r["b"]) > 2} == {"true"}
    assert all(r["ratio"] for r in rows)


def test_theorem_list():
    cfg = SweepConfig(**{**SMALL, "catalog": ("gaussian_b1_e1",)}, p_list=(2.0,), a_grid=(1.0,),
                      b_grid=(1.0,), theorem_list=("T16", "T17", "T18"))
    rows = run_sweep(cfg).rows
    assert [r.theorem for r in rows] == ["T16", "T17", "T18"]
    assert all(r.admissible and r.ok for r in rows)
    # at p = 2 every theorem measures the same L^2 quantities by Plancherel
    np.testing.assert_allclose([r.record.ratio for r in rows], rows[1].record.ratio, rtol=1e-10)


def test_error_column():
    row = SweepRow("x", 0.0, 1.0, 1.0, 1.0, "T15", False, error="ValueError: boom")
    cells = row.cells()
    assert not row.ok
    assert cells[6] == "false" and cells[7:13] == [""] * 6 and cells[-1] == "ValueError: boom"
    rec = HpwRecord(1.0, 1.0, 1.0, 2.0, 3.0, 1.5, "T15", True, 1.0, 2.0, 3.0)
    assert SweepRow("x", 0.0, 1.0, 1.0, 1.0, "T15", True, record=rec).cells()[12] == "1.5"


def test_write(report, tmp_path):
    paths = report.write(tmp_path / "out")
    assert [p.name for p in paths] == ["sweep.csv", "ratio_vs_a.dat", "ratio_vs_p.dat"]
    assert paths[0].read_text() == report.csv_text()
    blocks = [b for b in paths[1].read_text().split("\n\n\n") if b.strip()]
    assert len(blocks) == 2 * 3 * 3  # entry x p x b
    head, *pts = blocks[0].strip().splitlines()
    assert head.startswith("# entry_id=") and len(pts) == 3
    xs = [float(line.split()[0]) for line in pts]
    assert xs == sorted(xs)
    assert len(report.write(tmp_path / "bare", plots=False)) == 1


def test_plot_axis(report):
    with pytest.raises(ValueError):
        report.plot_text("b")


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads(None, 2) == 2
    monkeypatch.setenv(THREADS_ENV, "5")
    assert resolve_threads(None, 2) == 5
    assert resolve_threads(3, 2) == 3
    with pytest.raises(ValueError):
        resolve_threads(0, 1)
