import csv
import io
import json
import subprocess
import sys

import pytest
from conftest import ADDITIVE_F4

from qmultilinear import cli
from qmultilinear.rmcode import code_make
from qmultilinear.gf import field_make


@pytest.fixture
def code_file(tmp_path):
    import numpy as np

    path = tmp_path / "c.txt"
    path.write_text(code_make(3, 2, field_make(2), np.array(ADDITIVE_F4)).to_text())
    return str(path)


def test_nonpappus_json():
    code, rep = cli.run(["verify", "nonpappus", "--q", "2", "--m", "8", "--json"])
    assert code == 0 and rep["status"] == "confirmed"
    assert rep["result"]["certificate"]["P"] == 2659
    assert rep["schema"] == "report_v1" and rep["seed"] == 0 and "wall_time" in rep
    assert rep["config"]["q"] == 2 and rep["config"]["m"] == 8


def test_nonpappus_large_m_is_inconclusive():
    code, rep = cli.run(["verify", "nonpappus", "--q", "2", "--m", "9"])
    assert code == 2 and rep["result"]["distribution"][6] == 4088


def test_fixtures_check():
    code, rep = cli.run(["fixtures", "check"])
    assert code == 0
    assert rep["result"]["nonpappus_f3"]["lines_ok"] and rep["result"]["u24_f2"]["is_U24"]


def test_search_divisible_census():
    code, rep = cli.run(["search", "divisible", "--n", "4", "--m", "2", "--k", "4", "--q", "2"])
    c = rep["result"]["certificate"]["census"]
    assert code == 0 and c["total"] == 200787 and c["flags"]["2"] == c["almost_affine"] == 357
    assert "survivors" not in c


def test_search_targets_and_workers():
    base = ["search", "divisible", "--n", "3", "--m", "2", "--k", "2", "--target", "uniform:1", "--target", "rank1:1"]
    code1, r1 = cli.run(base + ["--workers", "1"])
    code2, r2 = cli.run(base + ["--workers", "2"])
    assert code1 == code2 == 0
    assert r1["result"]["certificate"] == r2["result"]["certificate"]
    assert r1["result"]["certificate"]["census"]["targets"]["uniform:1"] == 0


def test_reports_are_reproducible():
    argv = ["verify", "uniform", "--k", "1", "--n", "3", "--m", "2"]
    a, b = cli.run(argv)[1], cli.run(argv)[1]
    assert json.dumps(cli.comparable(a), sort_keys=True) == json.dumps(cli.comparable(b), sort_keys=True)


def test_workers_env(monkeypatch):
    monkeypatch.setenv("QMULTILINEAR_WORKERS", "2")
    _, rep = cli.run(["verify", "class", "--class", "(9,34)"])
    assert rep["config"]["workers"] == 2 and rep["status"] == "confirmed"


@pytest.mark.parametrize("argv", [
    [], ["verify"], ["verify", "uniform", "--k", "1"], ["bogus"],
    ["verify", "uniform", "--k", "0", "--n", "3", "--m", "2"],
    ["verify", "nonpappus", "--q", "6", "--m", "8"],
    ["verify", "class", "--class", "8,33"],
    ["code", "info", "/nonexistent/file"],
    ["verify", "rank1", "--n", "4", "--t", "1", "--budget", "0"],
])
def test_usage_errors(argv):
    code, rep = cli.run(argv)
    assert code == 3 and rep["status"] == "usage_error"


def test_budget_is_inconclusive():
    code, rep = cli.run(["search", "divisible", "--n", "4", "--m", "2", "--k", "4", "--budget", "100"])
    assert code == 2 and rep["status"] == "inconclusive"


def test_small_census_is_right_linear():
    code, rep = cli.run(["search", "divisible", "--n", "2", "--m", "2", "--k", "2", "--survivors"])
    c = rep["result"]["certificate"]["census"]
    assert code == 0 and c["almost_affine"] == 5 == len(c["survivors"]) and c["not_right_linear"] == 0


def test_code_commands(code_file):
    code, rep = cli.run(["code", "info", code_file])
    assert code == 0 and rep["result"]["k"] == 3 and rep["result"]["rank_distribution"] == [1, 1, 6]
    code, rep = cli.run(["code", "dual", code_file])
    assert code == 0 and rep["result"]["k"] == 3
    code, rep = cli.run(["code", "distribution", code_file])
    assert code == 0 and all(rep["result"]["macwilliams"])


def test_tensor_rho(code_file):
    code, rep = cli.run(["tensor", "rho", code_file, "--code", "--U", "100,010", "--A", "100,010,001"])
    assert code == 0 and rep["result"]["rho_T"] == "3/2" == rep["result"]["rho_C"]


def test_qm_dump_and_iso(tmp_path):
    paths = []
    for i, extra in enumerate((["--construction", "almost-uniform"], ["--construction", "uniform"])):
        code, rep = cli.run(["qm", "dump", *extra])
        assert code == 0
        p = tmp_path / f"m{i}.json"
        p.write_text(json.dumps(rep["result"]["qmatroid"]))
        paths.append(str(p))
    assert cli.run(["qm", "iso", paths[0], paths[0]])[0] == 0
    assert cli.run(["qm", "iso", paths[0], paths[1]])[0] == 1


def test_classify_n3():
    code, rep = cli.run(["classify", "--n", "3", "--m-range", "2..3"])
    assert code == 0 and rep["result"]["certificate"]["params"]["m_range"] == [2, 3]


def test_render_formats():
    _, rep = cli.run(["verify", "class", "--class", "5,30"])
    md = cli.render(rep, "markdown")
    assert md.startswith("## verify class: confirmed") and "| key | value |" in md
    rows = list(csv.reader(io.StringIO(cli.render(rep, "csv"))))
    assert rows[0] == ["key", "value"]
    assert ["result.certificate.sum", "36"] in rows


def test_main_writes_output_file(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert cli.main(["verify", "almost-uniform", "--k", "2", "--n", "4", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().startswith("key,value")
    assert cli.main(["verify", "bogus", "--json"]) == 3
    captured = capsys.readouterr()
    assert json.loads(captured.out)["status"] == "usage_error" and "error" in captured.err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmultilinear.cli", "fixtures", "check", "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "pass"


def test_qm_iso_reads_dump_reports(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["qm", "dump", "--construction", "spread", "--size", "4", "--json", "--out", str(a)]) == 0
    assert cli.main(["qm", "dump", "--construction", "almost-uniform", "--json", "--out", str(b)]) == 0
    assert cli.run(["qm", "iso", str(a), str(a)])[0] == 0
    assert cli.run(["qm", "iso", str(a), str(b)])[0] == 1
