import csv
import json
import time

import numpy as np
import pytest

from lvtlab import cli, scenarios


def _run(args):
    return cli.main(args)


def test_list_and_describe(capsys):
    assert _run(["list"]) == 0
    out = capsys.readouterr().out
    for name in scenarios.PRESETS:
        assert name in out
    assert _run(["describe", "fig4-r4-2d"]) == 0
    assert "N=498" in capsys.readouterr().out
    assert _run(["describe", "no-such"]) == 2


def test_unknown_preset_and_bad_args(tmp_path):
    assert _run(["run", "no-such", "--out", str(tmp_path)]) == 2
    assert _run(["frobnicate"]) == 2


def test_run_writes_outputs(tmp_path):
    out = tmp_path / "fig1"
    assert _run(["run", "fig1-iho3d", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["passed"] and summary["scenario"] == "fig1-iho3d"
    assert list(summary) == sorted(summary)
    with open(out / "field.csv") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    for col in ("coord", "rho", "tau", "tau1", "xi", "lap_rho", "dlvt_lhs", "dlvt_rhs", "dlvt_res", "dlvt_mask"):
        assert col in header
    # 12 significant digits
    v = rows[5][header.index("rho")]
    assert len(v.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 12
    compile((out / "plot.py").read_text(), "plot.py", "exec")


def test_run_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(["run", "fig3-quartic1d", "--out", str(a)]) == 0
    assert _run(["run", "fig3-quartic1d", "--out", str(b)]) == 0
    assert (a / "field.csv").read_text() == (b / "field.csv").read_text()


def test_tolerance_failure_exit_code(tmp_path):
    # the leading asymptotic delta rho misses the exact one by more than 5%
    assert _run(["run", "fig7-airy", "--out", str(tmp_path)]) == 1
    s = json.loads((tmp_path / "summary.json").read_text())
    failed = [c["name"] for c in s["checks"] if not c["passed"]]
    assert failed == ["delta rho_as vs exact for x <= x_lambda - 1 (rel L_inf)"]


def test_ini_config_overrides(tmp_path):
    ini = tmp_path / "box.ini"
    ini.write_text("[scenario]\npreset = box-suite\n\n[params]\nMs = 2\nn = 1001\n")
    t0 = time.perf_counter()
    assert _run(["run", str(ini), "--out", str(tmp_path / "o")]) == 0
    assert time.perf_counter() - t0 < 1.0
    s = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert s["params"]["Ms"] == 2 and s["params"]["n"] == 1001


def test_ini_config_errors(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[params]\nN = 3\n")
    assert _run(["run", str(bad)]) == 2
    bad.write_text("[scenario]\npreset = nope\n")
    assert _run(["run", str(bad)]) == 2
    bad.write_text("[scenario]\npreset = fig3-quartic1d\n[params]\nbogus = 1\n")
    assert _run(["run", str(bad)]) == 2
    # open shell -> configuration error, not a crash
    bad.write_text("[scenario]\npreset = fig4-r4-2d\n[params]\nN = 500\n")
    assert _run(["run", str(bad), "--out", str(tmp_path / "x")]) == 2


def test_grid_refine(tmp_path):
    assert _run(["run", "fig3-quartic1d", "--grid-refine", "--out", str(tmp_path)]) == 0
    s = json.loads((tmp_path / "summary.json").read_text())
    assert s["refine"]["passed"] and s["refine"]["params"] == {"h": 0.005}
    assert all(v["drift"] <= 0.1 for v in s["refine"]["drift"].values())


def test_parse_value():
    assert cli._parse_value("3") == 3
    assert cli._parse_value("0.5") == 0.5
    assert cli._parse_value("10, 20, 40") == (10, 20, 40)
    assert cli._parse_value("yes") is True
    assert cli._parse_value("TF") == "TF"


def test_paper_scale_parameters():
    sc = scenarios.get_preset("fig5-r4-2d")
    assert sc.params()["N"] == 498
    p = sc.params(paper_scale=True)
    assert p["N"] == 16906 and p["c"] == 0.25
    assert scenarios.get_preset("fig1-iho3d").params(True)["M"] == 60


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("LVTLAB_THREADS", "2")
    monkeypatch.delenv("OMP_NUM_THREADS", raising=False)
    assert _run(["list"]) == 0
    import os
    assert os.environ["OMP_NUM_THREADS"] == "2"


# fig2 and fig7 carry criteria that are not met at desk scale (see README)
EXPECTED_FAIL = {"fig2-chaos", "fig7-airy"}


@pytest.mark.parametrize("name", sorted(scenarios.PRESETS))
def test_every_preset_runs(name, tmp_path):
    code = _run(["run", name, "--out", str(tmp_path)])
    assert code == (1 if name in EXPECTED_FAIL else 0)
    s = json.loads((tmp_path / "summary.json").read_text())
    assert s["checks"]
