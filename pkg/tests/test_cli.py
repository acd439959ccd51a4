import io
import json
import subprocess
import sys

import pytest

from thetatrace.cli import build_config, build_parser, main, read_config_file, run
from thetatrace.errors import ConfigError
from thetatrace.report import AUDIT, DERIVED, PAPER, TRIVIAL
from thetatrace.suites import DEFAULT_TOLERANCES, SuiteConfig, plan


def _run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_verify_single_suite_passes(capsys):
    code, out = _run(["verify", "specfun"], capsys)
    assert code == 0
    assert "specfun: pass" in out.out and "overall: pass" in out.out


def test_mellin_grid_example(capsys):
    code, out = _run(["verify", "mellin", "--self-dual", "--grid-re", "0.3:2:5", "--grid-im", "-5:5:5"],
                     capsys)
    assert code == 0


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2


def test_tightened_tolerance_fails(capsys):
    code, out = _run(["verify", "specfun", "--tol", "gamma_value=1e-18"], capsys)
    assert code == 1
    assert "FAILED gamma_value" in out.out


def test_loosening_needs_relax(capsys):
    code, out = _run(["verify", "specfun", "--tol", "gamma_value=1e-3"], capsys)
    assert code == 2
    assert _run(["verify", "specfun", "--tol", "gamma_value=1e-3", "--relax"], capsys)[0] == 0


def test_unknown_tolerance_name(capsys):
    assert _run(["verify", "specfun", "--tol", "nope=1"], capsys)[0] == 2


def test_rate_floor_tightens_upward():
    tight = dict(DEFAULT_TOLERANCES, ulclt_rate=0.9)
    SuiteConfig(tolerances=tight)
    with pytest.raises(ConfigError):
        SuiteConfig(tolerances=dict(DEFAULT_TOLERANCES, ulclt_rate=0.5))


def test_config_file_and_flag_precedence(tmp_path):
    cfg_file = tmp_path / "tt.cfg"
    cfg_file.write_text("# comment\nseed = 7\nsamples = 50\ntol.gamma_value = 1e-14\n")
    assert read_config_file(cfg_file)["seed"] == "7"
    args = build_parser().parse_args(["verify", "tp", "--config", str(cfg_file), "--seed", "9"])
    cfg = build_config(args, args.suites)
    assert cfg.seed == 9 and cfg.samples == 50 and cfg.tol("gamma_value") == 1e-14
    cfg_file.write_text("colour = blue\n")
    assert main(["verify", "specfun", "--config", str(cfg_file)]) == 2


def test_plan_expansion():
    names = [n for n, _ in plan("verify", ["all"])]
    assert names[:2] == ["specfun", "cycle"] and "audit_symmetry" in names
    assert [n for n, _ in plan("audit", ["tp", "tp"])] == ["audit_tp"]
    with pytest.raises(ConfigError):
        plan("audit", ["nope"])


def test_reports_written_and_tagged(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _ = _run(["verify", "all", "--out", str(out), "--jobs", "3"], capsys)
    assert code == 0
    summary = json.loads(out.read_text())
    assert summary["exit_code"] == 0 and summary["schema"] == 1
    assert "timestamp" in summary["metadata"]
    tags = set()
    for s in summary["suites"]:
        rep = json.loads((tmp_path / s["report"]).read_text())
        assert rep["status"] in ("pass", "audit")
        tags |= {c["provenance"] for c in rep["checks"]}
    assert tags <= {TRIVIAL, DERIVED, PAPER, AUDIT} and PAPER in tags


def test_jobs_do_not_change_reports(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d, j in ((a, "1"), (b, "4")):
        d.mkdir()
        main(["audit", "all", "--samples", "300", "--no-timestamps", "--jobs", j, "--out", str(d / "x.json")])
    capsys.readouterr()
    assert {p.name: p.read_bytes() for p in a.iterdir()} == {p.name: p.read_bytes() for p in b.iterdir()}


def test_csv_output(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert _run(["verify", "zeros", "--format", "csv", "--out", str(out)], capsys)[0] == 0
    assert out.read_text().startswith("name,status")
    assert (tmp_path / "r.zeros.csv").read_text().startswith("report,name")


def test_audit_exit_zero_despite_residuals(capsys):
    code, out = _run(["audit", "zeros"], capsys)
    assert code == 0 and "audit_zeros: audit" in out.out


def test_zeros_subcommands(capsys):
    code, out = _run(["zeros", "count", "--function", "xi", "--rect", "-1,2,10,20"], capsys)
    assert code == 0 and out.out.strip().endswith(": 1")
    code, out = _run(["zeros", "count", "--function", "gamma", "--rect", "-1.4,-0.6,-0.4,0.4"], capsys)
    assert out.out.strip().endswith(": -1")
    code, out = _run(["zeros", "find", "--function", "Xi2", "--bracket", "10,11"], capsys)
    assert code == 0 and "10.51101981938" in out.out
    assert _run(["zeros", "find", "--function", "Xi2", "--bracket", "1,2"], capsys)[0] == 2
    assert _run(["zeros", "count", "--function", "xi"], capsys)[0] == 2


def test_run_without_output_prints_summaries():
    buf = io.StringIO()
    assert run(SuiteConfig(suites=("zeros",)), "verify", buf) == 0
    assert buf.getvalue().splitlines()[-1] == "overall: pass"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "thetatrace", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("thetatrace ")
