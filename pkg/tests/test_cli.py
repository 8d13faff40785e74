import json
import subprocess
import sys

import yaml

from irrigopt.cli import EXIT_FILE, EXIT_PARSE, EXIT_REPORT, EXIT_USAGE, main
from irrigopt.datasets import bundled_path
from irrigopt.formats import manifest_path, read_front, read_plan


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def first_error(err):
    line = err.splitlines()[0]
    assert line.startswith("irrigopt: error=")
    return dict(kv.split("=", 1) for kv in line[len("irrigopt: "):].split(" ", 2))


def test_validate_bundled(capsys):
    code, out, _ = run(["validate", "representative"], capsys)
    assert code == 0 and "10 crops x 12 months" in out


def test_validate_reports_field_path(tmp_path, capsys):
    doc = yaml.safe_load(bundled_path("representative").read_text())
    doc["months"][3]["inflow"] = -1
    path = tmp_path / "bad.yaml"
    path.write_text(yaml.safe_dump(doc))
    code, _, err = run(["validate", path], capsys)
    info = first_error(err)
    assert code == EXIT_PARSE and info["error"] == "validation" and "months[3].inflow" in info["detail"]


def test_missing_file_and_usage_errors(capsys):
    code, _, err = run(["validate", "/nonexistent/s.yaml"], capsys)
    assert code == EXIT_FILE and first_error(err)["error"] == "file"
    code, _, err = run(["front", "toy", "--grid-points", "3", "--out", "x.csv", "--bogus"], capsys)
    assert code == EXIT_USAGE and first_error(err)["error"] == "usage"
    code, _, _ = run(["validate", "toy", "--verbose", "--quiet"], capsys)
    assert code == EXIT_USAGE


def test_solve_nb_with_target_flow(tmp_path, capsys):
    out_path, lp_path = tmp_path / "plan.csv", tmp_path / "model.txt"
    code, out, _ = run(["solve-nb", "representative", "--with-target-flow", "--out", out_path,
                        "--dump-lp", lp_path], capsys)
    assert code == 0 and "efd=0" in out
    assert all(v == 100 for v in read_plan(out_path)[1].values())
    assert manifest_path(out_path).exists() and "X[Potato]" in lp_path.read_text()


def test_solve_efd(capsys):
    code, out, _ = run(["solve-efd", "representative", "--threads", "1"], capsys)
    assert code == 0 and "efd=0 " in out


def test_front_single_weight(tmp_path, capsys):
    path = tmp_path / "f.csv"
    code, out, _ = run(["front", "toy", "--grid-points", "1", "--out", path], capsys)
    assert code == 0 and "points=" in out and "time=" in out
    assert len(read_front(path)) <= 4
    m = json.loads(manifest_path(path).read_text())
    assert m["parameters"]["grid_points"] == 1 and len(m["scenario_digest"]) == 64


def test_report_accepts_and_rejects(tmp_path, capsys):
    path = tmp_path / "f.csv"
    assert run(["front", "toy-kinked", "--grid-points", "15", "--out", path], capsys)[0] == 0
    code, out, _ = run(["report", path, "--scenario", "toy-kinked"], capsys)
    assert code == 0 and out.startswith("ok")
    lines = path.read_text().splitlines()
    nb, e = map(float, lines[5].split(",")[:2])
    lines.insert(6, f"{nb - 5:.9g},{e + 0.5:.9g},,injected")
    path.write_text("\n".join(lines) + "\n")
    code, _, err = run(["report", path], capsys)
    assert code == EXIT_REPORT and first_error(err)["error"] == "report"
    assert "line 7" in err


def test_report_flags_missed_endpoint(tmp_path, capsys):
    path = tmp_path / "f.csv"
    run(["front", "toy-kinked", "--grid-points", "15", "--out", path], capsys)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")     # drop the best-benefit endpoint
    code, _, err = run(["report", path, "--scenario", "toy-kinked"], capsys)
    assert code == EXIT_REPORT and "does not reach the optimum" in err


def test_baseline_is_reproducible(tmp_path, capsys):
    outs = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in outs:
        assert run(["baseline", "toy-kinked", "--pop", "20", "--gens", "15", "--seed", "4", "--out", p],
                   capsys)[0] == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    code, _, _ = run(["baseline", "toy", "--pop", "5", "--out", outs[0]], capsys)
    assert code == EXIT_USAGE


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "irrigopt", "validate", "toy-linear"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "1 crops x 1 months" in proc.stdout
