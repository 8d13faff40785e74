import json

import numpy as np
import pytest

from irrigopt.datasets import bundled_path
from irrigopt.evaluation import AllocationPlan, ObjectivePair
from irrigopt.formats import (FRONT_HEADER, FrontFormatError, RunManifest, ScenarioParseError, dump_scenario,
                              export_front, export_plan, file_digest, load_scenario, manifest_path,
                              read_front, read_plan, verify_front_rows, verify_manifest)
from irrigopt.models import solve_model1
from irrigopt.pareto import FrontResult, FrontStats, ParetoPoint, run_front
from irrigopt.scenario import ScenarioValidationError


def test_bundled_representative_loads():
    s = load_scenario(bundled_path("representative"))
    assert (s.n_crops, s.n_months) == (10, 12)


def test_scenario_round_trip(tmp_path, rep, kinked):
    for s in (rep, kinked):
        path = tmp_path / "s.yaml"
        dump_scenario(s, path)
        back = load_scenario(path)
        assert back == s
        assert back.crops == s.crops and back.months == s.months and back.limits == s.limits
        assert np.array_equal(back.coefficients.values, s.coefficients.values)


def _rep_text():
    return bundled_path("representative").read_text()


def test_missing_section_names_it(tmp_path):
    text = _rep_text()
    head, rest = text.split("coefficients:", 1)
    tail = rest[rest.index("limits:"):]
    path = tmp_path / "bad.yaml"
    path.write_text(head + tail)
    with pytest.raises(ScenarioParseError, match="coefficients"):
        load_scenario(path)


def test_negative_inflow_cites_the_field(tmp_path, rep):
    import yaml
    doc = yaml.safe_load(_rep_text())
    doc["months"][3]["inflow"] = -10
    path = tmp_path / "neg.yaml"
    path.write_text(yaml.safe_dump(doc))
    with pytest.raises(ScenarioValidationError) as exc:
        load_scenario(path)
    assert "months[3].inflow" in exc.value.report.paths()


def test_malformed_yaml_reports_position(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("crops:\n  - name: a\n    gross_revenue_per_ha: [1, 2\nmonths: []\n")
    with pytest.raises(ScenarioParseError) as exc:
        load_scenario(path)
    assert exc.value.line is not None and exc.value.column is not None


def test_unknown_section_rejected(tmp_path):
    path = tmp_path / "extra.yaml"
    path.write_text(_rep_text() + "\nweather: {}\n")
    with pytest.raises(ScenarioParseError, match="weather"):
        load_scenario(path)


def _front(pairs, source="subproblem1"):
    pts = tuple(ParetoPoint(ObjectivePair(nb, e), None, None, source) for nb, e in pairs)
    return FrontResult(pts, FrontStats())


def test_three_point_front_file(tmp_path):
    path = tmp_path / "front.csv"
    export_front(_front([(3.0, 2.0), (1.0, 0.0), (2.0, 1.0)]), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 4 and lines[0] == ",".join(FRONT_HEADER)
    rows = read_front(path)
    assert [r.net_benefit for r in rows] == [1.0, 2.0, 3.0]
    assert verify_front_rows(rows) == []


def test_empty_front_refused(tmp_path):
    with pytest.raises(ValueError):
        export_front(_front([]), tmp_path / "x.csv")


def test_large_front_reparses_as_staircase(tmp_path):
    t = np.linspace(0, 1, 989)
    pairs = list(zip(1e9 * (1 - (1 - t) ** 2), 1200 * t))
    path = tmp_path / "big.csv"
    export_front(_front(pairs), path)
    rows = read_front(path)
    assert len(rows) == 989
    assert verify_front_rows(rows) == []


def test_injected_dominated_row_is_named(tmp_path, kinked):
    path = tmp_path / "f.csv"
    export_front(run_front(kinked, 10), path)
    lines = path.read_text().splitlines()
    nb, e = map(float, lines[3].split(",")[:2])
    lines.insert(4, f"{nb - 1:.9g},{e + 1:.9g},,injected")
    path.write_text("\n".join(lines) + "\n")
    problems = verify_front_rows(read_front(path))
    assert any("line 5" in p and "dominated" in p for p in problems)


def test_bad_header_rejected(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(FrontFormatError):
        read_front(path)


def test_manifest_and_rerun_bytes(tmp_path, kinked):
    src = bundled_path("toy-kinked")
    outs = []
    for k in range(2):
        path = tmp_path / f"front{k}.csv"
        m = RunManifest(file_digest(src), "weighted-constraint", {"grid_points": 20})
        export_front(run_front(kinked, 20), path, m)
        outs.append(path)
    assert outs[0].read_bytes() == outs[1].read_bytes()
    a, b = (json.loads(manifest_path(p).read_text()) for p in outs)
    a.pop("timestamps"); b.pop("timestamps")
    assert a == b
    assert verify_manifest(outs[0], src) == []
    outs[0].write_text(outs[0].read_text().replace("subproblem", "subproblen", 1))
    assert verify_manifest(outs[0]) != []


def test_plan_tables(tmp_path, rep):
    path = tmp_path / "plan.csv"
    export_plan(solve_model1(rep).plan, rep, path)
    areas, flows = read_plan(path)
    assert list(areas) == rep.crop_names and list(flows) == list(rep.month_labels)
    assert all(v == 0 for v in flows.values())
    export_plan(solve_model1(rep, with_target_constraint=True).plan, rep, path)
    assert all(v == 100 for v in read_plan(path)[1].values())
    export_plan(AllocationPlan(np.zeros(10), np.zeros(12)), rep, path)
    areas, flows = read_plan(path)
    assert not any(areas.values()) and not any(flows.values())
