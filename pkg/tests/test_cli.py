from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from a4toric.cli import main
from a4toric.tables import FaberData


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, err = run_cli(capsys, argv)
    assert code == 0, err
    return json.loads(out)


def as_fraction(rat):
    return Fraction(int(rat["numerator"]), int(rat["denominator"]))


def test_fan_report_json(capsys):
    doc = run_json(capsys, ["fan", "report", "--format", "json", "--reproducible"])
    assert doc["command"] == "fan report"
    assert "generated_at" not in doc
    res = doc["results"]
    assert res["ray_count"] == 12
    assert res["facet_count"] == 64
    assert res["cone_count"] == 64
    assert res["all_cones_basic"] is True
    assert res["stabilizer_order"] == 1152
    assert res["exceptional_ray"]["coordinates"] == [2, 4, 2, 2, 2, 1, 1, 2, 2, 1]
    assert res["exceptional_ray"]["content"] == 3
    assert len(res["rays"]) == 12
    assert all(len(f["rays"]) == 9 for f in res["facets"])
    assert all(abs(c["determinant"]) == 1 for c in res["cones"])


def test_fan_report_text(capsys):
    code, out, err = run_cli(capsys, ["fan", "report", "--reproducible"])
    assert code == 0
    assert "ray count: 12" in out
    assert "facet count: 64" in out
    assert "stabilizer order: 1152" in out


def test_intersection_e10(capsys):
    doc = run_json(capsys, ["intersection", "e10", "--format", "json", "--reproducible"])
    res = doc["results"]
    assert res["expression"] == "E^10"
    assert as_fraction(res["system_value"]) == -1680
    assert as_fraction(res["recursive_value"]) == -1680
    assert res["agree"] is True
    assert res["stabilizer_order"] == 1152
    assert as_fraction(res["moduli_value"]) == Fraction(-35, 24)


def test_intersection_grammar_alias(capsys):
    doc = run_json(
        capsys, ["intersection", "eval", "E^10", "--format", "json", "--reproducible"]
    )
    assert as_fraction(doc["results"]["recursive_value"]) == -1680


def test_intersection_facet_monomial(capsys, star):
    facet = star.facets[0]
    expr = "E*" + "*".join(f"D{i + 1}" for i in sorted(facet.incident))
    doc = run_json(capsys, ["intersection", expr, "--format", "json", "--reproducible"])
    res = doc["results"]
    assert as_fraction(res["system_value"]) == 1
    assert as_fraction(res["recursive_value"]) == 1
    assert res["agree"] is True
    assert "moduli_value" not in res


def test_intersection_non_column_monomial(capsys, star):
    # Two squared boundary factors: valid for the recursive engine, but
    # not a column of the linear system.
    i, j = sorted(star.facets[0].incident)[:2]
    expr = f"E^6*D{i + 1}^2*D{j + 1}^2"
    doc = run_json(capsys, ["intersection", expr, "--format", "json", "--reproducible"])
    res = doc["results"]
    assert res["system_value"] is None
    assert res["agree"] is None
    int(res["recursive_value"]["numerator"])  # parses as an integer


@pytest.mark.parametrize(
    "argv",
    [
        ["intersection", "E^9"],
        ["intersection", "D1^10"],
        ["intersection", "X*Y"],
        ["intersection", "e10", "extra"],
        ["intersection", "E^11"],
        ["tables", "igusa", "--stack"],
        ["tables", "igusa", "--genus", "5"],
        ["tables", "igusa", "--basis", "geometric"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, argv)
    assert code == 2


def test_tables_ltop(capsys):
    doc = run_json(capsys, ["tables", "ltop", "--format", "json", "--reproducible"])
    res = doc["results"]
    assert res["genus"] == 4
    assert res["top_power"] == 10
    assert as_fraction(res["variety_value"]) == Fraction(1, 907200)
    assert as_fraction(res["stack_value"]) == Fraction(1, 1814400)
    assert res["selected"] == "variety"
    stacked = run_json(
        capsys, ["tables", "ltop", "--stack", "--format", "json", "--reproducible"]
    )
    assert stacked["results"]["selected"] == "stack"
    assert as_fraction(stacked["results"]["value"]) == Fraction(1, 1814400)
    low = run_json(
        capsys, ["tables", "ltop", "--genus", "2", "--format", "json", "--reproducible"]
    )
    assert as_fraction(low["results"]["value"]) == Fraction(1, 1440)


def test_tables_igusa(capsys):
    doc = run_json(capsys, ["tables", "igusa", "--format", "json", "--reproducible"])
    values = doc["results"]["values"]
    assert [v["k"] for v in values] == list(range(10, -1, -1))
    by_k = {v["k"]: as_fraction(v["value"]) for v in values}
    assert by_k[10] == Fraction(1, 907200)
    assert by_k[6] == Fraction(-1, 3780)
    assert by_k[0] == Fraction(101449217, 1440)
    assert by_k[9] == by_k[8] == by_k[7] == 0


def test_tables_voronoi(capsys):
    doc = run_json(capsys, ["tables", "voronoi", "--format", "json", "--reproducible"])
    res = doc["results"]
    assert res["basis"] == "lfe"
    assert as_fraction(res["e_top_toric"]) == -1680
    assert res["stabilizer_order"] == 1152
    entries = {(e["k"], e["l"]): as_fraction(e["value"]) for e in res["entries"]}
    assert len(entries) == 66
    assert entries[(0, 10)] == Fraction(-35, 24)
    assert entries[(10, 0)] == Fraction(1, 907200)
    assert entries[(0, 0)] == Fraction(101449217, 1440)
    assert entries[(3, 5)] == 0


def test_tables_voronoi_geometric(capsys):
    doc = run_json(
        capsys,
        ["tables", "voronoi", "--basis", "geometric", "--format", "json", "--reproducible"],
    )
    entries = {
        (e["k"], e["m"], e["l"]): as_fraction(e["value"])
        for e in doc["results"]["entries"]
    }
    assert len(entries) == 66
    assert entries[(10, 0, 0)] == Fraction(1, 907200)
    assert entries[(6, 4, 0)] == Fraction(-1, 3780)
    assert entries[(0, 0, 10)] == Fraction(-35, 24)
    assert entries[(0, 10, 0)] == Fraction(-2100560383, 1440)


def test_verify_text(capsys):
    code, out, err = run_cli(capsys, ["verify", "--reproducible"])
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert len(lines) == 10
    assert all(l.startswith("[PASS]") for l in lines)
    assert "10 checks: 10 passed, 0 failed" in out


def test_verify_json(capsys):
    doc = run_json(capsys, ["verify", "--json", "--reproducible"])
    res = doc["results"]
    assert res["all_passed"] is True
    assert res["passed_count"] == 10
    assert res["failed_count"] == 0
    names = [c["name"] for c in res["checks"]]
    assert names == [
        "hodge_top_power",
        "first_table",
        "recurrence_closure",
        "fan_combinatorics",
        "stabilizer",
        "exceptional_top_power",
        "engine_agreement",
        "second_table",
        "oracle_suites",
        "determinism",
    ]
    assert all(c["passed"] for c in res["checks"])


def test_verify_fault_injection(capsys):
    clean = FaberData.default()
    corrupted = FaberData(
        (clean.values[0] + 1,) + clean.values[1:]
    )
    code = main(["verify", "--reproducible"], _faber_override=corrupted)
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL]" in out
    failing = [l for l in out.splitlines() if l.startswith("[FAIL]")]
    assert any("first_table" in l or "recurrence_closure" in l for l in failing)
    # The toric side is untouched by the corrupted constants.
    assert any(
        l.startswith("[PASS]") and "exceptional_top_power" in l
        for l in out.splitlines()
    )


def test_timestamp_presence(capsys):
    with_ts = run_json(capsys, ["tables", "ltop", "--format", "json"])
    assert "generated_at" in with_ts
    without_ts = run_json(capsys, ["tables", "ltop", "--format", "json", "--reproducible"])
    assert "generated_at" not in without_ts


def test_repeated_runs_are_byte_identical(capsys):
    outputs = []
    for _ in range(2):
        code, out, err = run_cli(capsys, ["verify", "--json", "--reproducible"])
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_subprocess_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "a4toric", "tables", "ltop", "--format", "json", "--reproducible"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert as_fraction(doc["results"]["variety_value"]) == Fraction(1, 907200)
