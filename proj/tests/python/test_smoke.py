import json
import math
import os
import subprocess

import pytest

import bonusruin as br


def model():
    return br.exponential_model(1.0, 2.0, 1.0, 3.0)


def test_kappa_and_eigenvector():
    m = model()
    kappa = br.solve_kappa(m)
    assert 0.0 < kappa < 3.0
    assert br.mgf_x1(m, kappa) == pytest.approx(1.0, abs=1e-10)
    v1, v2 = br.adjustment_eigenvector(m, kappa)
    assert v1 > 0.0 and v2 > 0.0


def test_independence_is_classical():
    m = br.exponential_model(1.0, 1.0, 0.7, 3.0)
    assert br.solve_kappa(m) == pytest.approx(2.0, abs=1e-12)
    g = br.solve_integral_equations(m, 5.0, 0.01)
    for x, p in zip(g["grid"], g["psi2"]):
        assert abs(p - br.classical_ruin(1.0, 3.0, x)) < 1e-4


def test_estimators_agree():
    m = model()
    crude = br.crude_mc_ruin(m, 2.0, 100000, 1, escape_margin=40.0)
    imp = br.map_is_ruin(m, 2.0, 20000, 2)
    se = math.hypot(crude["std_error"], imp["std_error"])
    assert abs(crude["estimate"] - imp["estimate"]) < 3.0 * se
    assert imp["horizon"] is None
    assert crude["horizon"] == 1e4


def test_error_kind():
    with pytest.raises(br.BonusRuinError) as info:
        br.map_is_ruin(br.pareto_model(1.0, 2.0, 1.0, 2.0, 2.0), 1.0, 10, 1)
    assert info.value.kind == "wrong_regime"
    with pytest.raises(br.BonusRuinError) as info:
        br.exponential_model(-1.0, 2.0, 1.0, 3.0)
    assert info.value.kind == "invalid_parameter"


def test_run_cli_rows_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema_path = os.environ.get("BONUSRUIN_SCHEMA")
    if not schema_path:
        pytest.skip("BONUSRUIN_SCHEMA not set")
    with open(schema_path) as f:
        schema = json.load(f)
    code, out, err = br.run_cli(
        ["simulate", "beta=3", "lambda1=1", "lambda2=2", "xi=1", "x=0,2", "n=2000", "seed=5",
         "--format", "jsonl"])
    assert code == 0, err
    lines = [json.loads(line) for line in out.splitlines() if line.strip()]
    assert lines[0]["record"] == "metadata"
    assert len(lines) == 3
    for rec in lines:
        jsonschema.validate(rec, schema)


def test_tool_exit_codes():
    tool = os.environ.get("BONUSRUIN_TOOL")
    if not tool:
        pytest.skip("BONUSRUIN_TOOL not set")
    ok = subprocess.run([tool, "kappa", "beta=3", "lambda1=1", "lambda2=2", "xi=1"],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    missing = subprocess.run([tool, "kappa", "beta=3", "lambda1=1", "lambda2=2"],
                             capture_output=True, text=True)
    assert missing.returncode == 2
