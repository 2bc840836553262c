import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from uoc_ae.cli import main
from uoc_ae.montecarlo import McConfig
from uoc_ae.params import BarrierOption, ConfigError, ModelParams, QuadConfig
from uoc_ae.runspec import (RunSpec, parse_config_text, spec_from_mapping,
                            spec_to_config_text)

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
CASE1_FLAGS = ["--spot", "100", "--sigma", "0.2", "--eps-nu", "0.1", "--rho", "-0.5",
               "--barrier", "120", "--maturity", "1", "--strike", "100"]


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_price_ae0_row():
    code, text = run(["price", *CASE1_FLAGS, "--method", "ae0"])
    assert code == 0
    row = [ln for ln in text.splitlines() if ln.startswith("ae0")][0]
    assert row.split()[:3] == ["ae0", "100", "1.105"]


def test_price_correction_column():
    code, text = run(["price", *CASE1_FLAGS, "--method", "ae1,ae0", "--output", "csv"])
    assert code == 0
    rows = {r["method"]: r for r in csv.DictReader(io.StringIO(text))}
    assert float(rows["ae1"]["correction"]) == pytest.approx(0.083, abs=1e-3)
    assert float(rows["ae0"]["value"]) == pytest.approx(1.105, abs=1e-3)


def test_malformed_barrier_exits_2(capsys):
    code, _ = run(["price", *CASE1_FLAGS[:-2], "--strike", "130"])
    assert code == 2
    assert "K < H" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["price", "--strike", "100"],  # barrier missing
    ["price", *CASE1_FLAGS, "--method", "bogus"],
    ["price", *CASE1_FLAGS, "--sigma", "-0.2"],
    ["price", *CASE1_FLAGS, "--quad-time", "1"],
    ["price", *CASE1_FLAGS, "--paths", "0"],
    ["price", "--config", "/nonexistent.cfg"],
    ["table", "--case", "9"],
    ["nonsense"],
])
def test_config_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_convergence_failure_exits_1(capsys):
    code, text = run(["price", *CASE1_FLAGS, "--method", "ae1", "--quad-time", "3",
                      "--quad-space", "16"])
    assert code == 1
    assert "not converged" in capsys.readouterr().err
    assert "ae1" in text


def test_csv_and_json_lines_agree():
    _, c = run(["price", *CASE1_FLAGS, "--method", "ae0,ae1", "--output", "csv"])
    _, j = run(["price", *CASE1_FLAGS, "--method", "ae0,ae1", "--output", "json-lines"])
    header = c.splitlines()[0]
    assert header == "case,strike,method,value,zeroth,correction,stderr,rel_err_pct"
    csv_rows = list(csv.DictReader(io.StringIO(c)))
    json_rows = [json.loads(ln) for ln in j.splitlines()]
    assert [list(r) for r in json_rows] == [header.split(",")] * 2
    for cr, jr in zip(csv_rows, json_rows):
        for key in ("value", "zeroth", "correction"):
            assert float(cr[key]) == jr[key]


def test_text_matches_machine_output():
    _, t = run(["price", *CASE1_FLAGS, "--method", "ae1"])
    _, j = run(["price", *CASE1_FLAGS, "--method", "ae1", "--output", "json-lines"])
    row = json.loads(j)
    line = [ln for ln in t.splitlines() if ln.startswith("ae1")][0].split()
    assert line[2] == f"{row['value']:.3f}"
    assert line[4] == f"{row['correction']:.3f}"


def test_flags_override_config(tmp_path):
    code, text = run(["price", "--config", str(CONFIGS / "case1.cfg"), "--strike", "105",
                      "--output", "json-lines", "--method", "ae0"])
    assert code == 0
    assert json.loads(text)["value"] == pytest.approx(0.463, abs=1e-3)
    cfg = tmp_path / "c.cfg"
    cfg.write_text(spec_to_config_text(spec_from_mapping(
        {"eps-nu": 0.1, "rho": -0.5, "strike": 100, "barrier": 120})))
    code, text = run(["price", "--config", str(cfg), "--eps-nu", "0.2", "--method", "ae1",
                      "--output", "json-lines"])
    assert json.loads(text)["value"] == pytest.approx(1.271, abs=1e-3)


@pytest.mark.parametrize("cid", range(1, 7))
def test_case_files_parse(cid):
    spec = spec_from_mapping(parse_config_text((CONFIGS / f"case{cid}.cfg").read_text()))
    assert spec.model.eps_nu == pytest.approx(0.1 if cid <= 3 else 0.2)
    assert spec.option.H == {0: 120.0, 1: 130.0, 2: 140.0}[(cid - 1) % 3]


def test_table_columns():
    code, text = run(["table", "--case", "2", "5"])
    assert code == 0
    lines = text.splitlines()
    i2 = lines.index(next(ln for ln in lines if ln.startswith("Case 2")))
    first2 = [float(lines[i2 + 2 + k].split()[1]) for k in range(3)]
    assert first2 == pytest.approx([3.200, 2.607, 1.857], abs=1e-3)
    i5 = lines.index(next(ln for ln in lines if ln.startswith("Case 5")))
    zeroth5 = [float(lines[i5 + 2 + k].split()[2]) for k in range(3)]
    assert zeroth5 == pytest.approx([2.966, 2.406, 1.702], abs=1e-3)


def test_table_csv_with_mc_relative_errors():
    code, text = run(["table", "--case", "1", "--mc", "--paths", "4000", "--steps", "50",
                      "--bridge", "--output", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 9
    for r in rows:
        assert r["case"] == "1"
        if r["method"] == "mc":
            assert r["rel_err_pct"] == "" and float(r["stderr"]) > 0
        else:
            assert r["rel_err_pct"] != ""
    code, text = run(["table", "--case", "1", "--mc", "--paths", "4000", "--steps", "50"])
    assert "%" in text and "MC" in text


def test_check_commands():
    for what in ("greeks", "kernel", "convergence"):
        code, text = run(["check", what])
        assert code == 0 and "all checks passed" in text
    code, text = run(["check", "greeks", "--printed"])
    assert code == 1 and "FAIL" in text


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "uoc_ae", "price", *CASE1_FLAGS,
                          "--method", "ae0", "--output", "csv"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1].startswith(",100.0,ae0,1.10")


floats = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(S=st.floats(1, 99), sigma=st.floats(0.01, 2), c=floats.filter(lambda v: abs(v) < 1),
       q=st.floats(-1, 1), eps=st.floats(0.001, 0.99), nu=st.floats(0, 5), lam=st.floats(0, 5),
       theta=st.floats(0, 1), rho=st.floats(-1, 1), K=st.floats(0.5, 99), T=st.floats(0.01, 10),
       methods=st.lists(st.sampled_from(["ae0", "ae1", "mc"]), min_size=1, max_size=3, unique=True),
       n_time=st.integers(2, 500), seed=st.integers(0, 2**63 - 1), bridge=st.booleans(),
       output=st.sampled_from(["text-table", "csv", "json-lines"]))
def test_runspec_round_trip(S, sigma, c, q, eps, nu, lam, theta, rho, K, T, methods, n_time,
                            seed, bridge, output):
    spec = RunSpec(ModelParams(S, sigma, c, q, eps, lam, theta, nu, rho),
                   BarrierOption(K, 100.0, T), tuple(methods),
                   QuadConfig(n_time=n_time), McConfig(seed=seed, bridge_correction=bridge),
                   output)
    assert spec_from_mapping(parse_config_text(spec_to_config_text(spec))) == spec


def test_config_parse_errors():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("spot = 100\nnot a pair\n")
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text("volatility = 0.2\n")
    with pytest.raises(ConfigError, match="bridge"):
        spec_from_mapping({"strike": 100, "barrier": 120, "bridge": "maybe"})
