"""CLI behavior: subcommands, exit codes, schemas, byte determinism."""

import json
from pathlib import Path

import jsonschema
import pytest

from chebsum.cli import main

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "chebsum" / "schemas"
POLY_SCHEMA = json.loads((SCHEMA_DIR / "poly.schema.json").read_text())
REPORT_SCHEMA = json.loads((SCHEMA_DIR / "report.schema.json").read_text())


def run(args, tmp_path, name="out.json"):
    path = tmp_path / name
    code = main(args + ["--json", str(path)])
    return code, path.read_text() if path.exists() else ""


def test_w_build_matches_poly_schema(tmp_path):
    code, text = run(["w", "build", "--n", "2"], tmp_path)
    assert code == 0
    data = json.loads(text)
    jsonschema.validate(data, POLY_SCHEMA)
    assert data["vars"] == ["x1", "x2", "rho"]


def test_chi_build_payload(tmp_path):
    code, text = run(["chi", "build", "--k", "0", "--n", "1", "--t", "0"], tmp_path)
    assert code == 0
    data = json.loads(text)
    jsonschema.validate(data["l"], POLY_SCHEMA)
    jsonschema.validate(data["w"], POLY_SCHEMA)
    assert data["l"]["terms"] == [{"coeff": "1/1", "exps": [0, 0]}]


def test_chi_eval_value(tmp_path):
    code, text = run(["chi", "eval", "--k", "0", "--n", "1", "--t", "0",
                      "--x", "0.5", "--rho", "0.5"], tmp_path)
    assert code == 0
    assert json.loads(text)["value"] == pytest.approx(4 / 3, abs=1e-12)


def test_chi_verify_pass_and_fail(tmp_path):
    code, text = run(["chi", "verify", "--k", "1", "--n", "1", "--t", "1,0",
                      "--trials", "10", "--seed", "3"], tmp_path)
    assert code == 0
    rec = json.loads(text)
    assert rec["pass"] and rec["max_abs_err"] < 1e-8
    # An absurd tolerance turns the same campaign into a failure (exit 1).
    code, text = run(["chi", "verify", "--k", "1", "--n", "1", "--t", "1,0",
                      "--trials", "10", "--seed", "3", "--tol", "1e-30"],
                     tmp_path, name="fail.json")
    assert code == 1
    assert json.loads(text)["pass"] is False


def test_kibble_eval_and_denominator(tmp_path):
    code, text = run(["kibble", "eval", "--kind", "U", "--x=-0.9,-0.95,0.94",
                      "--rho", "12=0.6,13=0.8,23=0.9", "--oracle-cutoff", "200"],
                     tmp_path)
    assert code == 0
    rec = json.loads(text)
    assert rec["closed"] == pytest.approx(-0.0912121, abs=1e-4)
    assert rec["oracle"] == pytest.approx(rec["closed"], abs=1e-6)
    code, text = run(["kibble", "denominator", "--n", "2", "--rho", "12=1/2"],
                     tmp_path, name="den.json")
    assert code == 0
    jsonschema.validate(json.loads(text), POLY_SCHEMA)


def test_q_check_and_probe(tmp_path):
    code, text = run(["q", "check", "--suite", "duality", "--q", "1/3",
                      "--nmax", "8"], tmp_path)
    assert code == 0
    assert all(json.loads(line)["pass"] for line in text.splitlines())
    code, text = run(["q", "probe", "--conjecture", "beta", "--nmax", "3",
                      "--q", "1/2,1/3,2/5"], tmp_path, name="probe.json")
    assert code == 0
    first = json.loads(text.splitlines()[0])
    assert first["verdict"] == "REPRESENTABLE"


def test_verify_all_passes_and_validates(tmp_path):
    code, text = run(["verify", "all", "--trials", "4", "--points", "6",
                      "--seed", "7", "--nodes", "128"], tmp_path)
    assert code == 0
    lines = text.splitlines()
    for line in lines:
        jsonschema.validate(json.loads(line), REPORT_SCHEMA)
    summaries = [json.loads(l) for l in lines if json.loads(l).get("summary")]
    assert len(summaries) == 9 and all(s["pass"] for s in summaries)


def test_verify_all_byte_identical(tmp_path):
    args = ["verify", "all", "--trials", "3", "--points", "5", "--seed", "7",
            "--nodes", "128"]
    _, a = run(args, tmp_path, name="a.json")
    _, b = run(args, tmp_path, name="b.json")
    assert a == b
    _, c = run(args + ["--jobs", "3"], tmp_path, name="c.json")
    assert a == c
    # A different seed changes the sampled cases.
    _, d = run(["verify", "all", "--trials", "3", "--points", "5", "--seed",
                "8", "--nodes", "128"], tmp_path, name="d.json")
    assert a != d


def test_config_file_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 3, "points": 5, "seed": 7, "nodes": 128}))
    _, a = run(["verify", "positivity", "--trials", "3", "--points", "5",
                "--seed", "7", "--nodes", "128"], tmp_path, name="a.json")
    _, b = run(["--config", str(cfg), "verify", "positivity"], tmp_path,
               name="b.json")
    assert a == b
    # Explicit flags win over the config file.
    _, c = run(["--config", str(cfg), "verify", "positivity", "--seed", "9"],
               tmp_path, name="c.json")
    assert c == a  # positivity cases are seed-independent grids


def test_usage_errors_exit_2(tmp_path):
    assert main(["w", "build", "--n", "9"]) == 2
    assert main(["w", "build"]) == 2
    assert main(["kibble", "eval", "--kind", "U", "--x", "0.5,0.5",
                 "--rho", "bogus"]) == 2


def test_stdout_without_json_flag(capsys):
    code = main(["chi", "eval", "--k", "1", "--n", "0", "--t", "0",
                 "--x", "0.5", "--rho", "0.25"])
    assert code == 0
    out = capsys.readouterr().out
    val = json.loads(out)["value"]
    want = (1 - 0.25 * 0.5) / (1 - 2 * 0.25 * 0.5 + 0.25 ** 2)
    assert val == pytest.approx(want, abs=1e-12)
