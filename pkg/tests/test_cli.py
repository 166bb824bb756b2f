import json
from pathlib import Path

import pytest

from lambdap.main import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ===================================================
# Dumps
# ===================================================

def test_dump_structure_json(capsys):
    code, out, _ = invoke(capsys, "dump-structure", "--dim", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["dim"] == 1
    assert [entry["in"] for entry in payload["product"]["entries"]] == [[[], []], [[], [1]], [[1], []], [[1], [1]]]


def test_dump_rmatrix_text(capsys):
    code, out, _ = invoke(capsys, "dump-rmatrix", "--dim", "1", "--format", "text")
    assert code == 0
    assert "f_{0,1} -> (1 - t)*f_{0,1} + t*f_{1,0}" in out.splitlines()


def test_dump_rmatrix_channels(capsys):
    code, out, _ = invoke(capsys, "dump-rmatrix", "--dim", "2", "--channels")
    assert code == 0
    payload = json.loads(out)
    assert payload["channels"]["exponent_matrix"][2][1] == 1


def test_dump_braiding_channels(capsys):
    code, out, _ = invoke(capsys, "dump-braiding", "--dim", "1", "--channels")
    assert code == 0
    assert set(json.loads(out)["channels"]) == {"0", "1"}


def test_dump_braiding_channels_text(capsys):
    code, out, _ = invoke(capsys, "dump-braiding", "--dim", "1", "--channels", "--format", "text")
    assert code == 0
    blocks = out.strip().split("\n\n")
    assert [block.splitlines()[0] for block in blocks] == ["# tau_0", "# tau_1"]
    assert all(len(block.splitlines()) == 5 for block in blocks)
    assert "f_{0,0} -> 0" in blocks[1].splitlines()


@pytest.mark.parametrize("dim", ["0", "5"])
def test_dump_dimension_bounds(capsys, dim):
    code, out, err = invoke(capsys, "dump-structure", "--dim", dim)
    assert code == 2
    assert out == ""
    assert "--dim" in err


# ===================================================
# Verify
# ===================================================

def test_verify_json_without_timings(capsys):
    code, out, _ = invoke(capsys, "verify", "--dim", "1", "--suite", "hopf", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "pass"
    assert payload["wall_time"] is None
    assert all(child["wall_time"] is None for child in payload["checks"])


def test_verify_text_summary(capsys):
    code, out, _ = invoke(capsys, "verify", "--dim", "2", "--suite", "hecke", "--timings")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "overall: pass"
    assert "hecke_relation: pass" in lines


def test_verify_lemma_ranges(capsys):
    ranges = json.dumps({"qbinom_n": 3, "bubble_dim": 1, "rl_max": 1, "rl_dim": 1, "theta_dim": 3, "ring_n": 4})
    code, _, _ = invoke(capsys, "verify", "--dim", "1", "--suite", "lemmas", "--ranges", ranges)
    assert code == 0


@pytest.mark.parametrize("ranges", ['{"bogus": 1}', '{"qbinom_n": -1}', "not json"])
def test_verify_rejects_malformed_ranges(capsys, ranges):
    code, _, err = invoke(capsys, "verify", "--dim", "1", "--suite", "lemmas", "--ranges", ranges)
    assert code == 2
    assert "invalid input" in err


def test_verify_suite_limit(capsys):
    code, _, _ = invoke(capsys, "verify", "--dim", "3", "--suite", "naturality")
    assert code == 2


def test_verify_hecke_allows_larger_dimension(capsys):
    code, _, _ = invoke(capsys, "verify", "--dim", "5", "--suite", "hecke")
    assert code == 0


# ===================================================
# Invariant
# ===================================================

def test_invariant_trefoil(capsys):
    code, out, _ = invoke(capsys, "invariant", "--dim", "1", "--braid", "1,1,1", "--strands", "2")
    assert code == 0
    assert out.strip() == "t - 1 + t^-1"


def test_invariant_figure_eight_json(capsys):
    code, out, _ = invoke(
        capsys, "invariant", "--dim", "1", "--braid", "1,-2,1,-2", "--strands", "3", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["normalized_text"] == "-t + 3 - t^-1"
    assert payload["p_independent"] is True
    assert payload["writhe"] == 0


def test_invariant_raw(capsys):
    code, out, _ = invoke(capsys, "invariant", "--dim", "1", "--braid", "1", "--strands", "2", "--raw")
    assert code == 0
    assert out.strip() == "1"


def test_invariant_enhancement(capsys):
    code, out, _ = invoke(capsys, "invariant", "--dim", "1", "--strands", "1", "--enhancement")
    assert code == 0
    assert out.splitlines() == ["mu: 1, -1", "lambda+: t", "lambda-: 1"]


def test_invariant_normalized_needs_dimension_one(capsys):
    code, _, _ = invoke(capsys, "invariant", "--dim", "2", "--braid", "1", "--strands", "2", "--normalized")
    assert code == 2


def test_invariant_link_rejected(capsys):
    code, _, err = invoke(capsys, "invariant", "--dim", "1", "--braid", "1,1", "--strands", "2")
    assert code == 1
    assert "components" in err


def test_invariant_malformed_braid(capsys):
    code, _, _ = invoke(capsys, "invariant", "--dim", "1", "--braid", "1,x", "--strands", "2")
    assert code == 2


def test_invariant_budget(capsys, monkeypatch):
    monkeypatch.setenv("LAMBDAP_BUDGET", "4")
    code, _, err = invoke(capsys, "invariant", "--dim", "1", "--braid", "1,2", "--strands", "3")
    assert code == 3
    assert "budget" in err


# ===================================================
# Usage
# ===================================================

def test_unknown_command(capsys):
    code, _, _ = invoke(capsys, "frobnicate")
    assert code == 2


def test_unknown_log_level(capsys):
    code, _, err = invoke(capsys, "--log-level", "chatty", "schema", "report")
    assert code == 2
    assert "log level" in err


def test_bad_worker_count(capsys, monkeypatch):
    monkeypatch.setenv("LAMBDAP_WORKERS", "0")
    code, _, err = invoke(capsys, "verify", "--dim", "1", "--suite", "hecke")
    assert code == 2
    assert "LAMBDAP_WORKERS" in err


def test_schema(capsys):
    code, out, _ = invoke(capsys, "schema", "invariant")
    assert code == 0
    assert "properties" in json.loads(out)


def _resolve(schema):
    if "$ref" in schema:
        return schema["$defs"][schema["$ref"].rsplit("/", 1)[-1]]
    return schema


@pytest.mark.parametrize("name", ["operator", "report", "channels", "invariant"])
def test_shipped_schema_matches_live(capsys, name):
    shipped = json.loads((Path(__file__).parent.parent / "schemas" / f"{name}.schema.json").read_text())
    code, out, _ = invoke(capsys, "schema", name)
    assert code == 0
    shipped, live = _resolve(shipped), _resolve(json.loads(out))
    assert set(shipped["properties"]) == set(live["properties"])
    assert set(shipped["required"]) == set(live["required"])
