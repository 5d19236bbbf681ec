import io
import json
import os
import subprocess
import sys

import pytest

from chowforms.cli import main, parse_range
from chowforms.decomp import synth_instance
from chowforms.exactalg import PrimeField


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_parse_range():
    assert parse_range("2..4") == [2, 3, 4]
    assert parse_range("7") == [7]


def test_formulas_single_row():
    code, doc = run_json("formulas", "--n", "2..2", "--d", "5..5")
    assert code == 0
    assert doc["schema_version"] == 1 and doc["command"] == "formulas"
    (row,) = doc["results"]
    assert (row["d"], row["n"], row["s"], row["degree"]) == (5, 2, 3, "15")


def test_formulas_zero_dim_csv():
    code, text = run("formulas", "--n", "2..100", "--d", "1..34", "--zero-dim", "--csv")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "d,n,s,degree"
    assert lines[1:3] == ["5,2,3,15", "8,2,5,945"]
    assert "20,2,14,213458046676875" in lines
    assert "25,2,18,221643095476699771875" in lines
    assert len(lines) == 7


def test_formulas_degrees_are_strings():
    _, doc = run_json("formulas", "--n", "3..3", "--d", "34..34")
    assert isinstance(doc["results"][0]["degree"], str)
    assert len(doc["results"][0]["degree"]) == 76


def test_formulas_defective_matches_classification():
    _, doc = run_json("formulas", "--n", "2..4", "--d", "2..8", "--defective")
    got = {(r["n"], r["d"]) for r in doc["results"]}
    expected = {(n, d) for n in range(2, 5) for d in range(2, 9)
                if not (d in (2, 3) or (n == 2 and d in (4, 5, 6, 8)))}
    assert got == expected


def test_formulas_figure(tmp_path):
    path = tmp_path / "profiles.png"
    code, _ = run("formulas", "--n", "2..4", "--d", "1..12", "--figure", str(path))
    assert code == 0 and path.stat().st_size > 1000
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_empty_range_is_usage_error():
    assert run("formulas", "--n", "5..2")[0] == 2


def test_unknown_suite_is_usage_error():
    assert run("verify", "nonsense")[0] == 2


def test_argparse_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run("formulas", "--bogus")
    assert exc.value.code == 2


def test_verify_examples():
    code, doc = run_json("verify", "terracini", "--n", "2", "--d", "5", "--seed", "7")
    assert code == 0
    (r,) = doc["results"]
    assert r["computed"] == {"smin": "3"} and r["expected"] == {"smin": "3"} and r["pass"]
    code, doc = run_json("verify", "chow-degree", "--n", "2", "--s", "3")
    assert code == 0 and doc["results"][0]["computed"]["degree"] == "15"


def test_verify_all_small_grid():
    code, text = run("verify", "all", "--grid", "small", "--text")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)


def test_verify_reports_seed_and_field():
    _, doc = run_json("verify", "chow-tangent", "--n", "2", "--s", "3", "--seeds", "3")
    assert [r["seed"] for r in doc["results"]] == [0, 1, 2]
    assert doc["config"]["field"]["modulus"] == "2147483647"


def test_output_is_deterministic():
    argv = ["verify", "roundtrip", "--n", "2", "--d", "5", "--seed", "4"]
    assert run(*argv) == run(*argv)
    argv = ["decompose", "--synth", "2,5,3", "--seed", "1", "--json"]
    assert run(*argv) == run(*argv)


def test_decompose_synth():
    code, doc = run_json("decompose", "--synth", "2,5,3", "--seed", "1", "--json")
    assert code == 0
    (r,) = doc["results"]
    assert len(r["summands"]) == 3 and r["residual_zero"] and all(r["annihilated"])
    code, text = run("decompose", "--synth", "2,5,3", "--seed", "1")
    assert "residual zero: True" in text


def test_decompose_binary():
    code, doc = run_json("decompose", "--binary", "--synth-d", "7", "--seed", "2", "--json")
    assert code == 0
    (r,) = doc["results"]
    assert r["summands"] == 4 and r["residual_zero"] and r["recovered_planted_points"]


def test_decompose_and_count_from_file(tmp_path):
    inst = synth_instance(2, 5, 3, seed=5, field=PrimeField(11))
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(inst.to_json()))
    code, doc = run_json("decompose", "--file", str(path), "--json")
    assert code == 0 and doc["results"][0]["residual_zero"]
    code, doc = run_json("count", "--file", str(path), "--p", "11")
    assert code == 0 and doc["results"][0]["count"] >= 1


def test_decompose_inconsistent_file(tmp_path):
    inst = synth_instance(2, 5, 3, seed=5)
    other = synth_instance(2, 5, 3, seed=6)
    data = inst.to_json()
    data["hyperplanes"] = other.to_json()["hyperplanes"]
    del data["summands"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    assert run("decompose", "--file", str(path))[0] == 1


def test_count_examples():
    code, doc = run_json("count", "--n", "2", "--d", "5", "--s", "3", "--p", "11", "--seed", "3")
    assert code == 0
    r = doc["results"][0]
    assert r["count"] <= 15 and r["degree_bound"] == "15"
    _, doc = run_json("count", "--n", "2", "--d", "5", "--s", "2", "--p", "11")
    assert doc["results"][0]["count"] == 0


def test_count_guard_exit_code():
    assert run("count", "--n", "2", "--d", "5", "--s", "3")[0] == 3


def test_env_prime_override_and_entry_point():
    env = dict(os.environ, CHOWFORMS_FIELD_PRIME="1000003")
    proc = subprocess.run([sys.executable, "-m", "chowforms", "verify", "chow-tangent",
                           "--n", "2", "--s", "2"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["config"]["field"]["modulus"] == "1000003"
