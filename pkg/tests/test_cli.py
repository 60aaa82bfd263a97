"""End-to-end command-line tests: output formats, schema conformance,
exit codes, and byte determinism."""

import csv
import io
import json

import pytest

from chainrep.cli import load_default_suite, main, parse_group_spec

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def schema():
    from importlib import resources

    with resources.files("chainrep.data").joinpath("output_schema.json").open() as fh:
        return json.load(fh)


def check_schema(schema, payload):
    if jsonschema is not None:
        jsonschema.validate(payload, schema)


# -- ring -------------------------------------------------------------


def test_ring_human(capsys):
    code, out, _ = run_cli(capsys, "ring", "--p", "2", "--e", "inf", "--n", "2")
    assert code == 0
    assert "size: 4" in out
    assert "xi: 2" in out
    assert "d_invariant: 2" in out


def test_ring_json_schema(capsys, schema):
    code, out, _ = run_cli(
        capsys, "ring", "--p", "2", "--f", "2", "--e", "1", "--n", "2", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    check_schema(schema, payload)
    assert payload["command"] == "ring"
    assert payload["result"]["size"] == 16
    assert payload["result"]["unit_count"] == 12
    assert payload["result"]["d_invariant"] == 2


def test_ring_csv(capsys):
    code, out, _ = run_cli(capsys, "ring", "--p", "3", "--n", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2
    head = dict(zip(rows[0], rows[1]))
    assert head["size"] == "9"
    assert head["unit_count"] == "6"


# -- irreps -----------------------------------------------------------


def test_irreps_json(capsys, schema):
    code, out, _ = run_cli(
        capsys, "irreps", "list", "--p", "2", "--e", "1", "--n", "2", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    check_schema(schema, payload)
    res = payload["result"]
    assert res["order"] == 64
    assert res["irrep_count"] == 22
    assert res["dim_sq_total"] == 64
    assert sum(r["multiplicity"] for r in res["catalog"]) == 22


def test_irreps_csv(capsys):
    code, out, _ = run_cli(
        capsys, "irreps", "list", "--p", "3", "--e", "1", "--n", "1", "--format", "csv"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["orbit_rep", "level", "dim", "multiplicity"]
    # F_3: 9 linear + 2 of dim 3
    assert sum(int(r[3]) for r in rows[1:]) == 11


def test_irreps_human(capsys):
    code, out, _ = run_cli(capsys, "irreps", "list", "--p", "2", "--k", "2")
    assert code == 0
    assert "sum dim^2 = 32" in out


# -- minfaith ---------------------------------------------------------


def test_minfaith_formula_human(capsys):
    code, out, _ = run_cli(
        capsys, "minfaith", "heisenberg", "--p", "2", "--f", "1", "--e", "inf", "--n", "2", "--k", "1"
    )
    assert code == 0
    assert out.splitlines()[0] == "6"


def test_minfaith_all_modes(capsys, schema):
    code, out, _ = run_cli(
        capsys,
        "minfaith",
        "heisenberg",
        "--p",
        "2",
        "--e",
        "inf",
        "--n",
        "2",
        "--mode",
        "all",
        "--format",
        "json",
    )
    assert code == 0
    payload = json.loads(out)
    check_schema(schema, payload)
    res = payload["result"]
    assert res["agree"] is True and res["m"] == 6
    assert res["values"]["formula"] == res["values"]["construct"] == res["values"]["oracle"] == 6
    assert res["solution"]["verified_faithful"] is True


def test_minfaith_affine(capsys):
    code, out, _ = run_cli(
        capsys, "minfaith", "affine", "--p", "3", "--n", "2", "--mode", "all"
    )
    assert code == 0
    assert out.splitlines()[0] == "6"
    assert "construction faithful: True" in out


def test_minfaith_unitriangular(capsys):
    code, out, _ = run_cli(
        capsys, "minfaith", "unitriangular", "--p", "3", "--size", "4", "--mode", "all"
    )
    assert code == 0
    assert out.splitlines()[0] == "9"


def test_minfaith_two_step_table(capsys, tmp_path, group, schema):
    path = tmp_path / "d4.json"
    path.write_text(json.dumps(group("d4").to_json()))
    code, out, _ = run_cli(
        capsys, "minfaith", "two-step", "--table", str(path), "--mode", "all", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    check_schema(schema, payload)
    assert payload["result"]["m"] == 2
    assert payload["result"]["agree"] is True


def test_minfaith_csv(capsys):
    code, out, _ = run_cli(
        capsys, "minfaith", "heisenberg", "--p", "3", "--e", "1", "--n", "2", "--format", "csv"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["family", "formula"]
    assert rows[1] == ["heisenberg", "9"]


# -- oracle -----------------------------------------------------------


def test_oracle_table_csv(capsys):
    code, out, _ = run_cli(
        capsys, "oracle", "table", "--group", "gl2:p=3", "--format", "csv"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 9  # header + 8 characters
    assert sorted(int(r[0]) for r in rows[1:]) == [1, 1, 2, 2, 2, 3, 3, 4]


def test_oracle_table_json(capsys, schema):
    code, out, _ = run_cli(
        capsys, "oracle", "table", "--group", "quaternion:", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    check_schema(schema, payload)
    res = payload["result"]
    assert res["order"] == 8
    assert sorted(res["dims"]) == [1, 1, 1, 1, 2]
    assert len(res["rows"]) == 5
    assert len(res["classes"]) == 5


def test_oracle_minfaith(capsys, schema):
    code, out, _ = run_cli(
        capsys,
        "oracle",
        "minfaith",
        "--group",
        "semidirect:modulus=8,multipliers=7,h_order=4",
        "--format",
        "json",
    )
    assert code == 0
    payload = json.loads(out)
    check_schema(schema, payload)
    assert payload["result"]["m"] == 3


def test_oracle_minfaith_human(capsys):
    code, out, _ = run_cli(capsys, "oracle", "minfaith", "--group", "heis:p=2,e=1,n=2")
    assert code == 0
    assert out.splitlines()[0] == "4"


def test_group_spec_parsing():
    G, desc = parse_group_spec("semidirect:modulus=4,multipliers=3")
    assert G.order == 8
    G, _ = parse_group_spec("aff:p=2,f=2")
    assert G.order == 12
    G, _ = parse_group_spec("unitri:p=3,size=3")
    assert G.order == 27


def test_group_spec_errors():
    from chainrep.cli import SpecParseError

    for bad in [
        "nocolon",
        "unknown:p=2",
        "heis:p=notanint",
        "semidirect:modulus=8",
        "heis:junk",
    ]:
        with pytest.raises(SpecParseError):
            parse_group_spec(bad)


# -- verify -----------------------------------------------------------


def _tiny_suite(tmp_path, expected):
    suite = {
        "name": "tiny",
        "instances": [
            {
                "name": "hei3-f2",
                "family": "heisenberg",
                "p": 2,
                "f": 1,
                "e": 1,
                "n": 1,
                "k": 1,
                "expected": expected,
                "oracle": True,
            }
        ],
    }
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(suite))
    return path


def test_verify_custom_suite_ok(capsys, tmp_path, schema):
    path = _tiny_suite(tmp_path, expected=2)
    code, out, _ = run_cli(capsys, "verify", "--suite", str(path), "--format", "json")
    assert code == 0
    payload = json.loads(out)
    check_schema(schema, payload)
    assert payload["result"]["ok"] is True


def test_verify_custom_suite_mismatch(capsys, tmp_path):
    path = _tiny_suite(tmp_path, expected=5)
    code, out, _ = run_cli(capsys, "verify", "--suite", str(path))
    assert code == 1
    assert "MISMATCH" in out


def test_verify_csv(capsys, tmp_path):
    path = _tiny_suite(tmp_path, expected=2)
    code, out, _ = run_cli(capsys, "verify", "--suite", str(path), "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["name", "match", "expected", "values"]
    assert rows[1][0] == "hei3-f2" and rows[1][1] == "True"


def test_default_suite_loads():
    suite = load_default_suite()
    assert suite["name"] == "default"
    assert len(suite["instances"]) == 23
    names = [i["name"] for i in suite["instances"]]
    assert len(names) == len(set(names))


# -- exit codes and determinism --------------------------------------


def test_exit_code_parse_errors(capsys):
    code, _, err = run_cli(capsys, "ring", "--p", "2", "--e", "bogus")
    assert code == 2 and "parse error" in err
    code, _, err = run_cli(capsys, "oracle", "table", "--group", "wat:x=1")
    assert code == 2
    code, _, err = run_cli(capsys, "minfaith", "two-step", "--table", "/nonexistent.json")
    assert code == 2


def test_exit_code_argparse(capsys):
    assert run_cli(capsys, "no-such-command")[0] == 2
    assert run_cli(capsys, "minfaith", "unitriangular", "--p", "3")[0] == 2  # size missing


def test_exit_code_compute_error(capsys, monkeypatch):
    monkeypatch.setenv("CHAINREP_ORACLE_CAP", "10")
    # group constructed directly (no cap at parse time), oracle then refuses
    code, _, err = run_cli(
        capsys, "oracle", "table", "--group", "semidirect:modulus=8,multipliers=3"
    )
    assert code == 1
    assert "CapExceededError" in err
    # cap reached during spec parsing is reported as a parse error instead
    code, _, _ = run_cli(capsys, "oracle", "minfaith", "--group", "heis:p=2,e=1,n=2")
    assert code == 2


def test_json_byte_determinism(capsys):
    argv = ["minfaith", "heisenberg", "--p", "2", "--e", "inf", "--n", "2", "--mode", "all", "--format", "json"]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2
    argv = ["oracle", "table", "--group", "gl2:p=3", "--format", "json"]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2
