import json

import pytest

from eica.builtins import NAMES, builtin_category
from eica.category import validate_category
from eica.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


M_FILE = {"field": {"kind": "Fp", "p": 2}, "spaces": {"X": 2, "Y": 0}, "action": {"g": [[0, 1], [1, 0]]}}
SX_FILE = {"field": {"kind": "Fp", "p": 2}, "spaces": {"X": 1, "Y": 0}, "action": {"g": [[1]]}}
PY_FILE = {"field": {"kind": "Fp", "p": 2}, "spaces": {"X": 0, "Y": 1}}


def test_builtin_list(capsys):
    code, out = run(capsys, "builtin", "--list")
    assert code == 0
    assert all(name in out for name in NAMES)


@pytest.mark.parametrize("name", NAMES)
def test_emit_then_validate_round_trip(capsys, tmp_path, name):
    code, out = run(capsys, "builtin", "--emit", name)
    assert code == 0
    assert validate_category(json.loads(out)) == builtin_category(name)
    path = write(tmp_path, f"{name}.json", json.loads(out))
    code, out = run(capsys, "validate", path)
    assert code == 0


def test_json_output_is_stable(capsys):
    outs = [run(capsys, "info", "builtin:example3", "--field", "F2", "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "probe", "builtin:example3", "--field", "F2", "--samples", "20",
                "--seed", "3", "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_info(capsys):
    code, out = run(capsys, "info", "builtin:example3", "--json")
    data = json.loads(out)
    assert code == 0 and data["chain_length"] == 1
    assert data["aut_orders"] == {"X": 2, "Y": 1}
    assert json.loads(run(capsys, "info", "builtin:c2", "--json")[1])["chain_length"] == 0
    assert json.loads(run(capsys, "info", "builtin:chain3", "--json")[1])["chain_length"] == 2


def test_pd_text(capsys, tmp_path):
    assert run(capsys, "pd", "builtin:example3", write(tmp_path, "m.json", M_FILE),
               "--field", "F2")[1].splitlines()[0] == "pd = 1"
    code, out = run(capsys, "pd", "builtin:example3", write(tmp_path, "sx.json", SX_FILE), "--field", "F2")
    assert code == 0 and out.splitlines()[0] == "pd = ∞ (no projective syzygy up to ℓ = 1)"
    assert run(capsys, "pd", "builtin:example3", write(tmp_path, "py.json", PY_FILE),
               "--field", "F2")[1].splitlines()[0] == "pd = 0"


def test_gldim_and_algebra(capsys):
    code, out = run(capsys, "gldim", "builtin:example3", "--field", "F2", "--json")
    assert code == 0 and json.loads(out)["gldim"] == "inf"
    code, out = run(capsys, "gldim", "builtin:square", "--field", "Q", "--json")
    assert json.loads(out)["gldim"] == 2
    code, out = run(capsys, "algebra", "builtin:example3", "--field", "F2", "--json")
    data = json.loads(out)
    assert code == 0 and data["dimension"] == 4 and data["radical_dimension"] == 2


def test_probe_verb(capsys):
    code, out = run(capsys, "probe", "builtin:example3", "--field", "F2", "--samples", "200",
                    "--seed", "7", "--json")
    data = json.loads(out)
    assert code == 0 and data["max_finite_pd"] == 1 and data["violations"] == []
    data = json.loads(run(capsys, "probe", "builtin:c2", "--field", "F2", "--samples", "100",
                          "--seed", "1", "--json")[1])
    assert data["max_finite_pd"] == 0
    data = json.loads(run(capsys, "probe", "builtin:a2-path", "--field", "Q", "--samples", "100",
                          "--seed", "1", "--json")[1])
    assert data["max_finite_pd"] == 1


def test_resolve_verb(capsys, tmp_path):
    code, out = run(capsys, "resolve", "builtin:example3", write(tmp_path, "m.json", M_FILE),
                    "--field", "F2", "--json")
    data = json.loads(out)
    assert code == 0
    assert [s["cover_summands"] for s in data["steps"]] == [["X"], ["Y"]]


def test_error_exit_codes(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"objects": ["x"],
                                       "morphisms": [{"id": "1", "dom": "x", "cod": "x"},
                                                     {"id": "e", "dom": "x", "cod": "x"}],
                                       "identities": {"x": "1"}, "composition": [["e", "e", "e"]]})
    assert main(["validate", bad]) == 1
    assert "NotEI" in capsys.readouterr().err
    code, _ = run(capsys, "info", str(tmp_path / "missing.json"))
    assert code == 1
    notfunctorial = dict(M_FILE, action={"g": [[1, 1], [0, 0]]})
    code, _ = run(capsys, "pd", "builtin:example3", write(tmp_path, "nf.json", notfunctorial), "--field", "F2")
    assert code == 1
    code, _ = run(capsys, "pd", "builtin:example3", write(tmp_path, "m.json", M_FILE), "--field", "Q")
    assert code == 1
    code, _ = run(capsys, "info", "builtin:nonesuch")
    assert code == 1
