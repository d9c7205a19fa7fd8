import io
import json
import shutil
import subprocess
from importlib import resources

import jsonschema
import pytest

from dihom import cli, fixtures
from dihom.cubical_sets import write_model

SCHEMA = json.loads(resources.files("dihom").joinpath("schemas/dihom-1.schema.json").read_text())


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    doc = json.loads(out or err)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


@pytest.fixture
def swiss(tmp_path):
    p = tmp_path / "swissflag.json"
    write_model(fixtures.swissflag(), p)
    return str(p)


def test_in_command():
    code, out, _ = run("in", "--n", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "count\t11" and len(lines) == 12
    assert all(len(l.split("\t")) == 3 for l in lines[1:])
    code, doc = run_json("in", "--n", "3")
    assert code == 0 and doc["count"] == 57


def test_validate(swiss):
    assert run("validate", swiss)[:2] == (0, "valid\n")
    code, doc = run_json("validate", "builtin:trou")
    assert code == 0 and doc["valid"]


def test_invalid_model(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"type": "polygraph2", "vertices": ["a", "b"], "gen1": [{"id": "u", "src": "a", "tgt": "c"}],
                             "gen2": []}))
    code, out, _ = run("validate", str(p))
    assert code == 1 and out.startswith("problem\t")


def test_paths_and_cells():
    code, out, _ = run("paths", "builtin:trou", "--from", "v(0,0)", "--to", "v(3,3)")
    assert code == 0 and out.splitlines()[0] == "count\t20"
    code, doc = run_json("cells", "builtin:g2")
    assert code == 0 and doc["count"] == 2 and doc["exhaustive"]


def test_homology_and_hurewicz(swiss):
    code, out, _ = run("homology", "builtin:g1", "--theory", "gl", "--degree", "1")
    assert code == 0 and out.splitlines()[0] == "homology\tH1gl\tZ"
    assert out.splitlines()[1].startswith("witness\tH1gl\t")
    code, doc = run_json("homology", swiss, "--theory", "neg", "--degree", "0")
    assert doc["homology"]["group"] == "Z^2"
    code, doc = run_json("hurewicz", swiss, "--bilocalize", "--theory", "neg", "--degree", "1")
    assert code == 0 and doc["cokernel"]["group"] == "Z"


def test_deadlocks_with_figure(swiss, tmp_path):
    png, dot = tmp_path / "fig.png", tmp_path / "fig.dot"
    code, out, _ = run("deadlocks", swiss, "--figure", str(png), "--dot", str(dot))
    assert code == 0
    rows = dict(l.split("\t", 1) for l in out.splitlines() if l.split("\t")[0] in ("deadlock", "unreachable"))
    assert rows == {"deadlock": "v(2,2)", "unreachable": "v(3,3)"}
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    text = dot.read_text()
    assert text.startswith("digraph") and '"v(2,2)" [' in text and "fillcolor=red" in text
    code, doc = run_json("deadlocks", swiss)
    assert doc["cokernels"]["coker h1+"]["group"] == "Z"


def test_cubes():
    code, out, _ = run("cubes", "builtin:square", "--degree", "1")
    assert code == 0 and out.splitlines()[0] == "count\t6"
    code, doc = run_json("cubes", "builtin:square", "--degree", "2", "--corner", "pos")
    assert code == 0 and doc["count"] == len(doc["cubes"])


@pytest.mark.parametrize("argv", [
    ["homology", "builtin:square", "--degree", "5"],
    ["cubes", "builtin:square", "--degree", "4"],
    ["frobnicate"],
    [],
    ["validate", "/nonexistent/model.json"],
    ["homology", "builtin:nosuch"],
    ["in"],
    ["cells", "builtin:square", "--caps", "x"],
    ["hurewicz", "builtin:square", "--theory", "gl"],
])
def test_input_errors_exit_1(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and err.startswith("error\t")


def test_cap_exit_2():
    code, out, err = run("cells", "builtin:trou", "--caps", "10,64")
    assert code == 2 and "exhaustive\tfalse" in out
    code, out, err = run("cubes", "builtin:square", "--degree", "3", "--caps", "50,64")
    assert code == 2 and err.startswith("error\tCapExceeded") and "partial\t" in err


def test_json_error_document():
    code, doc = run_json("in", "--n", "9")
    assert code == 2 and doc["kind"] == "error" and doc["exit_code"] == 2
    code, doc = run_json("homology", "builtin:nosuch")
    assert code == 1 and doc["error"] == "InputError"


def test_deterministic(swiss):
    a = run("deadlocks", swiss, "--json")
    b = run("deadlocks", swiss, "--json")
    assert a == b
    assert run("cells", "builtin:coin2") == run("cells", "builtin:coin2")


@pytest.mark.skipif(shutil.which("dihom") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["dihom", "in", "--n", "1"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("count\t3")
    p = subprocess.run(["dihom", "bogus"], capture_output=True, text=True)
    assert p.returncode == 1
