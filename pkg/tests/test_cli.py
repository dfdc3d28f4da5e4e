import json

import pytest

from gdd4.cli import main
from gdd4.design import load
from gdd4.grouptype import parse_type

FIX = "src/gdd4/data/fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_feasible(capsys):
    code, out, _ = run(capsys, "feasible", "2^2 5^5")
    assert code == 0 and "feasible" in out
    code, out, _ = run(capsys, "feasible", "5^3 2^1", "--json")
    assert code == 1 and json.loads(out)["verdict"] == "infeasible"


def test_usage_errors(capsys):
    assert run(capsys, "feasible", "2^x")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "no/such/file")[0] == 2


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "30", "--json")
    assert code == 0 and json.loads(out)["count"] == 54


def test_develop_and_verify(capsys, tmp_path):
    out_file = tmp_path / "d.gdd"
    code, _, _ = run(capsys, "develop", f"{FIX}/2858.bbs", "-o", str(out_file))
    assert code == 0 and load(out_file).group_type == parse_type("2^8 5^8")
    code, out, _ = run(capsys, "verify", str(out_file), "2255")
    assert code == 0 and out.count("pass") >= 2
    text = out_file.read_text().splitlines()
    i = text.index("blocks:")
    del text[i + 1]
    out_file.write_text("\n".join(text) + "\n")
    code, out, _ = run(capsys, "verify", str(out_file), "--json")
    assert code == 1 and json.loads(out)["results"][0]["verdict"] == "fail"


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--all-fixtures", "--json")
    assert code == 0 and len(json.loads(out)["results"]) == 14


def test_search(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "5^4", "--seed", "1", "--json")
    assert code == 0 and json.loads(out)["status"] == "found"
    code, out, _ = run(capsys, "search", "2^4", "--exhaustive")
    assert code == 1 and "exhausted" in out
    code, out, _ = run(capsys, "search", "2^4", "--prove-nonexistence", "--json")
    assert code == 0 and json.loads(out)["status"] == "certified"
    code, _, _ = run(capsys, "search", "2^10", "--layout", "src/gdd4/data/layouts/210.bbs",
                     "-o", str(tmp_path / "x.gdd"))
    assert code == 0 and load(tmp_path / "x.gdd").group_type == parse_type("2^10")


def test_decide(capsys):
    code, out, _ = run(capsys, "decide", "17", "8")
    assert code == 0 and "58141201" in out
    code, out, _ = run(capsys, "decide", "4", "0", "--json")
    assert code == 1 and json.loads(out)["verdict"] == "definite-nonexistence"
    code, out, _ = run(capsys, "decide", "2", "17")
    assert code == 1 and "possible-exception" in out


def test_construct(capsys, tmp_path, catalog_dir):
    target = tmp_path / "c.gdd"
    code, _, _ = run(capsys, "construct", "2^17 5^8", "-o", str(target))
    assert code == 0 and load(target).v == 74
    code, out, _ = run(capsys, "construct", "2^39 5^4", "--no-search", "--json")
    assert code == 0 and "24^4" in json.loads(out)["missing"]
    code, _, _ = run(capsys, "construct", "2^39 5^4", "--no-search", "--require-concrete")
    assert code == 1


def test_catalog(capsys, catalog_dir):
    code, out, _ = run(capsys, "catalog", "add", "2255")
    assert code == 0 and "5^5 2^2" in out
    code, out, _ = run(capsys, "catalog", "list", "--json")
    entries = json.loads(out)["entries"]
    assert len(entries) == 1
    code, out, _ = run(capsys, "catalog", "show", entries[0]["digest"][:10])
    assert code == 0 and out.startswith("type: 5^5 2^2")
    code, out, _ = run(capsys, "catalog", "show", "2^2 5^5")
    assert code == 0
    assert run(capsys, "catalog", "show", "2^7")[0] == 1
    assert run(capsys, "catalog", "add")[0] == 2


def test_regression_verb(capsys):
    code, out, _ = run(capsys, "regression", "--json")
    assert code == 0 and json.loads(out)["passed"]
