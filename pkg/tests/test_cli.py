import json

import pytest

from grschoen.batch import content_hash
from grschoen.cli import EXIT_FAIL, EXIT_OK, EXIT_PARSE, load_weight, main
from grschoen.examples import MANTIS, TREE


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_qsp_check(capsys):
    rc, out, _ = run(capsys, "qsp-check")
    report = json.loads(out)
    assert rc == EXIT_OK
    assert (report["dimension"], report["components"]) == (7, 2)


@pytest.mark.parametrize("name,label", [("w_sp", "G2"), ("mantis", "G5"), ("star_fins", "G6/H0")])
def test_classify(capsys, name, label):
    rc, out, _ = run(capsys, "classify", name)
    assert rc == EXIT_OK and out.strip() == label


def test_subdivide_writes_file(capsys, tmp_path):
    rc, out, _ = run(capsys, "subdivide", "tree", "--out", str(tmp_path))
    data = json.loads(out)
    assert rc == EXIT_OK
    assert len(data["cells"]) == 6 and len(data["adjacency"]) == 5
    assert all(c["witness_ok"] for c in data["cells"])
    assert json.loads((tmp_path / "subdivision.json").read_text()) == data


def test_tightspan(capsys):
    rc, out, _ = run(capsys, "tightspan", "mantis")
    data = json.loads(out)
    assert rc == EXIT_OK
    assert (len(data["vertices"]), len(data["edges"]), len(data["faces"])) == (14, 18, 5)
    assert len(data["leaves"]) == 3


def test_verify_and_audit(capsys, tmp_path):
    rc, out, err = run(capsys, "verify", "w_sp", "--out", str(tmp_path), "--strict")
    assert rc == EXIT_OK
    assert "G2 verified smooth=True components=2 dimension=15" in err
    cert = next(tmp_path.glob("*.json"))
    assert json.loads(cert.read_text()) == json.loads(out)
    rc, out, _ = run(capsys, "audit", str(cert), "--recompute")
    assert rc == EXIT_OK and "audit passed" in out


def test_audit_failure_exit_code(capsys, tmp_path):
    run(capsys, "verify", "tree", "--out", str(tmp_path))
    cert = next(tmp_path.glob("*.json"))
    data = json.loads(cert.read_text())
    data["dimension"] = 14
    cert.write_text(json.dumps(data))
    assert run(capsys, "audit", str(cert))[0] == EXIT_FAIL
    cert.write_text("not json")
    assert run(capsys, "audit", str(cert))[0] == EXIT_PARSE


def test_weight_inputs(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps(MANTIS.to_json()))
    assert load_weight(str(path)) == MANTIS
    assert load_weight(json.dumps(TREE.to_json())) == TREE
    assert load_weight("e126+e234+e237+2e238+e247+e248+e278+e347+e348+e378+2e478+e568") == TREE


def test_bad_weight_is_a_parse_error(capsys):
    rc, _, err = run(capsys, "classify", "e12x+zz")
    assert rc == EXIT_PARSE and "parse error" in err


def test_batch_command(capsys, tmp_path):
    cones = tmp_path / "cones.jsonl"
    cones.write_text(json.dumps({"id": "t", "rays": [TREE.to_json()]}) + "\n")
    rc, out, _ = run(capsys, "batch", str(cones), "--out", str(tmp_path / "o"), "--all-cones", "--jobs", "1")
    assert rc == EXIT_OK
    assert json.loads(out)["counts"] == {"G2": 1}
    cones.write_text("{broken\n")
    assert run(capsys, "batch", str(cones))[0] == EXIT_PARSE
    assert run(capsys, "batch", str(tmp_path / "missing.jsonl"))[0] == EXIT_PARSE


def test_jobs_default_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GRSCHOEN_JOBS", "1")
    cones = tmp_path / "cones.jsonl"
    cones.write_text("")
    rc, out, _ = run(capsys, "batch", str(cones))
    assert rc == EXIT_OK and json.loads(out)["processed"] == 0


def test_verify_output_is_named_by_content(capsys, tmp_path):
    run(capsys, "verify", "mantis", "--out", str(tmp_path))
    assert (tmp_path / f"{content_hash(MANTIS)}.json").exists()
