import json

import pytest

from wadgelab import automata as am
from wadgelab.catalog import E, pi_complete, sigma_complete
from wadgelab.cli import main
from wadgelab.realfun import constant


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path, chi_open, chi_closed):
    return {
        "s1": write(tmp_path, "s1.json", am.to_dict(sigma_complete(1))),
        "s2": write(tmp_path, "s2.json", am.to_dict(sigma_complete(2))),
        "p1": write(tmp_path, "p1.json", am.to_dict(pi_complete(1))),
        "const": write(tmp_path, "const.json", am.to_dict(constant(0).automaton)),
        "open": write(tmp_path, "open.json", am.to_dict(chi_open.automaton)),
        "closed": write(tmp_path, "closed.json", am.to_dict(chi_closed.automaton)),
    }


def test_cmp_verdicts(capsys, files):
    code, doc = run_json(capsys, "cmp", files["s1"], files["s1"])
    assert code == 0 and doc["verdict"] is True
    code, doc = run_json(capsys, "cmp", files["s1"], files["p1"])
    assert code == 1 and doc["verdict"] is False
    code, doc = run_json(capsys, "cmp", files["s1"], files["s2"], "--mode", "lipschitz")
    assert code == 0


def test_cmp_pair_and_m_accept_plain_sets(capsys, files):
    assert run(capsys, "cmp", files["s1"], files["s2"], "--mode", "pair")[0] == 0
    assert run(capsys, "cmp", files["s2"], files["s1"], "--mode", "m")[0] == 1


def test_cmp_real_functions(capsys, files):
    code, doc = run_json(capsys, "cmp", files["open"], files["closed"], "--mode", "mreal")
    assert code == 1 and "failing_pair" in doc
    code, doc = run_json(capsys, "cmp", files["const"], files["open"], "--mode", "mreal")
    assert code == 0 and doc["certificate"]


def test_cmp_writes_dot(capsys, files, tmp_path):
    dot = tmp_path / "arena.dot"
    run(capsys, "cmp", files["s1"], files["s2"], "--dot", str(dot))
    assert dot.read_text().startswith("digraph")


def test_rank_reports(capsys, files):
    code, doc = run_json(capsys, "rank", files["const"])
    assert code == 0
    assert (doc["alpha"], doc["type"], doc["m_rank"]) == (1, "O", 0)
    code, doc = run_json(capsys, "rank", files["open"])
    assert (doc["alpha"], doc["type"], doc["m_rank"], doc["sep_rank"]) == (2, "L", 2, 2)


def test_rank_single_pair_with_dot(capsys, files, tmp_path):
    dot = tmp_path / "stages.dot"
    code, doc = run_json(capsys, "rank", files["open"], "--pair", "1/3", "2/3", "--dot", str(dot))
    assert code == 0 and doc["rank"] == 2 and len(doc["stages"]) == 3
    assert "cluster_2" in dot.read_text()


def test_type_and_mrank(capsys, files):
    assert run_json(capsys, "type", files["closed"])[1]["type"] == "R"
    assert run_json(capsys, "mrank", files["closed"])[1]["m_rank"] == 2


def test_oscillating_function_is_rejected(capsys, tmp_path):
    bad = {
        "alphabet": 2,
        "states": 2,
        "initial": 0,
        "delta": [[1, 1], [0, 0]],
        "acceptance": {"kind": "weak-output", "outputs": ["0/1", "1/1"]},
    }
    path = write(tmp_path, "bad.json", bad)
    code, doc = run_json(capsys, "rank", path)
    assert code == 2 and doc["error"] == "StableViolation"
    v = doc["violation"]
    assert v["outputs"] == ["0/1", "1/1"] and v["lasso"]["cycle"]


def test_parse_errors_exit_2(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(capsys, "rank", str(broken))[0] == 2
    assert run(capsys, "cmp", str(tmp_path / "missing.json"), str(broken))[0] == 2
    assert run(capsys, "rank", str(broken), "--pair", "1/2", "1/3")[0] == 2


def test_certify_and_tampering(capsys, files, tmp_path):
    code, doc = run_json(capsys, "certify", files["s1"], files["s2"], "--samples", "200")
    assert code == 0 and doc["violations"] == 0
    _, cmp_doc = run_json(capsys, "cmp", files["s1"], files["s2"])
    cert = cmp_doc["certificate"]
    cert["output"] = [[m, a, None if b is None else 1 - b] for m, a, b in cert["output"]]
    path = write(tmp_path, "tampered.json", cert)
    code, doc = run_json(capsys, "certify", files["s1"], files["s2"], "--samples", "200", "--certificate", path)
    assert code == 1 and doc["violations"] > 0


def test_catalog_round_trip(capsys, tmp_path):
    out = tmp_path / "e3.json"
    assert run(capsys, "catalog", "--family", "E", "--level", "3", "-o", str(out))[0] == 0
    assert am.equivalent(am.load(str(out)), E(3))
    code, doc = run_json(capsys, "catalog", "--family", "sigma", "--level", "2")
    assert code == 0 and am.equivalent(am.from_dict(doc), sigma_complete(2))
    assert run(capsys, "catalog", "--family", "sigma", "--level", "99")[0] == 2


def test_separate(capsys, tmp_path):
    zeros = write(tmp_path, "z.json", am.to_dict(am.cylinder(2, [0, 0])))
    ones = write(tmp_path, "o.json", am.to_dict(am.cylinder(2, [1])))
    code, doc = run_json(capsys, "separate", zeros, ones)
    assert code == 0
    assert am.equivalent(am.from_dict(doc), am.cylinder(2, [0]))
    assert run(capsys, "separate", zeros, zeros)[0] == 2


def test_output_is_deterministic(capsys, files):
    first = run(capsys, "cmp", files["s1"], files["s2"])[1]
    assert run(capsys, "cmp", files["s1"], files["s2"])[1] == first


def test_seed_before_or_after_subcommand(capsys, files):
    a = run_json(capsys, "--seed", "7", "certify", files["s1"], files["s2"], "--samples", "20")[1]
    b = run_json(capsys, "certify", files["s1"], files["s2"], "--samples", "20", "--seed", "7")[1]
    assert a == b and a["seed"] == 7
