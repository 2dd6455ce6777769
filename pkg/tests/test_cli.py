import json

import pytest

from hermitian_ramsey.cli import main
from hermitian_ramsey.graphs import read_graph, write_graph


def _witness(tmp_path, *extra):
    out = tmp_path / "w"
    code = main(["witness", "--q", "3", "--seed", "42", "--p", "0.5", "--out", str(out), *extra])
    return code, out


def test_build_q3(tmp_path, capsys):
    assert main(["build", "--q", "3", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert {k: report["counts"][k] for k in ("points", "secants", "n", "d")} == \
        {"points": 28, "secants": 63, "n": 63, "d": 32}
    assert report["base"]["passed"] and report["design"]["passed"]
    assert (tmp_path / "unital.txt").read_text().startswith("U 3 28 63\n")
    assert read_graph(tmp_path / "graph.edges").edge_count == 1008
    assert "base=PASS" in capsys.readouterr().out


def test_build_skip_edges_and_srg(tmp_path):
    assert main(["build", "--q", "2", "--out", str(tmp_path), "--skip-edges", "--srg"]) == 0
    assert not (tmp_path / "graph.edges").exists()
    assert json.loads((tmp_path / "report.json").read_text())["srg"]["passed"]


def test_witness_and_verify(tmp_path, capsys):
    code, out = _witness(tmp_path)
    assert code == 0
    cert = json.loads((out / "certificate.json").read_text())
    assert cert["status"] == "PASS"
    assert cert["alpha_bound"]["t"] == cert["alpha_bound"]["value"] + 1
    assert cert["seeds"]["randomize"] == 42
    capsys.readouterr()
    assert main(["verify", str(out / "certificate.json"), str(out / "witness.edges")]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_verify_detects_removed_edge(tmp_path, capsys):
    _, out = _witness(tmp_path)
    g = read_graph(out / "witness.edges")
    g.remove_edge(*next(g.edges()))
    write_graph(tmp_path / "bad.edges", g)
    capsys.readouterr()
    assert main(["verify", str(out / "certificate.json"), str(tmp_path / "bad.edges")]) == 1
    assert "edge digest mismatch" in capsys.readouterr().out


def test_verify_unreadable_certificate(tmp_path):
    (tmp_path / "c.json").write_text("{not json")
    (tmp_path / "g.edges").write_text("p edge 1 0\n")
    assert main(["verify", str(tmp_path / "c.json"), str(tmp_path / "g.edges")]) == 2
    assert main(["verify", str(tmp_path / "missing.json"), str(tmp_path / "g.edges")]) == 2


def test_hex_and_decimal_seed_agree(tmp_path):
    _witness(tmp_path / "a")
    out_b = tmp_path / "b"
    main(["witness", "--q", "3", "--seed", "0x2a", "--p", "0.5", "--out", str(out_b)])
    a = json.loads((tmp_path / "a" / "w" / "certificate.json").read_text())
    b = json.loads((out_b / "certificate.json").read_text())
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b
    assert (tmp_path / "a" / "w" / "witness.edges").read_bytes() == (out_b / "witness.edges").read_bytes()


def test_edge_file_round_trip_bytes(tmp_path):
    main(["randomize", "--q", "2", "--seed", "7", "--out", str(tmp_path)])
    first = (tmp_path / "hstar.edges").read_bytes()
    write_graph(tmp_path / "again.edges", read_graph(tmp_path / "hstar.edges"))
    assert (tmp_path / "again.edges").read_bytes() == first


def test_randomize_reports(tmp_path):
    assert main(["randomize", "--q", "3", "--seed", "5", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["structural"]["passed"] and report["exhaustive"]["passed"]
    side = json.loads((tmp_path / "hstar.json").read_text())
    assert side["seed"] == 5


def test_audit_runs(tmp_path):
    code = main(["audit", "--q", "3", "--seed", "1", "--sizes", "10", "20", "--trials", "20",
                 "--out", str(tmp_path)])
    assert code == 0
    audit = json.loads((tmp_path / "audit.json").read_text())["audit"]
    assert set(audit["info"]["sizes"]) == {"10", "20"}


def test_config_file_honoured(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"q": 2, "master_seed": 9, "alpha_cap": 3}))
    out = tmp_path / "o"
    code = main(["witness", "--config", str(cfg), "--q", "2", "--p", "1.0", "--out", str(out)])
    cert = json.loads((out / "certificate.json").read_text())
    assert cert["seeds"]["randomize"] == 9
    assert cert["alpha_bound"]["mode"] == "sampled"
    assert code in (0, 1) and cert["status"] in ("PASS", "UNPROVEN")


def test_blowup_command(tmp_path):
    base = tmp_path / "c5.edges"
    base.write_text("p edge 5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n")
    code = main(["blowup", "--base", str(base), "--k", "3", "--r", "2", "--t", "5", "--seed", "3",
                 "--out", str(tmp_path)])
    data = json.loads((tmp_path / "coloring.json").read_text())
    assert data["report"]["checks"][0]["name"] == "partition" and data["report"]["checks"][0]["passed"]
    assert len(data["permutations"]) == 2
    lines = (tmp_path / "coloring.txt").read_text().splitlines()
    assert lines[0] == "c 10 3" and len(lines) == 1 + 45
    assert code == (0 if data["report"]["passed"] else 1)


@pytest.mark.parametrize("argv", [
    ["build", "--q", "6"],
    ["build"],
    ["witness", "--q", "3", "--seed", "banana"],
    ["blowup", "--base", "x", "--k", "1", "--r", "1", "--t", "3"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"q": 2, "colour": "red"}))
    with pytest.raises(SystemExit) as exc:
        main(["build", "--config", str(cfg), "--q", "2", "--out", str(tmp_path)])
    assert exc.value.code == 2
