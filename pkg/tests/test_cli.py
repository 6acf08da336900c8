import json

import pytest

from k3kit import cli
from k3kit.lattice import make_named


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, argv):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_parse_named_lattice_grammar():
    L = cli.parse_named_lattice("H+2(-E8)+<-4>")
    assert L.rank == 19
    assert L.gram[0][1] == 1
    assert L.gram[18][18] == -4
    assert cli.parse_named_lattice("K3").rank == 22
    assert cli.parse_named_lattice("3(-A2)").rank == 6
    assert cli.parse_named_lattice("-D4").gram == make_named("D", 4, negate=True).gram
    with pytest.raises(Exception):
        cli.parse_named_lattice("H+*")
    with pytest.raises(Exception):
        cli.parse_named_lattice("E9")


def test_lattice_command_json(tmp_path, capsys):
    path = write(tmp_path, "k3.json", {"named": "K3"})
    code, out = run(capsys, ["lattice", "--in", path, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "k3kit/1"
    assert report["rank"] == 22
    assert report["signature"] == [3, 19]
    assert report["disc"] == 1
    assert report["even"] is True


def test_lattice_command_trilinear(tmp_path, capsys):
    T = [[[0, 0], [0, 1]], [[0, 1], [1, 0]]]
    path = write(tmp_path, "tri.json", {"trilinear": T, "k": [2, 3]})
    code, out = run(capsys, ["lattice", "--in", path, "--format", "json"])
    assert code == 0
    assert json.loads(out)["gram"] == [[0, 3], [3, 2]]


def test_dform_command(tmp_path, capsys):
    path = write(tmp_path, "l.json", {"named": "H+2(-E7)+(-A3)"})
    code, out = run(capsys, ["dform", "--in", path, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["invariant_factors"] == [2, 2, 4]
    assert report["q_on_generators"] == ["1/2", "1/2", "5/4"]


def test_overlattices_command(tmp_path, capsys):
    path = write(tmp_path, "l.json", {"named": "H+2(-E7)+(-A3)"})
    code, out = run(capsys, ["overlattices", "--in", path, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["count"] == 2
    assert [e["index"] for e in report["overlattices"]] == [1, 2]
    assert report["overlattices"][1]["disc"] == 4
    assert report["overlattices"][1]["nikulin_unique"] is True


def test_weierstrass_command(tmp_path, capsys):
    path = write(
        tmp_path,
        "w.json",
        {
            "d": 2,
            "alpha": ["0", "0", "0", "0", "1", "0", "0", "0", "0"],
            "beta": ["0", "0", "0", "0", "0", "1", "0", "2", "0", "0", "0", "0", "0"],
        },
    )
    code, out = run(capsys, ["weierstrass", "--in", path, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["euler_total"] == 24
    by_type = {}
    for f in report["fibers"]:
        by_type[f["type"]] = by_type.get(f["type"], 0) + f["count"]
    assert by_type["II*"] == 2
    assert report["trivial_lattice"]["disc"] == 1
    assert report["torsion_candidates"] == [[]]


def test_cone_command(tmp_path, capsys):
    path = write(tmp_path, "l.json", {"gram": [[0, 1], [1, -2]]})
    code, out = run(capsys, ["cone", "--in", path, "--ample", "3,1", "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["walls"] == [[0, 1]]
    assert [r["coords"] for r in report["rays"]] == [[1, 0], [2, 1]]
    assert report["rational_polyhedral"] is True
    assert report["aut_finiteness"] == "finite"


def test_fibration_command(tmp_path, capsys):
    path = write(tmp_path, "l.json", {"gram": [[0, 3], [3, 2]]})
    code, out = run(capsys, ["fibration", "--in", path, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["genus_one"] is True
    assert report["elliptic_with_section"] is False


def test_embed_command(tmp_path, capsys):
    path = write(tmp_path, "e.json", {"named": "H", "embedding": [[1], [2]]})
    code, out = run(capsys, ["embed", "--in", path, "--format", "json"])
    assert code == 0
    assert json.loads(out)["primitive"] is True


def test_deterministic_output(tmp_path, capsys):
    path = write(tmp_path, "l.json", {"named": "H+2(-E7)+(-A3)"})
    _, first = run(capsys, ["overlattices", "--in", path, "--format", "json"])
    _, second = run(capsys, ["overlattices", "--in", path, "--format", "json"])
    assert first == second


def test_text_and_json_agree(tmp_path, capsys):
    path = write(tmp_path, "k3.json", {"named": "K3"})
    _, text = run(capsys, ["lattice", "--in", path, "--format", "text"])
    _, raw = run(capsys, ["lattice", "--in", path, "--format", "json"])
    report = json.loads(raw)
    assert "rank: 22" in text
    assert "disc: 1" in text
    assert "signature: [3, 19]" in text
    assert json.loads(raw)["rank"] == 22
    assert report["even"] is True


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, out = run(capsys, ["lattice", "--in", str(path), "--format", "json"])
    assert code == 2
    assert json.loads(out)["error"]["type"] == "ParseError"
    path2 = write(tmp_path, "odd.json", {"gram": [[0, 1], [1, 0]], "junk": 1})
    code, out = run(capsys, ["lattice", "--in", str(path2), "--format", "json"])
    assert code == 2


def test_engine_error_exit_code(tmp_path, capsys):
    # a place with valuations (4, 6): not relatively minimal
    alpha = ["1", "4", "6", "4", "1", "0", "0", "0", "0"]
    beta = ["1", "6", "15", "20", "15", "6", "1", "0", "0", "0", "0", "0", "0"]
    path = write(tmp_path, "w.json", {"d": 2, "alpha": alpha, "beta": beta})
    code, out = run(capsys, ["weierstrass", "--in", path, "--format", "json"])
    assert code == 3
    report = json.loads(out)
    assert report["error"]["type"] == "NonMinimalModel"
    assert "place" in report["error"]


def test_unknown_rational_rejected(tmp_path, capsys):
    path = write(tmp_path, "w.json", {"d": 1, "alpha": ["x"], "beta": ["0"]})
    code, _ = run(capsys, ["weierstrass", "--in", path, "--format", "json"])
    assert code == 2
