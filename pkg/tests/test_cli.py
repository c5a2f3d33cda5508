import json
import subprocess
import sys

import pytest

from helpers import DATA
from pontryagin.builders import build_M8_15, extra_block
from pontryagin.cli import main
from pontryagin.complex import parse_facets

RP2 = "1 2 3\n1 3 4\n1 4 5\n1 2 6\n1 5 6\n2 3 5\n2 4 5\n2 4 6\n3 4 6\n3 5 6\n"


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_M8_15(capsys):
    code, out, _ = _run(capsys, "build", "M8_15")
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert len(lines) == 490
    assert all(len(l.split()) == 9 for l in lines)
    assert parse_facets(out).facets == build_M8_15("plain").facets


def test_build_tilde_differs_in_one_block(capsys):
    _, plain, _ = _run(capsys, "build", "M8_15")
    _, tilde, _ = _run(capsys, "build", "M8_15_tilde")
    a, b = parse_facets(plain).facets, parse_facets(tilde).facets
    assert len(b) == 490
    assert a - b == extra_block(1)
    assert b - a == extra_block(1, twisted=True)


def test_build_boundary_simplex(capsys, tmp_path):
    code, out, _ = _run(capsys, "build", "boundary_simplex:3")
    assert code == 0
    assert len([l for l in out.splitlines() if l and not l.startswith("#")]) == 4
    target = tmp_path / "s.txt"
    assert _run(capsys, "build", "boundary_simplex:3", "-o", str(target))[0] == 0
    assert target.read_text() == out


def test_check_reports(capsys, tmp_path):
    code, out, _ = _run(capsys, "check", "M8_15")
    r = json.loads(out)
    assert code == 0
    assert (r["vertices"], r["facets"], r["euler_characteristic"]) == (15, 490, 3)
    assert r["neighbourliness"] == 5 and r["complementarity"] is True
    assert r["closed_pseudomanifold"] and r["orientable"]
    r = json.loads(_run(capsys, "check", "boundary_simplex:3")[1])
    assert r["dimension"] == 2 and r["euler_characteristic"] == 2 and r["orientable"]
    f = tmp_path / "rp2.txt"
    f.write_text(RP2)
    r = json.loads(_run(capsys, "check", str(f))[1])
    assert r["orientable"] is False and r["euler_characteristic"] == 1


def test_homology(capsys, tmp_path):
    f = tmp_path / "rp2.txt"
    f.write_text(RP2)
    code, out, _ = _run(capsys, "homology", str(f))
    assert code == 0
    h = json.loads(out)["homology"]
    assert [(g["betti"], g["torsion"]) for g in h] == [(1, []), (0, [2]), (0, [])]
    one = json.loads(_run(capsys, "homology", str(f), "--dim", "1")[1])["homology"]
    assert one == [{"dim": 1, "betti": 0, "torsion": [2]}]


def test_p1_on_sphere(capsys):
    code, out, _ = _run(capsys, "p1", "boundary_simplex:9")
    doc = json.loads(out)
    assert code == 0
    assert doc["chain"] == [] and doc["is_cycle"] is True
    assert doc["class_coefficient"] == [0, 1]
    assert doc["dimension"] == 8
    assert set(doc) == {"input_hash", "dimension", "chain", "is_cycle", "class_coefficient", "elapsed"}


def test_p1_dump_flags_and_replay(capsys, tmp_path):
    src = str(DATA / "cp2_9.txt")
    chains = tmp_path / "chains"
    code, out, _ = _run(capsys, "p1", src, "--seed", "3", "--dump-chains", str(chains), "--dump-decomposition")
    doc = json.loads(out)
    assert code == 0
    weight = sum(n / d for _, n, d in doc["chain"])
    assert round(abs(weight), 9) == 3
    assert "decomposition" in doc
    dumped = sorted(p.name for p in chains.iterdir())
    assert dumped and all(p.endswith(".txt") for p in dumped)
    assert all(l.startswith("move ") for p in chains.iterdir() for l in p.read_text().splitlines())
    out2 = tmp_path / "doc.json"
    _run(capsys, "p1", src, "--seed", "3", "--dump-decomposition", "-o", str(out2))
    doc2 = json.loads(out2.read_text())
    doc.pop("elapsed"), doc2.pop("elapsed")
    assert doc == doc2


def test_errors_give_exit_code_one(capsys, tmp_path):
    code, _, err = _run(capsys, "build", "no_such_complex")
    assert code == 1 and "UnknownBuiltin" in err
    assert _run(capsys, "check", str(tmp_path / "missing.txt"))[0] == 1
    bad = tmp_path / "open.txt"
    bad.write_text("1 2 3\n1 3 4\n")
    assert _run(capsys, "p1", str(bad))[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pontryagin", "build", "boundary_simplex:2"],
                          capture_output=True, text=True, check=True)
    assert len(proc.stdout.strip().splitlines()) == 3


def test_usage_error_exits_nonzero():
    with pytest.raises(SystemExit) as info:
        main(["p1"])
    assert info.value.code != 0
