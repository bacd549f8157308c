import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from nrshift.cli import JobSpec, load_matrix, main, parse_complex, read_rows, run
from nrshift.errors import InputError
from nrshift.geometry import convex_hull
from nrshift.numrange import numerical_range
from nrshift.shift import numrange_via_dilations


def write_matrix(path, A):
    A = np.asarray(A, dtype=complex)
    path.write_text(json.dumps({"n": A.shape[0], "re": A.real.tolist(), "im": A.imag.tolist()}))
    return str(path)


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


@pytest.mark.parametrize("text,value", [
    ("0", 0), ("0.5+0.2i", 0.5 + 0.2j), ("-i", -1j), ("i", 1j), ("2-i", 2 - 1j),
    ("-0.25i", -0.25j), ("1e-3+2e-1i", 1e-3 + 0.2j), (" 3 ", 3),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(InputError):
        parse_complex("1+2k")


def test_load_matrix_validation(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2, "re": [[1, 0]], "im": [[0, 0]]}')
    with pytest.raises(InputError):
        load_matrix(str(p))
    p.write_text("not json")
    with pytest.raises(InputError):
        load_matrix(str(p))
    p.write_text('{"n": 1, "re": [[1]]}')
    with pytest.raises(InputError):
        load_matrix(str(p))


def test_matrix_four_samples(tmp_path, capsys):
    path = write_matrix(tmp_path / "A.json", np.diag([1, 1j]))
    assert main(["matrix", "--input", path, "--samples", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "gamma,h,x,y"
    assert len(out) == 5


def test_matrix_round_trip_and_determinism(tmp_path):
    rng = np.random.default_rng(0)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    path = write_matrix(tmp_path / "A.json", A)
    c1, c2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["matrix", "--input", path, "--samples", "90", "--csv", str(c1)]) == 0
    assert main(["matrix", "--input", path, "--samples", "90", "--csv", str(c2)]) == 0
    assert c1.read_bytes() == c2.read_bytes()
    back = convex_hull(read_rows(str(c1)))
    assert np.array_equal(back.vertices, numerical_range(load_matrix(path), 90).inner.vertices)


def test_matrix_svg(tmp_path):
    path = write_matrix(tmp_path / "A.json", [[0, 1], [0, 0]])
    svg = tmp_path / "m.svg"
    assert main(["matrix", "--input", path, "--csv", str(tmp_path / "m.csv"), "--svg", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")


def test_blaschke_svg_has_unit_circle(tmp_path):
    svg = tmp_path / "b.svg"
    code = main(["blaschke", "--zeros", "0,0", "--samples", "720", "--svg", str(svg),
                 "--csv", str(tmp_path / "b.csv")])
    assert code == 0
    text = svg.read_text()
    assert 'stroke-dasharray="4,3"' in text
    pts = read_rows(str(tmp_path / "b.csv"))
    assert np.max(np.abs(np.abs(pts) - 0.5)) < 1e-12


def test_dilation_outputs(tmp_path):
    out = tmp_path / "U.json"
    code = main(["dilation", "--zeros", "0.5+0.2i,-0.5i", "--lam", "i", "--matrix-out", str(out),
                 "--csv", str(tmp_path / "d.csv")])
    assert code == 0
    U = load_matrix(str(out))
    assert np.linalg.norm(U.conj().T @ U - np.eye(3)) < 1e-12
    r = rows(tmp_path / "d.csv")
    assert len(r) == 3
    for row in r:
        g, h, x, y = (float(row[k]) for k in ("gamma", "h", "x", "y"))
        assert abs(np.hypot(x, y) - 1) < 1e-12
        assert abs(x * np.cos(g) + y * np.sin(g) - h) < 1e-12


def test_poncelet_round_trip(tmp_path):
    c = tmp_path / "p.csv"
    svg = tmp_path / "p.svg"
    assert main(["poncelet", "--zeros", "0.3,0.4i,-0.2", "--lambda-count", "60",
                 "--csv", str(c), "--svg", str(svg)]) == 0
    W = numrange_via_dilations([0.3, 0.4j, -0.2], 60)
    assert np.array_equal(convex_hull(read_rows(str(c))).vertices, W.vertices)
    assert 'stroke-dasharray="4,3"' in svg.read_text()


def test_envelope_command(tmp_path):
    c = tmp_path / "e.csv"
    assert main(["envelope", "--m", "1", "--samples", "101", "--csv", str(c),
                 "--svg", str(tmp_path / "e.svg")]) == 0
    r = rows(c)
    assert r[0]["isolated"] == "1"
    for row in r[1:]:
        x, y = float(row["x"]), float(row["y"])
        assert abs((x - 0.5) ** 2 / 2 + y * y - 0.25) < 1e-12


def test_envelope_support_lines(tmp_path):
    path = write_matrix(tmp_path / "J.json", [[0, 1], [0, 0]])
    c = tmp_path / "e.csv"
    assert main(["envelope", "--input", path, "--samples", "16", "--csv", str(c),
                 "--svg", str(tmp_path / "e.svg")]) == 0
    for row in rows(c):
        assert abs(np.hypot(float(row["x"]), float(row["y"])) - 0.5) < 1e-9


def test_bidisk_command(tmp_path, capsys):
    c = tmp_path / "bd.csv"
    svg = tmp_path / "bd.svg"
    assert main(["bidisk", "--a", "2", "--c", "1", "--tau", "16", "--samples", "64",
                 "--csv", str(c), "--svg", str(svg)]) == 0
    assert "excluded: 1" in capsys.readouterr().err
    assert np.max(np.abs(read_rows(str(c)))) <= 1 + 1e-12
    assert 'stroke-dasharray="4,3"' in svg.read_text()
    assert main(["bidisk", "--example", "product", "--tau", "16", "--samples", "64",
                 "--csv", str(c), "--svg", str(svg)]) == 0


def test_crouzeix_command(tmp_path):
    path = write_matrix(tmp_path / "J.json", [[0, 1], [0, 0]])
    c = tmp_path / "c.csv"
    assert main(["crouzeix", "--input", path, "--csv", str(c)]) == 0
    assert abs(float(rows(c)[0]["ratio"]) - 2) < 1e-4
    assert main(["crouzeix", "--random", "5", "--seed", "3", "--csv", str(c)]) == 0
    assert all(float(r["ratio"]) <= 1 + np.sqrt(2) for r in rows(c))


def test_exit_codes(tmp_path, capsys):
    assert main(["matrix", "--input", str(tmp_path / "missing.json")]) == 2
    assert main(["blaschke", "--zeros", "1.5"]) == 2
    assert main(["bidisk", "--a", "2"]) == 2
    assert main(["dilation", "--zeros", "0.5", "--lam", "2"]) == 2
    assert main(["dilation", "--zeros", "0.5,0.3i", "--tol", "1e-30"]) == 3
    assert main(["matrix", "--input", str(tmp_path / "x.json"), "--samples", "2"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["blaschke", "--zeros", "zz"])
    assert info.value.code == 2
    err = capsys.readouterr().err
    assert "input error" in err and "numerical failure" in err


def test_run_rejects_unknown_command():
    assert run(JobSpec("nope")) == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "nrshift.cli", "poncelet", "--zeros", "0",
                           "--lambda-count", "8"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "gamma,h,x,y"
