import io

import pytest

from pictau.cli import main
from pictau.textio import parse_ideals, parse_manifest


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    rc = main(list(argv), out, err)
    return rc, out.getvalue(), err.getvalue()


def test_plucker_matrix_output():
    rc, out, _ = run("grass", "matrix", "--d", "2", "--n", "4")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "plucker_matrix"
    assert lines[1].split() == ["0", "-p[0,1]", "-p[0,2]", "-p[0,3]"]
    assert lines[4].split() == ["p[0,3]", "p[1,3]", "p[2,3]", "0"]


def test_chart_matrix_output():
    rc, out, _ = run("grass", "matrix", "--d", "3", "--n", "4", "--chart", "0,1,3")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "chart_matrix 0,1,3"
    assert lines[3].split() == ["-p[1,2,3]", "p[0,2,3]", "p[0,1,2]"]


def test_manifest_is_sorted_and_parseable():
    rc, out, err = run("grass", "relations", "--d", "2", "--n", "4", "--field", "Fp2")
    assert rc == 0
    man = parse_manifest(out)
    assert man["field"] == "Fp 2" and man["command"] == "grass" and man["d"] == "2"
    assert "workers" not in man and "workers 1" in err
    (tag, I), = parse_ideals(out)
    assert tag == "plucker" and len(I.gens) == 1


def test_convert_round_trip(tmp_path):
    rc, out, _ = run("grass", "relations", "--d", "2", "--n", "4", "--field", "Fp3")
    p = tmp_path / "rel.txt"
    p.write_text(out)
    rc, out, _ = run("grass", "convert", "--d", "2", "--n", "4", "--field", "Fp3", "--input", str(p))
    assert rc == 0
    (tag, J), = parse_ideals(out)
    # the Pluecker relations pull back to zero
    assert tag == "stiefel" and all(g.is_zero() for g in J.gens)


def test_gotzmann_numbers():
    rc, out, _ = run("gotzmann", "--points", "5", "--r", "2")
    assert rc == 0 and out.splitlines()[0] == "5"
    rc, out, _ = run("gotzmann", "--hypersurface", "4", "--r", "3")
    assert rc == 0 and out.splitlines()[0] == "4"


def test_exit_codes():
    with pytest.raises(SystemExit) as e:
        main(["grass", "bogus"], io.StringIO(), io.StringIO())
    assert e.value.code == 2
    rc, out, err = run("div", "identify", "--toy", "plane-cubic", "--field", "Fp7")
    assert rc == 3 and out == ""
    assert "grassmannian Gr(90,108)" in err and "binomial C(108,90)" in err
    assert run("params", "--toy", "p1", "--override-m", "0")[0] == 4
    assert run("gotzmann", "--poly", "0,-1", "--r", "2")[0] == 4
    assert run("gs", "hopf", "--fixture", "mu:3", "--field", "ext(Q;y^2-2)")[0] == 5


def test_bad_input_files(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert run("grass", "convert", "--d", "2", "--n", "4", "--input", str(empty))[0] == 4
    assert run("grass", "convert", "--d", "2", "--n", "4", "--input", str(tmp_path / "missing"))[0] == 4
    bad = tmp_path / "bad.txt"
    bad.write_text("-----BEGIN IDEAL-----\nring Q vars x0 x1\nx0\n")
    assert run("div", "identify", "--input", str(bad))[0] == 4


def test_pic_p1_quotient():
    rc, out, _ = run("pic", "quotient", "--toy", "p1", "--field", "Fp3")
    assert rc == 0
    lines = out.splitlines()
    assert "points 1" in lines and "point 0 fiber 4" in lines and "Phi 2*s+1" in lines


def test_homology_pi1_elliptic():
    rc, out, _ = run("homology", "pi1", "--fixture", "elliptic:-1,0", "--n", "2")
    assert rc == 0
    lines = out.splitlines()
    assert "group Z/2 x Z/2" in lines and "pi1ab Zhat^2" in lines


@pytest.mark.parametrize("argv", [
    ["grass", "relations", "--d", "2", "--n", "5", "--field", "Fp2"],
    ["gs", "points", "--fixture", "elliptic:0,1", "--n", "2"],
])
def test_worker_count_does_not_change_stdout(argv):
    a = run(*argv, "--workers", "1")
    b = run(*argv, "--workers", "4")
    assert a[0] == b[0] == 0 and a[1] == b[1]
