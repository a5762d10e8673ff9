import json
import shutil
import subprocess

import pytest

from polytope_em.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_square(capsys):
    code, out, _ = run(capsys, "verify-decomposition", "--polytope", "square", "--seed", "7")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["points_checked"] >= 200


def test_verify_cube_brianchon_gram(capsys):
    assert run(capsys, "verify-decomposition", "--polytope", "cube", "--variant", "bg")[0] == 0


def test_verify_lawrence_varchenko(capsys):
    code, out, _ = run(capsys, "verify-decomposition", "--polytope", "T2", "--variant", "lv", "--weights", "1/3,2,-1/2")
    assert code == 0 and "xi" in json.loads(out)


def test_epsilon_on_wall(capsys):
    code, out, _ = run(capsys, "verify-decomposition", "--polytope", "square", "--epsilon", "0,1/3")
    assert code == 2
    rep = json.loads(out)
    assert rep["wall"]["kind"] == "face"


def test_em_poly_t2(capsys):
    code, out, _ = run(capsys, "em-poly", "--polytope", "T2", "--poly", "1", "--weights", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["value"] == "4/1" and rep["oracle"] == "4/1"


def test_em_poly_under_truncated(capsys):
    code, out, err = run(capsys, "em-poly", "--polytope", "T2", "--poly", "1", "--weights", "1", "--k", "1")
    assert code == 1
    assert "warning" in err
    assert json.loads(out)["ok"] is False


def test_em_poly_json_polynomial(capsys):
    poly = json.dumps([{"exponents": [1, 2], "coeff": "3/4"}, {"exponents": [0, 0], "coeff": "-1"}])
    code, out, _ = run(capsys, "em-poly", "--polytope", "square", "--poly", poly, "--weights", "1/2,1/3,exp:1/3,2")
    assert code == 0
    assert json.loads(out)["ok"]


def test_em_1d_twisted(capsys):
    code, out, _ = run(capsys, "em-1d", "--identity", "twisted", "--lambda", "-1", "--k", "2", "--spline", "bspline:4")
    assert code == 0
    assert json.loads(out)["ok"]


@pytest.mark.parametrize("argv", [
    ["--identity", "interval", "--spline", "bspline:5:-1/2", "--m", "3", "--a", "-1", "--b", "2", "--qb", "1/5"],
    ["--identity", "halfray", "--spline", "bspline:4:-3/2", "--m", "2"],
    ["--identity", "halfray-left", "--spline", "bspline:4:-3/2", "--m", "1"],
    ["--identity", "line", "--spline", "bspline:6:1/3", "--m", "4"],
    ["--identity", "twisted-left", "--lambda", "exp:1/3", "--k", "3", "--spline", "bspline:5:-2"],
    ["--identity", "sector", "--spline", "bspline:4:-3/2", "--dim", "2", "--sector", "0,1"],
])
def test_em_1d_identities(capsys, argv):
    assert run(capsys, "em-1d", *argv)[0] == 0


def test_em_1d_smoothness_error(capsys):
    code, _, err = run(capsys, "em-1d", "--spline", "bspline:3", "--m", "3")
    assert code == 2 and "smooth" in err.lower()


def test_spec_errors(capsys):
    assert run(capsys, "verify-decomposition", "--polytope", "nonesuch")[0] == 2
    assert run(capsys, "verify-decomposition", "--weights", "1,2")[0] == 2
    assert run(capsys, "em-poly", "--polytope", "square", "--poly", "mono:1")[0] == 2


def test_gamma(capsys):
    code, out, _ = run(capsys, "gamma", "--polytope", "T2")
    assert code == 0
    faces = {tuple(f["face"]): f for f in json.loads(out)["faces"]}
    assert faces[(1, 2)]["order"] == 2
    assert faces[(1, 2)]["boundary"] == [["1/2", "1/2"]]


def test_sketch(capsys, tmp_path):
    target = tmp_path / "t2.svg"
    assert run(capsys, "sketch", "--polytope", "T2", "--out", str(target))[0] == 0
    svg = target.read_text()
    assert svg.count('class="cone"') == 7
    assert "<!-- cones: 7 -->" in svg


def test_sketch_exterior_fades_inactive_cones(capsys):
    code, out, _ = run(capsys, "sketch", "--polytope", "T2", "--epsilon", "auto:exterior", "--seed", "2")
    assert code == 0
    assert 'data-phi="0"' in out and 'data-phi="1"' in out


def test_sketch_needs_plane(capsys):
    assert run(capsys, "sketch", "--polytope", "cube")[0] == 2


@pytest.mark.parametrize("argv", [
    ["verify-decomposition", "--polytope", "T2", "--epsilon", "auto:exterior", "--seed", "3", "--weights", "1/7"],
    ["em-poly", "--polytope", "simplex3", "--poly", "mono:1,0,1", "--weights", "2/3"],
])
def test_reports_are_deterministic(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


@pytest.mark.skipif(shutil.which("polytope-em") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["polytope-em", "em-poly", "--polytope", "T2", "--poly", "1", "--weights", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == "4/1"
