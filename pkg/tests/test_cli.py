import json
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from padicreg import cli, io
from padicreg.polyfit import Polynomial
from padicreg.solver import AffineModel

Z_MODEL = AffineModel((Fraction(1), Fraction(0)), Fraction(409**11))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_usage(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(list(argv))
    capsys.readouterr()
    return exc.value.code


@pytest.fixture
def four_csv(tmp_path):
    path = tmp_path / "four.csv"
    path.write_text("0,0\n1,0\n1,1\n1,2\n1,3\n")
    return str(path)


def test_vp_and_dist(capsys):
    assert run(capsys, "vp", "-p", "3", "9")[1].strip() == "v=2 |x|=1/9"
    assert run(capsys, "vp", "-p", "3", "0")[1].strip() == "v=inf |x|=0"
    code, out, _ = run(capsys, "vp", "-p", "5", "--json", "-5/50")
    assert code == 0 and json.loads(out) == {"x": "-1/10", "prime": 5, "v": "-1", "abs": "5"}
    assert run(capsys, "dist", "-p", "3", "1", "10")[1].strip() == "d=1/9 (3^-2)"


def test_usage_errors(capsys):
    assert run_usage(capsys, "vp", "-p", "4", "3") == 1
    assert run_usage(capsys, "nonsense") == 1
    assert run_usage(capsys, "vp", "-p", "3", "1.5") == 1
    assert run_usage(capsys, "fit", "--threads", "0", "--bundled", "identity") == 1
    assert run(capsys, "fit")[0] == 1  # no dataset given


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "fit", str(tmp_path / "missing.csv"))[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert run(capsys, "fit", str(bad))[0] == 2
    assert run(capsys, "decode", "-p", "3", "9")[0] == 2
    assert run(capsys, "encode", "no_such_node")[0] == 2


def test_math_errors(capsys, four_csv, tmp_path):
    code, _, err = run(capsys, "fit", four_csv)
    assert code == 3 and "rows 1 and 2" in err
    degenerate = tmp_path / "deg.csv"
    degenerate.write_text("1,2,0\n2,4,1\n3,6,5\n")
    code, _, err = run(capsys, "fit", str(degenerate))
    assert code == 3 and "certificate" in err
    assert run(capsys, "polyfit", "-n", "2", "--xs", "0,1", "--ys", "0,1")[0] == 3


def test_fit_four_solution(capsys, four_csv):
    code, out, _ = run(capsys, "fit", "-p", "2", "--allow-inconsistent", "--json", four_csv)
    assert code == 0
    report = io.parse_report(out)
    assert report.loss == Fraction(5, 2)
    assert len(report.optimal_models) == 4
    assert io.serialize_report(report) == out
    code, text, _ = run(capsys, "fit", "-p", "2", "--bundled", "padic-four-solution")
    assert code == 0 and "loss: 5/2" in text


def test_fit_deterministic_across_threads(capsys):
    outs = set()
    for t in ("1", "2", "3"):
        code, out, _ = run(capsys, "fit", "-p", "409", "--json", "--threads", t, "--bundled", "zorgette")
        assert code == 0
        outs.add(out)
    assert len(outs) == 1
    assert Z_MODEL in io.parse_report(outs.pop()).optimal_models


def test_zorgette(capsys):
    code, out, _ = run(capsys, "zorgette")
    assert code == 0
    assert "x = y + 53574285543133366239295624009" in out
    assert "intercept = 409^11" in out
    assert "verdict: robot 3 faulty" in out
    assert "(incorrect)" in out
    code, out, _ = run(capsys, "zorgette", "--json")
    doc = json.loads(out)
    assert doc["padic"]["verdict"] == ["robot 3 faulty"]
    assert doc["ols"]["verdict"] == "robot 2 faulty"
    padic = {k: v for k, v in doc["padic"].items() if k != "verdict"}
    assert Z_MODEL in io.parse_report(json.dumps(padic)).optimal_models


def test_zorgette_neighbouring_prime(capsys):
    code, out, _ = run(capsys, "zorgette", "-p", "419", "--json")
    assert code == 0
    doc = json.loads(out)
    assert "robot 3 faulty" in doc["padic"]["verdict"]
    assert any(m["weights"][1] == "0" for m in doc["padic"]["models"])


def test_descend(capsys, tmp_path):
    path = tmp_path / "id.csv"
    path.write_text("0,0\n1,1\n2,2\n3,3\n4,4\n")
    code, out, _ = run(capsys, "descend", "-p", "3", "--json", "--start", "0,1", str(path))
    assert code == 0
    steps = json.loads(out)["steps"]
    losses = [Fraction(s["loss"]) for s in steps]
    assert all(a > b for a, b in zip(losses, losses[1:]))
    assert len(steps) - 1 <= 2
    final = io.model_from_dict(steps[-1]["model"])
    assert sum(1 for i in range(5) if final((i,)) == i) >= 2


def test_polyfit_interp_residual(capsys):
    code, out, _ = run(capsys, "interp", "--xs", "0,1,2", "--ys", "0,1,4")
    assert code == 0 and out.strip() == "x^2"
    code, out, _ = run(capsys, "interp", "--json", "--xs", "0,1,2", "--ys", "0,1,4")
    assert Polynomial.parse(json.loads(out)["coefficients"]) == Polynomial((0, 0, 1))
    code, out, _ = run(capsys, "polyfit", "-p", "5", "-n", "1", "--json", "--xs", "0,1,2", "--ys", "0,1,4")
    doc = json.loads(out)
    assert doc["loss"] == "1"
    assert {Polynomial.parse(t) for t in doc["polynomials"]} >= {Polynomial((-2, 3))}
    code, out, _ = run(capsys, "residual-check", "-p", "5", "-n", "1", "--json", "--poly", "0,0,1", "--xs", "0,1,2")
    assert code == 0
    assert all(r["certified"] for r in json.loads(out)["results"])
    code, out, _ = run(capsys, "residual-check", "-p", "5", "-n", "1", "--poly", "0,0,1", "--approx", "0", "--xs", "1,2,3")
    assert code == 0 and "FEWER THAN n+1" in out


def test_polyfit_points_file(capsys, tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("x,y\n0,0\n1,1\n2,4\n")
    code, out, _ = run(capsys, "polyfit", "-p", "5", "-n", "2", "--points", str(path))
    assert code == 0 and "x^2" in out


def test_encode_decode_similar(capsys):
    code, out, _ = run(capsys, "encode", "mammoth.n.01")
    dotted, value = out.split()
    assert dotted == "1.2.3.37.5.4.4.5.3.8.4.17.1.4"
    code, out, _ = run(capsys, "decode", value)
    assert out.strip() == dotted
    code, out, _ = run(capsys, "encode", "--json", "dog.n.01")
    doc = json.loads(out)
    assert doc["path"] == "1.2.3.37.5.4.4.5.3.8.4.6.2.2" and doc["prime"] == 409
    code, out, _ = run(capsys, "similar", "mammoth.n.01", "dog.n.01")
    assert "409^-11" in out and "depth: 11" in out
    code, out, _ = run(capsys, "similar", "--json", "mammoth.n.01", "indian_elephant.n.01")
    doc = json.loads(out)
    assert Fraction(doc["distance"]) == Fraction(1, 409**13) and doc["common_depth"] == 13


def test_encode_custom_tree(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(",r,0,root\nr,a,1,alpha\nr,b,2,beta\nb,c,1,gamma\n")
    code, out, _ = run(capsys, "encode", "--tree", str(path), "gamma")
    assert code == 0 and out.split() == ["2.1", str(2 + 1 * 3)]


def test_dump(capsys):
    code, out, _ = run(capsys, "dump", "zorgette")
    assert code == 0 and out == io.bundled_text("zorgette")
    assert io.parse_dataset(out) == io.bundled("zorgette").payload
    code, out, _ = run(capsys, "dump", "fig1")
    assert json.loads(out)["label"] == "placental.n.01"


def test_console_script_and_module():
    result = subprocess.run([sys.executable, "-m", "padicreg", "vp", "-p", "3", "9"],
                            capture_output=True, text=True, check=True)
    assert result.stdout.strip() == "v=2 |x|=1/9"
    exe = shutil.which("padicreg")
    if exe:
        result = subprocess.run([exe, "interp", "--xs", "0,1,2", "--ys", "0,1,4"],
                                capture_output=True, text=True, check=True)
        assert result.stdout.strip() == "x^2"
