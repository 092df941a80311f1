import csv
import io
import json
import subprocess
import sys

import pytest

from cyclicsigma.cli import main, parse_char, parse_point, parse_vector

from conftest import curve_for


@pytest.fixture
def curve_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(curve_for(name).to_json())
        return str(path)
    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_describe_from_r_s_only(capsys):
    code, out, _ = run(["describe", "--curve", '{"r": 3, "s": 4}'], capsys)
    assert code == 0
    assert "gaps  1 2 5" in out
    assert "|Lambda| = 5" in out


def test_describe_json(capsys):
    code, out, _ = run(["describe", "--curve", '{"r": 2, "s": 7}', "--json"], capsys)
    data = json.loads(out)
    assert data["genus"] == 3 and data["gaps"] == [1, 3, 5]


def test_not_coprime_exits_2(capsys):
    code, _, err = run(["describe", "--curve", '{"r": 2, "s": 4}'], capsys)
    assert code == 2 and "NotCoprime" in err


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, _ = run(["periods", "--curve", str(tmp_path / "none.json")], capsys)
    assert code == 2


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["describe", "--curve", '{"r": 2, "s": 5}', "--bogus"])
    assert exc.value.code == 2


def test_periods_json_round_trip(capsys, curve_file, tmp_path):
    out_path = tmp_path / "p.json"
    code, out, _ = run(["periods", "--curve", curve_file("g2"), "--out", str(out_path)], capsys)
    assert code == 0
    assert json.loads(out) == json.loads(out_path.read_text())
    assert json.loads(out)["legendre_residual"] < 1e-10


def test_perturbed_eta_is_caught(capsys, curve_file):
    code, _, err = run(["sigma", "--curve", curve_file("g2"), "--u", "0.1,0.2",
                        "--perturb-eta", "1e-3"], capsys)
    assert code == 2 and "LegendreViolation" in err


def test_sigma_command(capsys, curve_file, sigmas):
    code, out, _ = run(["sigma", "--curve", curve_file("g2"), "--u", "0.1+0.1j, -0.2"], capsys)
    data = json.loads(out)
    want = sigmas["g2"].value(parse_vector("0.1+0.1j, -0.2"))
    assert complex(*data["value"]) == pytest.approx(want, rel=1e-12)


def test_theta_command_odd_char_vanishes(capsys, curve_file):
    code, out, _ = run(["theta", "--curve", curve_file("g2"), "--z", "0,0", "--char", "1 0;1 0"], capsys)
    assert code == 0
    assert abs(complex(*json.loads(out)["value"])) < 1e-12


def test_prime_form_command(capsys, curve_file):
    code, out, _ = run(["prime-form", "--curve", curve_file("c34"), "--p", "0.3+0.2j", "--q=-0.4;1"],
                       capsys)
    data = json.loads(out)
    assert code == 0
    assert complex(*data["sigma_over_cal_E"]) == pytest.approx(1.0, abs=1e-8)
    assert data["antisymmetry_residual"] < 1e-10


def test_verify_exit_code(capsys, curve_file):
    code, out, _ = run(["verify", "--curve", curve_file("c34")], capsys)
    assert code == 1
    assert "FAIL  trigonal_limit_triple" in out
    assert "PASS  fs_trigonal_n3" in out


def test_verify_tol_file_unknown_id(capsys, curve_file, tmp_path):
    tf = tmp_path / "t.json"
    tf.write_text('{"no_such_identity": 1e-3}')
    code, _, err = run(["verify", "--curve", curve_file("g2"), "--tol-file", str(tf)], capsys)
    assert code == 2 and "unknown identities" in err


def test_benney_csv(capsys, curve_file):
    code, out, _ = run(["benney-demo", "--curve", curve_file("g2"), "--samples", "5"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["u1_re", "u1_im", "core_re", "core_im"]
    assert len(rows) == 6


def test_parsers():
    c = curve_for("g2")
    p = parse_point(c, "0.5;1")
    assert p.sheet == 1
    assert parse_point(c, f"{p.x},{p.y}").sheet == 1
    ch = parse_char("1 0;0 1")
    assert tuple(ch.a) == (1, 0) and tuple(ch.b) == (0, 1)
    with pytest.raises(Exception):
        parse_vector("1,2,3", 2)


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "cyclicsigma.cli", "describe", "--curve",
                          '{"r": 2, "s": 3}'], capture_output=True, text=True)
    assert res.returncode == 0 and "genus 1" in res.stdout
