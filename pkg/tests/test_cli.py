import csv
import io
import json
import math
import subprocess
import sys

import pytest

from causalreg.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text), strict=True))


def test_schwinger_mass():
    code, out = call("schwinger", "mass", "--e", "1")
    assert code == 0
    assert abs(json.loads(out)["boson_mass_squared"] - 1 / math.pi) < 1e-4


def test_schwinger_rhat_csv():
    code, out = call("schwinger", "rhat", "--ksq", "1", "--msq-list", "1e-2,1e-4,1e-6")
    assert code == 0
    table = rows(out)
    assert [float(r["msq"]) for r in table] == [1e-2, 1e-4, 1e-6]
    dist = [float(r["dist_i_over_pi"]) for r in table]
    assert dist[0] > dist[1] > dist[2]


def test_schwinger_gauge_check():
    code, out = call("schwinger", "gauge-check", "--cutoff-list", "10,100")
    assert code == 0
    assert all(float(r["longitudinal_defect"]) > 0.1 for r in rows(out))


def test_anomaly_profiles_agree():
    base = ("anomaly", "--dim", "4", "--F", "01=1,23=1", "--e", "1", "--profile")
    a = json.loads(call(*base, "bump")[1])
    b = json.loads(call(*base, "flattop")[1])
    assert set(a) == {"radial_integral", "trace_factor", "density", "coefficient"}
    assert abs(a["density"] - b["density"]) < 1e-8
    assert abs(a["coefficient"] - 1 / (16 * math.pi**2)) < 1e-12


def test_anomaly_2d():
    code, out = call("anomaly", "--dim", "2", "--F", "01=1")
    assert code == 0 and abs(json.loads(out)["density"] - 1 / (2 * math.pi)) < 1e-12


def test_distext_commands():
    code, out = call("distext", "pair", "--k", "2", "--order", "1", "--shape", "bump", "--radius", "1")
    assert code == 0
    assert set(json.loads(out)) == {"value", "error", "order"}
    code, out = call("distext", "bphz", "--m", "1", "--mu", "2", "--cutoffs", "1e2,1e4,1e6")
    assert code == 0
    last = rows(out)[-1]
    assert abs(float(last["subtracted"]) - math.log(4) / 2) < 1e-6


def test_testfn_and_clifford_tables():
    code, out = call("testfn", "--shape", "flattop", "--radius", "2", "--sample", "5")
    assert code == 0 and len(rows(out)) == 5
    code, out = call("clifford", "--check", "all")
    assert code == 0
    assert all(float(r["defect"]) == 0.0 for r in rows(out))


def test_smear_commands():
    code, out = call("smear", "covariance", "--n", "32", "--seed", "7", "--radius", "0.2")
    assert code == 0
    res = json.loads(out)
    assert res["defect"] <= 1e-10 and res["n"] == 32
    code, out = call("smear", "bosonization", "--n", "32", "--mode", "3,1")
    res = json.loads(out)
    assert res["defect"] <= 1e-10 and res["sign_s"] in (-1, 1)


def test_json_format_override():
    code, out = call("distext", "bphz", "--format", "json", "--cutoffs", "10")
    assert code == 0 and isinstance(json.loads(out), list)


@pytest.mark.parametrize("argv,flag", [
    (("smear", "covariance", "--n", "63"), "--n"),
    (("smear", "covariance", "--radius", "0.01"), "--radius"),
    (("anomaly", "--dim", "2", "--F", "23=1"), "--F"),
    (("anomaly", "--F", "0x=1"), "--F"),
    (("schwinger", "rhat", "--ksq", "-1"), "--ksq"),
    (("distext", "bphz", "--cutoffs", "1,abc"), "--cutoffs"),
    (("testfn", "--bogus", "1"), "--bogus"),
])
def test_usage_errors_exit_2(capsys, argv, flag):
    code, _ = call(*argv)
    assert code == 2
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert flag in err


def test_computation_error_exit_1(capsys):
    code, _ = call("schwinger", "rhat", "--msq-list", "1")
    assert code == 1
    assert "threshold" in capsys.readouterr().err


def test_byte_identical_output():
    argv = ("smear", "covariance", "--n", "16", "--seed", "3", "--radius", "0.25", "--trials", "3")
    assert call(*argv) == call(*argv)


def test_verify_all_passes():
    code, out = call("verify", "--suite", "all", "--seed", "1")
    table = rows(out)
    assert code == 0
    assert len(table) == 11 and all(r["status"] == "PASS" for r in table)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "causalreg", "schwinger", "mass"],
                          capture_output=True, text=True, check=True)
    assert "boson_mass_squared" in json.loads(proc.stdout)
