import csv
import io
import json
import subprocess
import sys

import pytest

from boettcher.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


P248 = ("--p", "2", "--d", "4", "--c-num", "8", "--c-den", "1")


# -- coeffs -------------------------------------------------------------------


def test_coeffs_catalan(capsys):
    code, out, _ = run(capsys, "coeffs", "--p", "2", "--d", "2", "--c-num", "2", "--c-den", "1",
                       "--series", "a-inv", "--terms", "5")
    assert code == 0
    assert [r["coeff"] for r in rows(out)] == ["-1/1", "-1/1", "-2/1", "-5/1", "-14/1"]


def test_coeffs_hand_values(capsys):
    code, out, _ = run(capsys, "coeffs", "--p", "2", "--d", "2", "--c-num", "1", "--c-den", "1",
                       "--series", "a", "--terms", "3")
    assert code == 0
    table = rows(out)
    assert [r["coeff"] for r in table] == ["1/2", "1/8", "-1/16"]
    assert [r["valuation"] for r in table] == ["-1/1", "-3/1", "-4/1"]


def test_coeffs_zero_terms(capsys):
    code, out, _ = run(capsys, "coeffs", *P248, "--terms", "0")
    assert code == 0
    assert out == "n,coeff,valuation\n"


def test_coeffs_json_schema(capsys):
    code, out, _ = run(capsys, "coeffs", "--p", "2", "--d", "2", "--ram", "2", "--c-num", "1",
                       "--c-pi-exp", "3", "--series", "b", "--terms", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["params"] == {
        "p": 2, "d": 2, "c": {"num": 1, "den": 1, "pi_exp": 3, "ram": 2},
        "series": "b", "terms": 3,
    }
    assert [e["n"] for e in doc["entries"]] == [1, 2, 3]
    assert doc["entries"][0]["valuation"] == "1/2"
    assert set(doc["entries"][0]["coeff"]) == {"coeffs", "p", "m"}


def test_coeffs_byte_stable(capsys):
    argv = ("coeffs", *P248, "--series", "b", "--terms", "20", "--format", "json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_coeffs_t_series(capsys):
    code, out, _ = run(capsys, "coeffs", "--p", "2", "--d", "4", "--c1-num", "4", "--c2-num", "2",
                       "--series", "t", "--terms", "4")
    assert code == 0
    assert rows(out)[0]["coeff"] == "-1/2"


def test_resource_cap(capsys):
    code, out, err = run(capsys, "coeffs", *P248, "--terms", "100000")
    assert code == 3
    assert out == ""
    assert "error" in err


def test_bad_flags(capsys):
    with pytest.raises(SystemExit) as info:
        main(["coeffs", "--p", "2"])
    assert info.value.code == 2
    code, out, _ = run(capsys, "coeffs", "--p", "4", "--d", "2", "--c-num", "1")
    assert code == 2 and out == ""
    code, out, _ = run(capsys, "coeffs", "--p", "2", "--d", "2", "--c-num", "1", "--c-den", "0")
    assert code == 2 and out == ""
    code, _, _ = run(capsys, "coeffs", *P248, "--terms", "-1")
    assert code == 2


# -- verify -------------------------------------------------------------------


def test_verify_grid_point(capsys):
    code, out, _ = run(capsys, "verify", *P248, "--series", "b", "--terms", "64")
    assert code == 0
    table = rows(out)
    assert len(table) == 64
    assert all(r["match"] == "true" for r in table)


def test_verify_condition_none(capsys):
    code, out, err = run(capsys, "verify", "--p", "2", "--d", "2", "--c-num", "2", "--c-den", "1",
                         "--series", "a", "--terms", "8")
    assert code == 2
    assert out == ""
    assert "neither regime" in err


def test_verify_injected_fault(capsys):
    code, out, err = run(capsys, "verify", *P248, "--series", "a", "--terms", "16", "--perturb", "8")
    assert code == 1
    assert "[8]" in err
    bad = [r["n"] for r in rows(out) if r["match"] == "false"]
    assert bad == ["8"]


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", *P248, "--series", "a", "--terms", "8", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["all_match"] is True
    assert doc["condition"]["tag"] == "B"


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", *P248, "--terms", "16")
    assert code == 0
    assert rows(out)[-1] == {"n": "16", "predicted_v": "-7/1"}


# -- radius and conjecture ----------------------------------------------------


def test_radius_conjecture(capsys):
    code, out, _ = run(capsys, "radius", "--conjecture", "--p", "2", "--r", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["N"] == 1
    assert doc["inv_radius_log_p"] == "-1/2"


def test_radius_conjecture_r0(capsys):
    _, out, _ = run(capsys, "radius", "--conjecture", "--p", "3", "--r", "0")
    assert json.loads(out)["inv_radius_log_p"] == "-1/2"


def test_radius_general(capsys):
    code, out, _ = run(capsys, "radius", *P248)
    doc = json.loads(out)
    assert code == 0
    assert doc["slope"] == "-1/2"
    assert doc["r_N_log"] == "1/2"
    assert doc["varphi_disk_log"] == "1/8"
    assert "approx" not in doc


def test_radius_approx(capsys):
    _, out, _ = run(capsys, "radius", *P248, "--approx")
    assert json.loads(out)["approx"]["r_N_log"] == 0.5


def test_radius_needs_r(capsys):
    code, _, _ = run(capsys, "radius", "--conjecture", "--p", "2")
    assert code == 2


def test_conjecture_table(capsys):
    code, out, _ = run(capsys, "conjecture", "--p", "3", "--r-max", "3")
    assert code == 0
    assert [r["match"] for r in rows(out)] == ["true"] * 4


# -- conjugacy ----------------------------------------------------------------


def test_conjugacy_verified(capsys):
    code, out, _ = run(capsys, "conjugacy", "--p", "2", "--d", "4", "--c1-num", "4", "--c2-num", "2",
                       "--terms", "48")
    doc = json.loads(out)
    assert code == 0
    assert doc["verified"] is True
    assert doc["separation_holds"] is True
    assert [o["omega"] for o in doc["omegas"]] == [1]
    assert doc["omegas"][0]["disk_log_p"] == "1/2"


def test_conjugacy_hypothesis_failure(capsys):
    code, out, err = run(capsys, "conjugacy", "--p", "2", "--d", "4", "--c1-num", "1", "--c2-num", "2")
    assert code == 2
    assert out == ""
    assert err


def test_conjugacy_c1_zero(capsys):
    code, _, _ = run(capsys, "conjugacy", "--p", "2", "--d", "4", "--c1-num", "0", "--c2-num", "8",
                     "--terms", "16")
    assert code == 0


# -- lemmas and scan ----------------------------------------------------------


def test_lemmas_defaults(capsys):
    code, out, _ = run(capsys, "lemmas")
    table = rows(out)
    assert code == 0
    assert {r["lemma"] for r in table} >= {"factorial-divisibility", "digit-exchange",
                                          "canonical-factorial", "legendre"}
    assert all(r["failed"] == "0" for r in table)


def test_lemmas_tiny_bound(capsys):
    code, _, _ = run(capsys, "lemmas", "--max-n", "1")
    assert code == 0


def test_lemmas_digit_exchange_d9(capsys):
    code, out, _ = run(capsys, "lemmas", "--lemma", "digit-exchange", "--d", "9", "--max-n", "100")
    assert code == 0
    assert rows(out)[0]["failed"] == "0"


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--p", "2", "--d", "4", "--c-min", "1", "--c-max", "8",
                       "--terms", "12")
    table = rows(out)
    assert code == 0
    assert len(table) == 8
    tags = {r["c"]: r["tag"] for r in table}
    assert tags["2/1"] == "A" and tags["8/1"] == "B"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "boettcher", "radius", "--conjecture", "--p", "2", "--r", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["inv_radius_log_p"] == "-1/8"
