import json
import subprocess
import sys

import pytest

from lgorbifold.cli import ConfigError, load_config, main, run
from lgorbifold.scalars import CycScalar

from conftest import algebra

X3 = """[model]
nvars = 1
W = x^3

[group]
order = 3
generators = 1
"""


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="model.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def js(argv):
    code, text = run(["--format", "json"] + argv)
    return code, json.loads(text)


def test_sectors(cfg):
    code, doc = js(["--config", cfg(X3), "sectors"])
    assert code == 0
    assert [(s["sector"], s["dim"], s["parity"]) for s in doc["sectors"]] == [
        ("e", 2, "even"), ("(1)", 1, "odd"), ("(2)", 1, "odd")]
    assert doc["sectors"][0]["basis"] == ["1", "x1"]


def test_sigma_json_round_trip(cfg):
    code, doc = js(["--config", cfg(X3), "sigma", "1", "2"])
    assert code == 0 and doc["t"] == 1
    A = algebra("fermat3")
    e, z, z2 = A.group
    coeffs = [CycScalar.from_json({"coeffs": c, "order": doc["class"]["order"]})
              for c in doc["class"]["coeffs"]]
    assert coeffs == list(A.sigma(z, z2).coeffs)


def test_sigma_identity_element(cfg):
    code, doc = js(["--config", cfg(X3), "sigma", "e", "1"])
    assert doc["value"] == "1"


def test_deterministic_apart_from_timing(cfg):
    path = cfg(X3)
    a = js(["--config", path, "table"])[1]
    b = js(["--config", path, "--jobs", "1", "table"])[1]
    a.pop("timing")
    b.pop("timing")
    assert a == b


def test_table_and_invariants(cfg):
    code, doc = js(["--config", cfg(X3), "table"])
    pairs = {(s["g"], s["h"]) for s in doc["sigma"]}
    assert ("(1)", "(2)") in pairs and ("(1)", "(1)") not in pairs
    assert doc["invariants"]["dims"] == {"even": 1, "odd": 0}
    code, doc = js(["--preset", "surface2", "invariants"])
    assert doc["dims"] == {"even": 2, "odd": 4}


def test_plain_and_latex(cfg):
    path = cfg(X3)
    code, text = run(["--config", path, "sigma", "1", "2"])
    assert "value: (-2 - z)*x1" in text
    code, text = run(["--config", path, "--format", "latex", "table"])
    assert text.count("\\begin{tabular}") == 2 and "\\zeta" in text
    code, text = run(["--config", path, "--format", "latex", "table", "--invariants-only"])
    assert text.count("\\begin{tabular}") == 1


def test_check_passes(cfg):
    code, doc = js(["--config", cfg(X3), "check"])
    assert code == 0 and doc["passed"]
    names = {r["name"] for r in doc["results"]}
    assert {"braided", "assoc", "conjugation", "chain_cup_oracle"} <= names


def test_check_single_suite():
    code, doc = js(["--preset", "chain33", "check", "--suite", "braided"])
    assert code == 0 and [r["name"] for r in doc["results"]] == ["braided"]


def test_corrupted_table_exit_3(cfg):
    code, doc = js(["--config", cfg(X3 + "\n[sigma]\n1;2 = 0\n"), "check", "--suite", "braided"])
    assert code == 3 and not doc["passed"]
    assert doc["results"][0]["witness"]


def test_oracle_preset():
    code, doc = js(["--preset", "chain33", "oracle"])
    assert code == 0
    assert [r["name"] for r in doc["results"]] == [
        "conjugation", "chain_cup_oracle", "sector_dimension_oracle"]


def test_compare_jac():
    code, doc = js(["--preset", "chain34", "compare-jac"])
    assert code == 0 and doc["verdict"] == "isomorphic_via_rescaling"
    assert doc["factors"] == ["chain(3,4)"] and doc["order"] == 24
    code, doc = js(["--preset", "fermat3x3", "compare-jac"])
    assert doc["verdict"] == "inconclusive" and doc["reason"]


def test_compare_jac_not_invertible(cfg):
    text = X3.replace("nvars = 1", "nvars = 2").replace("x^3", "x1^3+x2^3+x1*x2") \
        .replace("generators = 1", "generators = 0,0")
    code, text = run(["--config", cfg(text), "compare-jac"])
    assert code == 1 and "not an invertible polynomial" in text


def test_surface_command():
    code, doc = js(["surface", "--genus", "2"])
    assert code == 0 and doc["isomorphic"] and doc["milnor_dim"] == 14
    assert set(doc["c_over_closed_form"].values()) == {"-1"}
    assert run(["surface", "--genus", "1"])[0] == 1


def test_parse_error_location(cfg):
    path = cfg(X3.replace("x^3", "x^3 + * x"), "bad.ini")
    code, text = run(["--config", path, "sectors"])
    assert code == 1 and "bad.ini:3:6" in text
    with pytest.raises(ConfigError):
        load_config(path)


@pytest.mark.parametrize("old,new", [
    ("order = 3", "order = three"),
    ("generators = 1", "generators = 1,x"),
    ("generators = 1", "generators = 2,1"),
    ("[group]", "[groop]"),
])
def test_validation_errors(cfg, old, new):
    assert run(["--config", cfg(X3.replace(old, new)), "sectors"])[0] == 1


def test_bad_options(cfg):
    assert run(["--config", cfg(X3 + "\n[options]\nlocal = maybe\n"), "sectors"])[0] == 1
    assert run(["--config", cfg(X3), "sigma", "1,2", "1"])[0] == 1
    assert run(["--config", cfg(X3), "sigma", "one", "1"])[0] == 1
    assert run(["sectors"])[0] == 1


def test_non_isolated_exit_2(cfg):
    text = X3.replace("nvars = 1", "nvars = 2").replace("x^3", "x1^3") \
        .replace("generators = 1", "generators = 1,0")
    code, text = run(["--config", cfg(text), "sectors"])
    assert code == 2 and "non-isolated" in text


def test_main_streams(cfg, capsys):
    assert main(["--config", cfg(X3), "sectors"]) == 0
    assert "sectors:" in capsys.readouterr().out
    assert main(["sectors"]) == 1
    assert "error" in capsys.readouterr().err


def test_module_entry_point(cfg):
    r = subprocess.run([sys.executable, "-m", "lgorbifold", "--config", cfg(X3), "sigma", "1", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "(-2 - z)*x1" in r.stdout
