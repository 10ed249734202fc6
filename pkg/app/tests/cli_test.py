"""End-to-end runs of the polywitt command line through main()."""

import json
from pathlib import Path
from typing import Any

import pytest

from app.core.config import settings
from app.main import main

COMNU_P1 = {"operad": "ComNu", "generators": [1]}
WEDGE = {
    "operad": "ComNu",
    "generators": [2],
    "relations": [{"degree": 2, "entries": [{"n": 2, "m": 2, "terms": [
        {"map": [1, 2], "decorations": [{"arity": 1}, {"arity": 1}]},
        {"map": [2, 1], "decorations": [{"arity": 1}, {"arity": 1}]},
    ]}]}],
}


def _save_json(name: str, data: Any):
    """Keep a copy of the command output next to the debug logs when debug outputs are on."""
    if not settings.enable_debug_outputs:
        return
    debug_dir = Path(settings.debug_dir)
    debug_dir.mkdir(parents=True, exist_ok=True)
    (debug_dir / name).write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding="utf-8")


def _write(tmp_path, name, data) -> str:
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _run_json(capsys, name, *argv):
    code, out = _run(capsys, *argv)
    assert code == 0, out
    data = json.loads(out)
    _save_json(f"cli_{name}.json", data)
    return data


def _dims(table):
    return {(row["n"], row["m"]): row["dimension"] for row in table["rows"]}


# ---------- homdim ----------

def test_homdim_com(capsys):
    table = _run_json(capsys, "homdim_com", "homdim", "--operad", "Com", "--cap", "3")
    dims = _dims(table)
    assert table["operad"] == "Com"
    assert dims[(3, 2)] == 8
    assert dims[(0, 0)] == 1
    assert len(table["rows"]) == 16


def test_homdim_other_operads(capsys):
    assert _dims(_run_json(capsys, "homdim_comnu", "homdim", "--operad", "comnu"))[(3, 2)] == 6
    trivial = _dims(_run_json(capsys, "homdim_trivial", "homdim", "--operad", "trivial"))
    assert [trivial[(n, n)] for n in range(4)] == [1, 1, 2, 6]
    assert trivial[(2, 1)] == 0


def test_homdim_with_oracle(capsys):
    table = _run_json(capsys, "homdim_oracle", "homdim", "--operad", "Com", "--cap", "2", "--oracle")
    assert all(row["oracle_agrees"] for row in table["rows"])
    assert all(row["oracle"] == row["dimension"] for row in table["rows"])


def test_homdim_csv(capsys):
    code, out = _run(capsys, "homdim", "--cap", "1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,m,dimension,oracle,oracle_agrees"
    assert lines[1:] == ["0,0,1,,", "0,1,1,,", "1,0,0,,", "1,1,1,,"]


def test_homdim_table(capsys):
    code, out = _run(capsys, "homdim", "--cap", "1", "--format", "table")
    assert code == 0
    assert out.splitlines()[0].split() == ["n", "m", "dimension", "oracle", "oracle_agrees"]


# ---------- char / hilbert ----------

def test_char_of_a_projective(capsys, tmp_path):
    path = _write(tmp_path, "p1.json", COMNU_P1)
    result = _run_json(capsys, "char_p1", "char", "--input", path, "-D", "4")
    assert [t["partition"] for t in result["character"]["terms"]] == [[1], [2], [3], [4]]
    assert all(t["coeff"] == "1" for t in result["character"]["terms"])
    assert result["dimensions"] == [0, 1, 1, 1, 1]


def test_char_of_the_wedge_square(capsys, tmp_path):
    path = _write(tmp_path, "wedge.json", WEDGE)
    result = _run_json(capsys, "char_wedge", "char", "--input", path, "-D", "2")
    assert result["character"]["terms"] == [{"partition": [1, 1], "coeff": "1"}]


def test_hilbert_fits_a_geometric_series(capsys, tmp_path):
    path = _write(tmp_path, "p1.json", COMNU_P1)
    result = _run_json(capsys, "hilbert_p1", "hilbert", "--input", path, "-n", "1")
    assert result["D"] == settings.hilbert_degree
    assert result["coefficients"][:4] == ["0", "1", "1", "1"]
    fit = result["fit"]
    assert fit["success"]
    assert fit["form"]["numerator"] == [{"exponents": [1], "coeff": "1"}]
    assert fit["form"]["denominator"] == [{"var": 1, "m": 1, "power": 1}]


def test_hilbert_of_the_wedge_square(capsys, tmp_path):
    path = _write(tmp_path, "wedge.json", WEDGE)
    result = _run_json(capsys, "hilbert_wedge", "hilbert", "--input", path, "-D", "15")
    fit = result["fit"]
    assert fit["success"]
    # denominator degree 2 = d·n is too small, the next budget fits
    assert fit["denominator_budget"] == 3
    assert fit["numerator_budget"] == 6
    assert fit["form"]["vars"] == 1
    assert fit["form"]["numerator"] == [{"exponents": [3], "coeff": "1"}]
    assert fit["form"]["denominator"] == [
        {"var": 1, "m": 1, "power": 1}, {"var": 1, "m": 2, "power": 1}]


def test_hilbert_of_the_zero_module(capsys, tmp_path):
    path = _write(tmp_path, "zero.json", {"operad": "Com"})
    result = _run_json(capsys, "hilbert_zero", "hilbert", "--input", path)
    assert set(result["coefficients"]) == {"0"}
    assert result["fit"]["success"]
    assert result["fit"]["form"]["numerator"] == []
    assert result["fit"]["form"]["denominator"] == []


def test_hilbert_methods_agree(capsys, tmp_path):
    path = _write(tmp_path, "p1.json", COMNU_P1)
    depth = str(settings.enumeration_cap)
    a = _run_json(capsys, "hilbert_specialize", "hilbert", "--input", path, "-D", depth)
    b = _run_json(capsys, "hilbert_character", "hilbert", "--input", path, "-D", depth, "--method", "character")
    assert a["coefficients"] == b["coefficients"]
    assert len(a["coefficients"]) == settings.enumeration_cap + 1
    assert a["fit"] == b["fit"]
    assert a["fit"]["success"]
    assert a["fit"]["numerator_budget"] == 2


def test_short_window_is_extended_for_the_fit(capsys, tmp_path):
    path = _write(tmp_path, "wedge.json", WEDGE)
    result = _run_json(capsys, "hilbert_wedge_short", "hilbert", "--input", path, "-D", "6")
    assert result["coefficients"] == ["0", "0", "0", "1", "1", "2", "2"]
    fit = result["fit"]
    assert fit["success"]
    assert fit["fit_window"] > 6
    assert fit["form"]["numerator"] == [{"exponents": [3], "coeff": "1"}]


COMNU_P2 = {"operad": "ComNu", "generators": [2]}


def test_hilbert_of_p2_in_two_variables(capsys, tmp_path):
    # (1 − (1 − t)^2)^2 / (1 − t)^4
    path = _write(tmp_path, "p2.json", COMNU_P2)
    result = _run_json(capsys, "hilbert_p2_n2", "hilbert", "--input", path, "-n", "2")
    assert result["coefficients"][:5] == ["0", "0", "4", "12", "25"]
    fit = result["fit"]
    assert fit["success"]
    assert fit["denominator_budget"] == 4
    assert fit["form"]["numerator"] == [
        {"exponents": [2], "coeff": "4"}, {"exponents": [3], "coeff": "-4"}, {"exponents": [4], "coeff": "1"}]
    assert fit["form"]["denominator"] == [{"var": 1, "m": 1, "power": 4}]


def test_hilbert_of_p2_in_three_variables(capsys, tmp_path):
    # (1 − (1 − t)^3)^2 / (1 − t)^6
    path = _write(tmp_path, "p2.json", COMNU_P2)
    result = _run_json(capsys, "hilbert_p2_n3", "hilbert", "--input", path, "-n", "3")
    assert result["D"] == settings.hilbert_degree
    assert result["coefficients"][:4] == ["0", "0", "9", "36"]
    fit = result["fit"]
    assert fit["success"]
    assert fit["denominator_budget"] == 6
    assert fit["form"]["numerator"] == [
        {"exponents": [2], "coeff": "9"}, {"exponents": [3], "coeff": "-18"}, {"exponents": [4], "coeff": "15"},
        {"exponents": [5], "coeff": "-6"}, {"exponents": [6], "coeff": "1"}]
    assert fit["form"]["denominator"] == [{"var": 1, "m": 1, "power": 6}]


# ---------- verify / charexp ----------

def test_verify_wedge2(capsys):
    result = _run_json(capsys, "verify_wedge2", "verify", "wedge2")
    assert result["passed"]
    assert [s["name"] for s in result["scenarios"]] == ["wedge2"]


def test_charexp(capsys):
    result = _run_json(capsys, "charexp", "charexp", "--A", "1", "-D", "4", "-n", "1")
    assert result["A"] == [1]
    assert result["rhs"] == []
    assert [t["nu"] for t in result["exponential"]] == [[]]
    assert [t["coeff"] for t in result["specialized"]["terms"]] == ["1"] * 5


def test_charexp_expansion_terms(capsys):
    result = _run_json(capsys, "charexp_r2", "charexp", "--A", "2,1", "--r", "2", "--k", "1", "-D", "4")
    assert result["A"] == [2, 1]
    assert [t["nu"] for t in result["rhs"]] == [[1]]


# ---------- Errors ----------

@pytest.mark.parametrize("argv", [
    ["homdim", "--operad", "lie"],
    ["char"],
    ["hilbert", "--input", "/nonexistent/presentation.json"],
    ["plot"],
    ["verify", "nope"],
    ["charexp", "--A", "1", "--r", "0"],
])
def test_bad_arguments_exit_with_two(capsys, argv):
    code, out = _run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_malformed_json_exits_with_two(capsys, tmp_path):
    path = _write(tmp_path, "bad.json", '{"operad": "Com", "generators": [1,')
    code, _ = _run(capsys, "char", "--input", path)
    assert code == 2
    path = _write(tmp_path, "typo.json", {"operad": "Lie", "generators": [1]})
    code, _ = _run(capsys, "char", "--input", path)
    assert code == 2


def test_cap_exceeded_exits_with_three(capsys):
    code, out = _run(capsys, "homdim", "--cap", str(settings.enumeration_cap + 1))
    assert code == 3
    assert out == ""


# ---------- Determinism ----------

def test_identical_runs_give_identical_output(capsys, tmp_path):
    path = _write(tmp_path, "wedge.json", WEDGE)
    first = _run(capsys, "char", "--input", path, "-D", "5", "--format", "csv")
    second = _run(capsys, "char", "--input", path, "-D", "5", "--format", "csv")
    assert first == second
    assert first[0] == 0
