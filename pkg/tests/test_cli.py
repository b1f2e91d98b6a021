import io
import json

import pytest

from apolarity.cli import run
from apolarity.parser import parse_poly


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_analyze_json_sorted_and_strings():
    code, out, _ = _run(["analyze", "--vars", "3", "--field", "q", "x1^[5]+x2^[4]+x3^[3]", "--json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["hilbert_function"] == ["1", "3", "3", "2", "1", "1"]
    assert rep["symmetric_decomposition"][1] == ["0", "1", "1", "1", "0"]
    assert out.strip() == json.dumps(rep, sort_keys=True, ensure_ascii=False)

    def walk(obj):
        if isinstance(obj, dict):
            for v in obj.values():
                walk(v)
        elif isinstance(obj, list):
            for v in obj:
                walk(v)
        else:
            assert isinstance(obj, (str, bool)), obj

    walk(rep)


def test_tangent_command():
    code, out, _ = _run(["tangent", "--vars", "6", "x1*x2*x4 - x1*x5^[2] + x2*x3^[2] + x3*x5*x6 + x4*x6^[2]"])
    assert code == 0
    assert "tangent_dim: 76" in out.splitlines()


def test_hilbert_single_variable():
    code, out, _ = _run(["hilbert", "--vars", "1", "x1", "--json"])
    assert code == 0
    assert json.loads(out)["hilbert_function"] == ["1", "1"]


def test_echo_reparses_identically():
    text = "1/2*x1^[2] - x2 + 3*x1*x2^[2]"
    code, out, _ = _run(["hilbert", text, "--json"])
    echo = json.loads(out)["input"]
    assert parse_poly(echo) == parse_poly(text)
    code2, out2, _ = _run(["hilbert", echo, "--json"])
    assert out2 == out


def test_deterministic_output():
    argv = ["analyze", "x1^[4] + x1^[2]*x2", "--json"]
    assert _run(argv)[1] == _run(argv)[1]


def test_parse_error_exit_code():
    code, out, err = _run(["hilbert", "x1^2"])
    assert code == 1 and not out
    assert "column" in err and "^[k]" in err


def test_precondition_exit_code():
    code, _, err = _run(["standard-form", "--field", "fp:2", "x1^[4] + x1^[2]*x2"])
    assert code == 2
    assert "error" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate", "x1"])
    assert exc.value.code == 1


def test_missing_ray_partial():
    code, _, err = _run(["raysum", "x1^[2]"])
    assert code == 2 and "--ray-partial" in err


def test_raysum_and_flatness():
    code, out, _ = _run(["raysum", "x1^[2]*x3 + x2^[2]*x3", "--ray-partial", "dx1*dx3", "--json"])
    rep = json.loads(out)
    assert rep["ray_sum_hilbert_function"] == ["1", "4", "4", "1"]
    assert rep["annihilator_formula_matches"] is True
    code, out, _ = _run(["flatness", "x1^[2]*x3 + x2^[2]*x3 + x4^[2]*x1", "--ray-partial", "dx1*dx4", "--json"])
    assert json.loads(out)["flatness_holds"] is True


def test_analyze_embeds_section_errors():
    code, out, _ = _run(["analyze", "--field", "fp:2", "x1^[4] + x1^[2]*x2", "--json"])
    assert code == 0
    rep = json.loads(out)
    assert "error" in rep["standard_form"]
    assert rep["hilbert_function"] == ["1", "2", "1", "1", "1"]


def test_catalecticant_and_gm_limit():
    code, out, _ = _run(["catalecticant", "x1^[4]+x2^[4]+x3^[4]", "--cat-degree", "2", "--secant-r", "2", "--json"])
    rep = json.loads(out)
    assert rep["catalecticant_ranks"] == {"2": "3"}
    assert rep["secant"]["member"] is False
    code, out, _ = _run(["gm-limit", "x1^[5]+x2^[4]+x3^[3]", "--json"])
    assert json.loads(out)["colength"] == "11"


def test_out_file_and_json_lines(tmp_path):
    src = tmp_path / "in.txt"
    src.write_text("# two inputs\nx1^[2]\nx1*x2\n")
    dest = tmp_path / "report.jsonl"
    code, out, _ = _run(["hilbert", "--file", str(src), "--json", "--out", str(dest)])
    assert code == 0 and out == ""
    lines = dest.read_text().splitlines()
    assert [json.loads(x)["hilbert_function"] for x in lines] == [["1", "1", "1"], ["1", "2", "1"]]


def test_zero_input():
    code, _, err = _run(["hilbert", "0"])
    assert code == 2
