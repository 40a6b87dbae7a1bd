import io
import json
from pathlib import Path

import pytest

from mpvar.cli import FieldStmt, LetStmt, MapStmt, QueryStmt, SpaceStmt, main, parse_script, render_script, \
    run_script
from mpvar.errors import AssertionFailed, ParseError, ScriptError

SCRIPT = Path(__file__).resolve().parent.parent / "scripts" / "cubic_fourfold.mpv"

# Reference session output, with four deliberate differences: projective degree
# lists are d_0 first, purity is not computed, the base change on line 21 echoes
# its binding, and the sampled point binds with ':' like every other variety.
REFERENCE = """\
o3 : RationalMap (linear rational map from PP^5 to PP^2)
o4 : RationalMap (linear rational map from PP^5 to PP^2)
o5 : MultirationalMap (rational map from PP^5 to PP^2 x PP^2)
o6 : ProjectiveVariety, hypersurface in PP^5
o7 : MultirationalMap (rational map from X to PP^2 x PP^2)
o8 = true
o9 = 1
o10 : MultirationalMap (birational map from PP^2 x PP^2 to X)
o11 = ambient:.............. PP^2 x PP^2
      dim:.................. 2
      codim:................ 2
      degree:............... 14
      multidegree:.......... 2 T_0^2 + 5 T_0 T_1 + 2 T_1^2
      generators:........... (2,1)^1 (1,2)^1
      purity:............... not computed
      dim sing. l.:......... -1
o13 = ({3, 9, 25, 63, 141}, {6, 18, 40, 78, 141})
o14 : MultirationalMap (birational map from PP^2 x PP^2 to 4-dimensional subvariety of PP^5 x PP^2 x PP^2)
o15 = (true, true, false)
o16 = true
o17 : ProjectiveVariety, threefold in PP^5 x PP^2 x PP^2
o18 = (3, 48)
o19 : MultirationalMap (birational map from 4-dimensional subvariety of PP^5 x PP^2 x PP^2 x PP^2 x PP^2 \
to 4-dimensional subvariety of PP^5 x PP^2 x PP^2)
o20 = (771, 141)
o21 : MultirationalMap (birational map from 4-dimensional subvariety of PP^5 x PP^2 x PP^2 x PP^2 x PP^2 \
to 4-dimensional subvariety of PP^5 x PP^2 x PP^2)
o22 : ProjectiveVariety, a point in PP^5 x PP^2 x PP^2 x PP^2 x PP^2
o23 = true
"""


@pytest.fixture(scope="module")
def script_text():
    return SCRIPT.read_text()


@pytest.fixture(scope="module")
def text_output(script_text):
    out = io.StringIO()
    run_script(script_text, field="GF:65537", out=out)
    return out.getvalue()


@pytest.fixture(scope="module")
def json_records(script_text):
    sess = run_script(script_text, field="GF:65537")
    return [r.to_json() for r in sess.records]


def _write(tmp_path, text, name="s.mpv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# -- parsing ---------------------------------------------------------------------


def test_session_parses_to_23_statements(script_text):
    stmts = parse_script(script_text)
    assert len(stmts) == 23
    assert isinstance(stmts[0], FieldStmt)
    assert isinstance(stmts[1], SpaceStmt)
    assert isinstance(stmts[2], MapStmt)
    assert isinstance(stmts[11], LetStmt) and stmts[11].render() == "let (p1, p2) = graph(Phi)"
    assert isinstance(stmts[-1], QueryStmt)


def test_render_parse_roundtrip(script_text):
    once = render_script(parse_script(script_text))
    assert render_script(parse_script(once)) == once


def test_small_statements_parse():
    stmts = parse_script("field GF 7\nspace P = PP(2,2)\nspace Q = PP(5) vars t,u,v,x,y,z\n"
                         "map f : Q -> PP(2) = [t,u,v]\n")
    assert stmts[1].dims == [2, 2]
    assert stmts[3].render() == "map f : Q -> PP(2) = [t, u, v]"


@pytest.mark.parametrize("text,line,column", [
    ("field QQ\nlet x = (1, )\n", 2, 12),
    ("field QQ\nprnt 3\n", 2, 1),
    ("field QQ\nspace Q = PP(2) vars x,y,z\nprint degree(Q) ==\n", 3, 19),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_script(text)
    assert (info.value.line, info.value.column) == (line, column)


# -- execution -------------------------------------------------------------------


def test_golden_text_output(text_output):
    assert text_output == REFERENCE


def test_json_values(json_records):
    by_line = {r["line"]: r for r in json_records}
    prints = [r for r in json_records if r["kind"] == "print"]
    assert [r["value"] for r in prints[:2]] == [True, 1]
    degs = next(r for r in prints if isinstance(r["value"], list) and len(r["value"]) == 2
                and isinstance(r["value"][0], list))
    assert degs["value"] == [[3, 9, 25, 63, 141], [6, 18, 40, 78, 141]]
    desc = next(r for r in json_records if r["kind"] == "describe")
    assert desc["value"]["multidegree"]["terms"] == [
        {"exponents": [2, 0], "coefficient": 2},
        {"exponents": [1, 1], "coefficient": 5},
        {"exponents": [0, 2], "coefficient": 2},
    ]
    assert by_line[max(by_line)]["value"] is True


def test_projdegrees_record(tmp_path, capsys):
    text = SCRIPT.read_text().split("print (projdegrees")[0] + "print projdegrees(p1)\n"
    assert main(["run", _write(tmp_path, text), "--json", "--field", "GF:65537"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert records[-1]["value"] == [3, 9, 25, 63, 141]


def test_json_is_deterministic(tmp_path, capsys):
    path = _write(tmp_path, SCRIPT.read_text())
    outs = []
    for _ in range(2):
        assert main(["run", path, "--json", "--seed", "3", "--field", "GF:65537"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_assert_record_and_exit_codes(tmp_path, capsys):
    ok = "field GF 101\nspace Q = PP(2) vars x,y,z\nmap f : Q -> PP(2) = [y*z, x*z, x*y]\nassert degree(f) == 1\n"
    assert main(["run", _write(tmp_path, ok), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)[-1] == {"line": 4, "kind": "assert", "value": True}
    bad = ok.replace("== 1", "== 2")
    assert main(["run", _write(tmp_path, bad)]) == 1
    assert "line 4" in capsys.readouterr().err


def test_assert_failure_on_the_cubic_map(tmp_path):
    text = SCRIPT.read_text().split("print image(Phi)")[0] + "assert degree(Phi) == 2\n"
    with pytest.raises(AssertionFailed) as info:
        run_script(text, field="GF:65537")
    # physical line of the appended statement
    assert info.value.line == text.count("\n")


def test_runtime_errors_cite_the_line(tmp_path, capsys):
    text = "field GF 101\nspace Q = PP(2) vars x,y,z\nmap f : Q -> PP(2) = [x^2,y^2,z^2]\nlet g = inverse(f)\n"
    with pytest.raises(ScriptError) as info:
        run_script(text)
    assert info.value.line == 4
    assert main(["run", _write(tmp_path, text)]) == 2
    assert "line 4: NotBirational" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path, capsys):
    assert main(["run", _write(tmp_path, "field QQ\nprnt 3\n")]) == 2
    assert "line 2, column 1" in capsys.readouterr().err


def test_empty_script(tmp_path, capsys):
    assert main(["run", _write(tmp_path, ""), "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == []


def test_field_override_changes_characteristic():
    text = "field QQ\nspace Q = PP(2) vars x,y,z\nvariety C = V(Q; x^2 + y^2 + z^2)\nlet p = point(C)\n"
    with pytest.raises(ScriptError):
        run_script(text)
    sess = run_script(text, field="GF:101")
    assert sess.records[-1].to_json()["value"]["type"] == "ProjectiveVariety"
