import io
import json

import pytest

from fibmult import cli
from fibmult.cartesian import CartesianStructure
from fibmult.errors import BadFlags, PresentationSyntaxError, ReservedLabel, UndeclaredId, UnknownCommand
from fibmult.standard import gen_example


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def fixture_text(name):
    with open(cli.fixture_path(name), encoding="utf-8") as fh:
        return fh.read()


def test_dumps_wraps_long_values():
    assert cli.dumps({"a": [1, 2]}) == '{"a": [1, 2]}'
    text = cli.dumps({"k": list(range(40))})
    assert text.startswith("{\n \"k\": [\n  0,") and json.loads(text) == {"k": list(range(40))}


def test_parse_errors_carry_location():
    with pytest.raises(PresentationSyntaxError) as e:
        cli.parse_presentation('{"format_version": 1,\n "base": }')
    assert (e.value.line, e.value.column) == (2, 10)
    with pytest.raises(PresentationSyntaxError) as e:
        cli.parse_presentation('{"format_version": 1,\n "base": {"kind": "finset", "size_bound": 2},\n "bogus": 1}')
    assert e.value.line == 3
    with pytest.raises(PresentationSyntaxError):
        cli.parse_presentation('{"format_version": 2, "base": {"kind": "finset", "size_bound": 2}}')
    with pytest.raises(PresentationSyntaxError):
        cli.parse_presentation('[1]')


def test_reserved_label_in_extra_set():
    text = json.dumps({"format_version": 1, "generator": {"name": "terminal"},
                       "base": {"kind": "finset", "size_bound": 2,
                                "extra": [{"label": "S", "elements": ["a|b"]}]}})
    with pytest.raises(ReservedLabel):
        cli.parse_presentation(text)


def test_undeclared_id():
    text = fixture_text("terminal_b2_explicit.json").replace('["t1", "x0", "x1"]', '["t1", "x0", "x9"]', 1)
    with pytest.raises(UndeclaredId) as e:
        cli.parse_presentation(text)
    assert e.value.line is not None


def test_explicit_matches_generated():
    pres = cli.parse_presentation(fixture_text("ring_z2_b2_explicit.json"))
    fm = gen_example("ring", {"n": 2}, 2)
    assert cli.to_presentation(fm, CartesianStructure(fm)) == pres
    fm2, cs2 = cli.build_instance(pres)
    assert (len(fm2.objects), fm2.D.n_arrows(), fm2.M.n_arrows(), len(fm2.special), len(cs2.triangles)) \
        == (3, 11, 29, 223, 129)


def test_gen_and_round_trip(tmp_path):
    out = tmp_path / "t.json"
    code, _, _ = run("gen", "terminal", "--bound", "3", "--out", str(out))
    assert code == 0 and out.read_text() == fixture_text("terminal_b3.json")
    code, text, _ = run("gen", "ring", "--params", '{"n": 3}', "--bound", "2")
    assert code == 0 and text == fixture_text("ring_z3_b2.json")


def test_report_is_deterministic():
    a = run("check", cli.fixture_path("terminal_b3.json"), "--format", "machine")[1]
    b = run("check", cli.fixture_path("terminal_b3.json"), "--format", "machine")[1]
    ra, rb = cli.parse_report(a), cli.parse_report(b)
    ra.pop("timing"), rb.pop("timing")
    assert ra == rb and ra["status"] == "ok"
    assert ra["instance_digest"] == cli.digest(cli.parse_presentation(fixture_text("terminal_b3.json")))
    assert [c["name"] for c in ra["checks"]] == ["axioms", "extensivity"]


def test_human_rendering():
    code, text, _ = run("check", cli.fixture_path("ring_z2_b2_mutant.json"))
    assert code == 1
    lines = text.splitlines()
    assert lines[0] == "fibmult check" and lines[-2] == "status    violations"
    assert any(line.startswith("violation axioms: ExistenceViolation(") for line in lines)
    r = cli.parse_report(run("check", cli.fixture_path("ring_z2_b2_mutant.json"), "--format", "machine")[1])
    assert cli.render_human(r) == text.replace(text.splitlines()[-1], f"timing    {r['timing']['seconds']:.3f} s")


def test_reindex_and_coreindex_commands():
    code, text, _ = run("reindex", cli.fixture_path("ring_z2_b3.json"), "--map", "2,3,1", "--names", "a,b,c",
                        "--format", "machine")
    assert code == 0 and cli.parse_report(text)["result"]["values"] == "1↦b, 2↦c, 3↦a"
    code, text, _ = run("coreindex", cli.fixture_path("ring_z2_b3.json"), "--map", "3,1,3",
                        "--values", "1,1,0", "--format", "machine")
    assert code == 0
    # (b, c, a) = (1, 1, 0) goes to (c, 0, b + a)
    assert cli.parse_report(text)["result"]["values"] == "1↦1, 2↦0, 3↦1"


def test_cartesian_commands():
    code, text, _ = run("cartesian-check", cli.fixture_path("ring_z2_b2_explicit.json"), "--format", "machine")
    r = cli.parse_report(text)
    assert code == 0 and {c["name"] for c in r["checks"]} >= {"cartesian_structure", "coherence"}
    code, text, _ = run("convert", cli.fixture_path("ring_z2_b2_explicit.json"), "--format", "machine")
    assert code == 0 and cli.parse_report(text)["result"]["covariant_squares"] == 2533
    code, text, _ = run("equiv", cli.fixture_path("terminal_b2_explicit.json"), "--format", "machine")
    assert code == 0 and cli.parse_report(text)["result"]["verdict"] == "equivalent"


def test_no_cartesian_structure_is_an_input_error():
    code, _, err = run("equiv", cli.fixture_path("chain3_b2.json"))
    assert code == 2 and "cartesian" in err


@pytest.mark.parametrize("argv", [["bogus", "x.json"], ["check", "--nope"], ["check"],
                                  ["check", "/nonexistent.json"], ["gen", "nope"],
                                  ["gen", "ring", "--params", "{"]])
def test_input_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == 2 and err.startswith("error: ")


def test_execute_api():
    with pytest.raises(UnknownCommand):
        cli.execute("nope")
    with pytest.raises(BadFlags):
        cli.execute("check")
    rep = cli.execute("check", cli.parse_presentation(fixture_text("terminal_b3.json")))
    assert rep.exit_code == 0 and rep.status == "ok"


def test_help_exits_0():
    code, text, _ = run("--help")
    assert code == 0 and text.startswith("usage: fibmult")
