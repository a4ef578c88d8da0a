import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest
from hypothesis import given

from conftest import pref_dicts
from fixtures import C6, EX1, LAT3, NON_REDUCIBLE, NOSM, TWO_C6, ps
from roommates import ParseError, PreferenceSystem
from roommates.cli import run
from roommates.formats import (
    format_instance,
    format_matching,
    format_point,
    parse_instance,
    parse_matching,
    parse_point,
    parse_weights,
)

SCHEMA = json.loads(resources.files("roommates").joinpath("schema/report.schema.json").read_text())


def text_of(d):
    return format_instance(PreferenceSystem(d))


@pytest.fixture
def files(tmp_path):
    def write(name, content):
        p = tmp_path / name
        p.write_text(content)
        return str(p)

    write("ex1.sm", "# six agents\n" + text_of(EX1))
    write("nosm.sm", text_of(NOSM))
    write("c6.sm", text_of(C6))
    write("lat3.sm", text_of(LAT3))
    write("nonred.sm", text_of(NON_REDUCIBLE[0]))
    write("2c6.sm", text_of(TWO_C6))
    write("c6.w", "1 2 5\n2 3 1\n3 4 1\n4 5 1\n5 6 1\n1 6 1\n")
    write("lat3.w", "".join(f"{u} {v} 1\n" for u, v in PreferenceSystem(LAT3).edges))
    write("partial.w", "1 2 5\n")
    write("bad.w", "1 3 2\n")
    write("neg.w", "1 2 -1\n")
    write("ex1.m", "1 4\n2 5\n3 6\n")
    write("ex1bad.m", "1 2\n3 6\n4 5\n")
    write("y.pt", "1 3 1/2\n3 5 1/2\n1 5 1/2\n2 4 1/2\n4 6 1/2\n2 6 1/2\n")
    write("broken.sm", "1: 2\n2: 3\n3: 2\n")
    write("garbage.sm", "1 - 2\n")
    return tmp_path


def invoke(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], buf)
    return code, buf.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv, "--json")
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return code, report


class TestExitCodes:
    def test_solve(self, files):
        code, text = invoke("solve", files / "ex1.sm")
        assert code == 0 and text == "stable matching: 1-4 2-5 3-6\n"
        code, report = invoke_json("solve", files / "ex1.sm")
        assert code == 0 and report["result"]["stable_matching"] == [[1, 4], [2, 5], [3, 6]]
        code, text = invoke("solve", files / "nosm.sm")
        assert code == 1 and "no stable matching" in text

    def test_optimize(self, files):
        code, report = invoke_json("optimize", files / "c6.sm", "--weights", files / "c6.w", "--method", "exact")
        assert code == 0 and report["result"]["weight"] == "3/1"
        code, report = invoke_json("optimize", files / "c6.sm", "--weights", files / "c6.w", "--max")
        assert code == 0 and report["result"]["weight"] == "7/1"
        code, report = invoke_json("optimize", files / "c6.sm", "--weights", files / "c6.w", "--method", "approx")
        assert code == 0 and report["result"]["weight"] == "3/1" and report["result"]["path"] == "integral"
        code, report = invoke_json("optimize", files / "c6.sm", "--weights", files / "c6.w", "--method", "brute")
        assert code == 0 and report["result"]["weight"] == "3/1"

    def test_preconditions(self, files):
        code, report = invoke_json("optimize", files / "lat3.sm", "--weights", files / "lat3.w", "--method", "approx")
        assert code == 2 and report["status"] == "precondition"
        code, _ = invoke("optimize", files / "nonred.sm", "--weights", files / "partial.w", "--method", "exact")
        assert code == 2
        code, _ = invoke("optimize", files / "nosm.sm", "--weights", files / "partial.w", "--method", "brute")
        assert code == 1

    def test_usage_and_parse_errors(self, files):
        assert invoke("frobnicate")[0] == 3
        assert invoke("solve")[0] == 3
        assert invoke("solve", files / "missing.sm")[0] == 3
        assert invoke("solve", files / "broken.sm")[0] == 3
        assert invoke("solve", files / "garbage.sm")[0] == 3
        assert invoke("optimize", files / "c6.sm", "--weights", files / "bad.w")[0] == 3
        assert invoke("optimize", files / "c6.sm", "--weights", files / "neg.w")[0] == 3
        assert invoke("optimize", files / "c6.sm", "--weights", files / "c6.w", "--method", "approx", "--max")[0] == 3
        assert invoke("enumerate", files / "c6.sm", "--limit", "-1")[0] == 3
        code, report = invoke_json("reduce", files / "c6.sm", "--emit", "nope")
        assert code == 3 and report["status"] == "usage_error"

    def test_missing_weights_warn(self, files):
        code, report = invoke_json("optimize", files / "c6.sm", "--weights", files / "partial.w")
        assert code == 0 and report["warnings"]


class TestSubcommands:
    def test_reduce(self, files):
        _, report = invoke_json("reduce", files / "ex1.sm")
        assert report["result"]["instance"] == {"1": [4], "2": [5], "3": [6], "4": [1], "5": [2], "6": [3]}
        _, report = invoke_json("reduce", files / "ex1.sm", "--emit", "em")
        assert report["result"]["in_em"] == [[1, 4], [2, 5], [3, 6]]
        _, report = invoke_json("reduce", files / "ex1.sm", "--emit", "log")
        assert len(report["result"]["removal_log"]) == 9
        _, report = invoke_json("reduce", files / "ex1.sm", "--emit", "gi")
        assert sorted(map(tuple, report["result"]["removed"])) == [(1, 2), (2, 3), (4, 5)]

    def test_check(self, files):
        code, report = invoke_json("check", files / "ex1.sm", files / "ex1.m")
        assert code == 0 and report["result"]["stable"] is True
        code, report = invoke_json("check", files / "ex1.sm", files / "ex1bad.m")
        assert code == 0 and report["result"]["stable"] is False and report["result"]["blocking_edge"]

    def test_reducible(self, files):
        _, report = invoke_json("reducible", files / "c6.sm")
        assert report["result"]["reducible"] is True
        _, report = invoke_json("reducible", files / "nonred.sm")
        assert report["result"]["reducible"] is False and len(report["result"]["odd_cycle"]) % 2 == 1

    def test_enumerate(self, files):
        code, report = invoke_json("enumerate", files / "2c6.sm")
        assert code == 0 and report["result"]["count"] == 3
        _, report = invoke_json("enumerate", files / "2c6.sm", "--limit", "1")
        assert report["result"]["count"] == 1
        assert invoke("enumerate", files / "nosm.sm")[0] == 1

    def test_polytope(self, files):
        code, report = invoke_json("polytope", files / "ex1.sm", "--point", files / "y.pt")
        assert code == 0 and report["result"]["member"] is True
        code, report = invoke_json("polytope", files / "ex1.sm", "--point", files / "y.pt", "--variant", "fsm-prime")
        assert code == 0 and report["result"]["member"] is False
        code, _ = invoke_json("polytope", files / "ex1.sm", "--point", files / "y.pt", "--variant", "fsm-bar")
        assert code == 2  # coordinates outside E_M


class TestReports:
    def test_deterministic_payload(self, files):
        for argv in (
            ("solve", files / "ex1.sm"),
            ("reduce", files / "2c6.sm", "--emit", "log"),
            ("optimize", files / "2c6.sm", "--weights", files / "partial.w", "--method", "approx"),
        ):
            a, b = invoke_json(*argv)[1], invoke_json(*argv)[1]
            a["stats"].pop("elapsed_seconds")
            b["stats"].pop("elapsed_seconds")
            assert a == b

    def test_digest_ignores_formatting(self, files, tmp_path):
        messy = tmp_path / "messy.sm"
        messy.write_text("# comment\n\n" + text_of(EX1).replace(": ", ":   ") + "   # trailing\n")
        assert invoke_json("solve", messy)[1]["instance"] == invoke_json("solve", files / "ex1.sm")[1]["instance"]

    def test_console_script(self, files):
        out = subprocess.run(
            [sys.executable, "-m", "roommates", "solve", str(files / "ex1.sm")], capture_output=True, text=True
        )
        assert out.returncode == 0 and out.stdout.startswith("stable matching")


class TestFormats:
    @given(pref_dicts(max_n=9))
    def test_instance_round_trip(self, d):
        P = ps(d)
        text = format_instance(P)
        Q = parse_instance(text)
        assert Q == P and format_instance(Q) == text

    def test_matching_and_point_round_trip(self):
        P = ps(EX1)
        M = parse_matching("1 4\n2 5\n3 6\n", P)
        assert parse_matching(format_matching(M), P) == M
        pt = parse_point("1 3 1/2\n3 5 0.5\n2 4 1\n")
        assert parse_point(format_point(pt)) == pt

    @pytest.mark.parametrize(
        "text",
        ["1: 2\n", "1: 2\n2: 1\n1: 2\n", "x: 2\n", "1 2\n", "1: 1\n"],
    )
    def test_instance_errors(self, text):
        with pytest.raises(ParseError):
            parse_instance(text)

    def test_error_line_numbers(self):
        with pytest.raises(ParseError) as exc:
            parse_instance("# header\n1: 2\n2: 1\nbad line\n")
        assert exc.value.line == 4 and "line 4" in str(exc.value)

    def test_weights(self):
        P = ps(C6)
        w = parse_weights("1 2 3/2\n2 3 0.25\n", P)
        assert w[(1, 2)] == 1.5 and w[(2, 3)] == 0.25 and w[(3, 4)] == 0
        for bad in ("1 2 1\n2 1 1\n", "1 3 1\n", "1 2 -1\n", "1 2\n", "1 2 x\n"):
            with pytest.raises(ParseError):
                parse_weights(bad, P)

    def test_bad_matching(self):
        with pytest.raises(ParseError):
            parse_matching("1 2\n1 6\n", ps(C6))
