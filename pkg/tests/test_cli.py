import io
import json

import pytest

from defeasible.cli import FOUND, OK, USAGE, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def dfl(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_infer_ex1():
    code, out = run("infer", "--tags", "pd*", "@ex1")
    assert code == OK
    assert out.splitlines() == ["+pd* q", "-pd* p", "-pd* ~p", "-pd* ~q"]


def test_infer_json_and_multiple_tags(dfl):
    path = dfl("t.dfl", "p.\n")
    code, out = run("infer", "--tags", "D,pd", "--json", path)
    assert code == OK
    rows = json.loads(out)["conclusions"]
    assert {(r["sign"], r["tag"], r["literal"]) for r in rows} == {
        ("+", "D", "p"), ("-", "D", "~p"), ("+", "pd", "p"), ("-", "pd", "~p")}


def test_transform_team_for_individual():
    code, out = run("transform", "--kind", "team-for-individual", "@ex13")
    assert code == OK
    assert "$o(p): $one(p) ~> p." in out.splitlines()


def test_transform_literal_flag():
    code, _ = run("transform", "--kind", "def5", "--literal", "@ex13")
    assert code == USAGE
    code, out = run("transform", "--kind", "def3", "--literal", "@ex2")
    assert code == OK and "$n_d(r4,r3): ~p => ~$undefeated(q)." in out


def test_check_sim_ex13_mismatch():
    code, out = run("check-sim", "--transform", "def4", "--source", "pd*", "--target", "pd",
                    "--additions", "rules", "--trials", "1", "--fixture", "@ex13_addition", "@ex13")
    assert code == FOUND
    report = json.loads(out)
    assert report["verdict"] == "Mismatch"
    assert {m["literal"] for m in report["mismatches"]} == {"p"}
    assert report["mismatches"][0]["a_file"] == "@ex13_addition"


def test_check_sim_all_pass_and_shrink():
    code, out = run("check-sim", "--transform", "block-for-prop", "--source", "d*", "--target", "pd*",
                    "--additions", "facts", "--trials", "5", "--seed", "3", "@ex1")
    assert code == OK and json.loads(out)["verdict"] == "AllPass"
    code, out = run("check-sim", "--transform", "def4", "--source", "pd*", "--target", "pd",
                    "--additions", "rules", "--fixture", "@ex13_addition", "--shrink", "@ex13")
    assert code == FOUND
    assert json.loads(out)["shrunk"]["A"] == "a1: => p.\n"


def test_check_sim_usage_errors():
    base = ["check-sim", "--source", "pd*", "--target", "pd", "--additions", "rules"]
    assert run(*base, "--transform", "def4", "--trials", "3", "@ex13")[0] == USAGE  # no seed
    assert run(*base, "--transform", "def6", "--seed", "0", "@ex13")[0] == USAGE  # unsupported claim
    assert run(*base, "--transform", "def9", "--seed", "0", "@ex13")[0] == USAGE


def test_add_and_label_clash(dfl):
    code, out = run("add", "@ex13", "@ex13_addition")
    assert code == OK and out == "r1: => p.\nr2: => ~p.\na1: => p.\n"
    code, _ = run("add", "@ex13", dfl("a.dfl", "r1: => q.\n"))
    assert code == FOUND


def test_parse_and_errors(dfl):
    code, out = run("parse", dfl("ok.dfl", "r2: b, a => p.\nz.\n"))
    assert code == OK and out == "z.\nr2: a, b => p.\n"
    assert run("parse", dfl("bad.dfl", "r1: => $h(r1).\n"))[0] == USAGE
    assert run("parse", "--loose", dfl("loose.dfl", "r1: => $h(r1).\n"))[0] == OK
    assert run("parse", "missing.dfl")[0] == USAGE
    assert run("parse", "@nope")[0] == USAGE
    assert run("bogus")[0] == USAGE
    assert run()[0] == USAGE


def test_check_props(dfl):
    code, out = run("check-props", "--count", "20", "--seed", "0")
    assert code == OK and out.splitlines()[-1] == "20/20 theories satisfy inclusion and coherence"
    assert run("check-props")[0] == USAGE
    code, out = run("check-props", "--json", "@ex1", dfl("t.dfl", "p.\n"))
    assert code == OK and json.loads(out)["failed"] == 0


def test_examples_table():
    code, out = run("examples")
    assert code == OK
    lines = out.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
    code, out = run("examples", "--list")
    assert code == OK and "@ex16_prime" in out.split()


def test_output_is_reproducible():
    argv = ["check-sim", "--transform", "def5", "--source", "d*", "--target", "d",
            "--additions", "rules", "--trials", "4", "--seed", "77", "@ex15"]
    assert run(*argv) == run(*argv)
