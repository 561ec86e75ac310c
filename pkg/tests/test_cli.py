import json

import pytest

from retword.cli import (
    EXIT_BUDGET,
    EXIT_CHECK_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    run_command,
)

FIB = """
alphabet = 0 1
start = 0
0 -> 0 1
1 -> 0
"""

MORSE = """
alphabet = 0 1
start = 0
0 -> 0 1
1 -> 1 0
"""

TAU4 = """
alphabet = a b
start = a
a -> a b a b
b -> a b b b
"""

SIGMA4 = """
alphabet = a b c
start = a
a -> a b a b
b -> a c c c
c -> a b b c
coding phi: a -> a, b -> b, c -> b
"""

CONST3 = """
alphabet = a b c
start = a
a -> a b c
b -> b c a
c -> c a b
"""


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in [
        ("fib", FIB),
        ("morse", MORSE),
        ("tau4", TAU4),
        ("sigma4", SIGMA4),
        ("const3", CONST3),
    ]:
        path = tmp_path / f"{name}.sub"
        path.write_text(text)
        out[name] = str(path)
    return out


def test_fixed_point_command(files, capsys):
    status, report = run_command(["fixed-point", files["fib"], "--length", "13"])
    assert status == EXIT_OK
    assert report.payload["data"]["prefix"] == "0100101001001"
    assert "0100101001001" in capsys.readouterr().out


def test_spectrum_command_morse(files, capsys):
    status, report = run_command(["spectrum", files["morse"]])
    assert status == EXIT_OK
    data = report.payload["data"]
    assert data["spectrum"]["char_poly_coeffs"] == [0, -2, 1]
    assert [r for r, _ in data["spectrum"]["exact_roots"]] == ["0/1", "2/1"]
    assert data["stripped_spectrum"]["char_poly_coeffs"] == [-2, 1]


def test_return_sub_command(files):
    status, report = run_command(["return-sub", files["fib"], "--prefix", "01"])
    assert status == EXIT_OK
    assert report.payload["data"]["equals_original_after_renaming"] is True
    assert report.payload["checks"][0]["outcome"] == "pass"


def test_return_words_command(files):
    status, report = run_command(["return-words", files["fib"], "--prefix", "0"])
    assert status == EXIT_OK
    assert report.payload["data"]["return_words"] == ["01", "0"]


def test_derived_command(files):
    status, report = run_command(["derived", files["morse"], "--prefix", "011", "--length", "20"])
    assert status == EXIT_OK
    assert len(report.payload["data"]["derived_prefix"]) == 20


def test_tower_command(files):
    status, report = run_command(["tower", files["morse"], "--depth", "8"])
    assert status == EXIT_OK
    found = [c for c in report.payload["checks"] if c["outcome"] == "found"]
    assert found and found[0]["witness"] == [2, 3]


def test_tower_budget_exhausted(files):
    status, report = run_command(["tower", files["morse"], "--depth", "1"])
    assert status == EXIT_BUDGET
    assert any(c["outcome"] == "absent" for c in report.payload["checks"])


def test_relations_command(files):
    status, report = run_command(["relations", files["fib"], "--u", "0", "--v", "01"])
    assert status == EXIT_OK
    assert all(c["outcome"] == "pass" for c in report.payload["checks"])


def test_circularity_command(files):
    status, report = run_command(["circularity", files["fib"], "--sample-len", "6"])
    assert status == EXIT_OK
    outcomes = {c["name"]: c for c in report.payload["checks"]}
    assert outcomes["injectivity-prefix"]["outcome"] == "found"
    assert outcomes["synchronization-delay"]["outcome"] == "found"


def test_shared_command(files):
    status, report = run_command(["shared", "--left", files["fib"], "--right", files["fib"]])
    assert status == EXIT_OK


def test_cobham_command_quad_pair(files):
    status, report = run_command(
        [
            "cobham",
            "--left", files["tau4"],
            "--right", files["sigma4"],
            "--coding-left", "id",
            "--coding-right", "phi",
            "--bound", "12",
        ]
    )
    assert status == EXIT_OK
    checks = {c["name"]: c for c in report.payload["checks"]}
    assert checks["coded-fixed-points-agree"]["outcome"] == "pass"
    witness = checks["multiplicative-dependence"]["witness"]
    assert (witness["m"], witness["n"]) == (1, 1)
    assert witness["value"] == "4/1"
    assert report.payload["data"]["dominant_left"]["exact"] is True


def test_cobham_absent_reports_bound(files):
    status, report = run_command(
        ["cobham", "--left", files["morse"], "--right", files["const3"], "--bound", "12"]
    )
    # the coded fixed points differ, so the gate fails before any search
    assert status == EXIT_CHECK_FAILED


def test_cobham_absent_on_periodic_pair(tmp_path):
    """Two substitutions of (ab)^omega with dominants 2 and 3: the gate passes
    and the dependence search must come back empty, reporting its bound."""
    two = tmp_path / "two.sub"
    two.write_text("alphabet = a b\nstart = a\na -> a b\nb -> a b\n")
    three = tmp_path / "three.sub"
    three.write_text("alphabet = a b\nstart = a\na -> a b a\nb -> b a b\n")
    status, report = run_command(
        ["cobham", "--left", str(two), "--right", str(three), "--bound", "12"]
    )
    assert status == EXIT_BUDGET
    checks = {c["name"]: c for c in report.payload["checks"]}
    assert checks["coded-fixed-points-agree"]["outcome"] == "pass"
    absent = checks["multiplicative-dependence"]
    assert absent["outcome"] == "absent"
    assert "12" in absent["detail"]
    assert "independent" not in absent["detail"]


def test_periodic_command(files):
    status, report = run_command(
        ["periodic", files["fib"], "--period", "01", "--check-len", "500"]
    )
    assert status == EXIT_OK
    assert all(c["outcome"] == "pass" for c in report.payload["checks"])


def test_parse_error_exit_code(files, tmp_path, capsys):
    bad = tmp_path / "bad.sub"
    bad.write_text("alphabet = a b\nstart = a\na -> b a\nb -> a\n")
    status, _ = run_command(["spectrum", str(bad)])
    assert status == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    status, _ = run_command(["spectrum", "/nonexistent/nope.sub"])
    assert status == EXIT_USAGE


def test_usage_error_exit_code():
    status, _ = run_command(["not-a-command"])
    assert status == EXIT_USAGE


def test_json_output_deterministic(files, capsys):
    argv = ["spectrum", files["fib"], "--json"]
    run_command(argv)
    first = capsys.readouterr().out
    run_command(argv)
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["command"] == "spectrum"
    dom = payload["data"]["spectrum"]["dominant"]
    for key in ("lo", "hi", "width"):
        num, den = dom[key].split("/")
        int(num), int(den)


def test_json_has_no_timestamp(files, capsys):
    run_command(["fixed-point", files["fib"], "--json"])
    out = capsys.readouterr().out
    assert "elapsed" not in out
    run_command(["fixed-point", files["fib"]])
    human = capsys.readouterr().out
    assert "elapsed" in human


@pytest.mark.parametrize(
    "argv",
    [
        ["fixed-point", "{fib}", "--length", "20"],
        ["spectrum", "{sigma4}"],
        ["return-words", "{morse}", "--prefix", "011"],
        ["return-sub", "{morse}", "--prefix", "011"],
        ["derived", "{fib}", "--prefix", "0", "--length", "15"],
        ["tower", "{fib}", "--depth", "6"],
        ["relations", "{morse}", "--u", "0", "--v", "01"],
        ["circularity", "{fib}", "--sample-len", "6"],
        ["shared", "--left", "{fib}", "--right", "{fib}"],
        ["periodic", "{fib}", "--period", "01", "--check-len", "100"],
    ],
)
def test_every_command_emits_valid_json(files, capsys, argv):
    argv = [a.format(**files) for a in argv] + ["--json"]
    status, _ = run_command(argv)
    assert status == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["argv"] == argv
    assert "config" in payload and "checks" in payload and "data" in payload


def test_prefix_cap_env(files, monkeypatch):
    monkeypatch.setenv("REPO_PREFIX_CAP", "64")
    status, report = run_command(["fixed-point", files["fib"], "--length", "32"])
    assert status == EXIT_OK
    assert report.payload["config"]["prefix_cap"] == 64
    status, _ = run_command(["fixed-point", files["fib"], "--length", "100000"])
    assert status == EXIT_BUDGET
