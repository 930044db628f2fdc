"""CLI tests: exit codes, golden text output, structured round-trips."""

import pytest

import veracity
from veracity.cli import RunConfig, main, run_check, run_model, run_trust
from veracity.report import parse_structured, to_structured

FIXTURES = veracity.fixtures_path()
PENELOPE = str(FIXTURES / "penelope.vlp")
CURRIED = str(FIXTURES / "curried.vlp")
TRUST_CHAIN = str(FIXTURES / "trust-chain.vlp")
STAR = str(FIXTURES / "star-vs-chain.vlp")
ATTEMPT = str(FIXTURES / "excluded-middle-attempt.vlp")


@pytest.fixture(autouse=True)
def plain_output(monkeypatch):
    monkeypatch.setenv("VERACITY_COLOR", "never")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_penelope_golden(self, capsys):
        code, out, err = run(capsys, "check", PENELOPE)
        assert code == 0
        assert err == ""
        assert out == (
            f"check {PENELOPE}\n"
            "  proof Combined: ok\n"
            "    l^P : C1, s^P : C2, c^P : C3 |- ((l,s),c)^P : C1 /\\ C2 /\\ C3\n"
        )

    def test_failing_fixture_exits_one(self, capsys):
        code, out, _ = run(capsys, "check", ATTEMPT)
        assert code == 1
        assert "proof Attempt: failed" in out
        assert "tagMismatch at root" in out
        assert "(line 8, col 3)" in out

    def test_missing_file_exits_two(self, capsys):
        code, out, err = run(capsys, "check", "no-such-file.vlp")
        assert code == 2
        assert out == ""
        assert "no-such-file.vlp" in err

    def test_parse_error_exits_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.vlp"
        bad.write_text("claim A..\n", encoding="utf-8")
        code, out, err = run(capsys, "check", str(bad))
        assert code == 2
        assert out == ""
        assert str(bad) in err and ":1:" in err

    def test_no_inputs_exits_two(self, capsys):
        code, _, err = run(capsys, "check")
        assert code == 2
        assert "no input files" in err

    def test_multiple_files_in_argv_order(self, capsys):
        code, out, _ = run(capsys, "check", PENELOPE, CURRIED)
        assert code == 0
        assert out.index(f"check {PENELOPE}") < out.index(f"check {CURRIED}")

    def test_output_is_deterministic(self, capsys):
        first = run(capsys, "check", PENELOPE, TRUST_CHAIN)
        second = run(capsys, "check", PENELOPE, TRUST_CHAIN)
        assert first == second


class TestEval:
    def test_single_step(self, capsys):
        code, out, _ = run(capsys, "eval", "-e", "cases(i(a), x.x, y.y)")
        assert code == 0
        assert out == "a (1 step)\n"

    def test_zero_steps(self, capsys):
        code, out, _ = run(capsys, "eval", "-e", "a")
        assert code == 0
        assert out == "a (0 steps)\n"

    def test_curried_application(self, capsys):
        code, out, _ = run(capsys, "eval", "-e", "(\\z.\\y.\\x.((x,y),z)) c s l")
        assert code == 0
        assert out == "((l,s),c) (3 steps)\n"

    def test_budget_exhaustion_exits_one(self, capsys):
        omega = "(\\x.x x) (\\x.x x)"
        code, out, _ = run(capsys, "eval", "--step-budget", "10", "-e", omega)
        assert code == 1
        assert "step budget 10 exhausted" in out

    def test_expression_parse_error_exits_two(self, capsys):
        code, _, err = run(capsys, "eval", "-e", "((a)")
        assert code == 2
        assert "-e:" in err

    def test_verbose_prints_the_trace(self, capsys):
        code, out, _ = run(capsys, "eval", "-v", "-e", "cases(i(a), x.x, y.y)")
        assert code == 0
        assert out == "  [0] cases(i(a), x.x, y.y)\n  [1] a\na (1 step)\n"

    def test_file_mode_normalizes_conclusions(self, capsys):
        code, out, _ = run(capsys, "eval", TRUST_CHAIN)
        assert code == 0
        assert out == f"eval {TRUST_CHAIN}\n  Chained: a (0 steps)\n"

    def test_requires_some_input(self, capsys):
        code, _, err = run(capsys, "eval")
        assert code == 2
        assert "give -e expressions or input files" in err


class TestModel:
    def test_chain_query_and_soundness(self, capsys):
        code, out, _ = run(capsys, "model", TRUST_CHAIN)
        assert code == 0
        assert out == (
            f"model {TRUST_CHAIN}\n"
            "  query a^k@0.2 : A in Chain: holds\n"
            "  sound Chained in Chain: sound\n"
        )

    def test_failed_query_exits_one(self, capsys, tmp_path):
        script = tmp_path / "q.vlp"
        script.write_text(
            "claim A. actor k.\n"
            "model M { A = { a^k@0.5. }. }\n"
            "query a^k@0.9 : A in M.\n",
            encoding="utf-8",
        )
        code, out, _ = run(capsys, "model", str(script))
        assert code == 1
        assert "does not hold" in out

    def test_query_against_falsity_fails(self, capsys, tmp_path):
        script = tmp_path / "bot.vlp"
        script.write_text(
            "claim A. actor k.\n"
            "model M { A = { a^k@1.0. }. }\n"
            "query a^k@0.0 : _|_ in M.\n",
            encoding="utf-8",
        )
        code, out, _ = run(capsys, "model", str(script))
        assert code == 1
        assert "does not hold" in out


class TestTrust:
    def test_star_vs_chain_golden(self, capsys):
        code, out, _ = run(capsys, "trust", STAR)
        assert code == 0
        assert out == (
            f"trust {STAR}\n"
            "  relation S: 4 edges\n"
            "    reflexive: complete (implicit self-trust)\n"
            "    symmetric pairs: none\n"
            "    decay: p -> q -> r -> s -> t @ 0.4096\n"
            "  relation R: 5 edges\n"
            "    reflexive: complete (implicit self-trust)\n"
            "    symmetric pairs: none\n"
            "    decay: l -> t @ 0.5\n"
            "  relation R2: 5 edges\n"
            "    reflexive: complete (implicit self-trust)\n"
            "    symmetric pairs: none\n"
            "    decay: l -> t @ 0.4\n"
            "  compare chain S star R from p to t:\n"
            "    chain = 0.4096\n"
            "    star = 0.5\n"
            "    verdict: star at least chain\n"
            "  compare chain S star R2 from p to t:\n"
            "    chain = 0.4096\n"
            "    star = 0.4\n"
            "    verdict: chain beats star\n"
        )

    def test_single_edge_best_trust_is_the_edge_weight(self, capsys, tmp_path):
        script = tmp_path / "one.vlp"
        script.write_text(
            "actor a, b.\n"
            "trust T { a -> b @ 0.7. }\n"
            "compare chain T star T from a to b.\n",
            encoding="utf-8",
        )
        code, out, _ = run(capsys, "trust", str(script))
        assert code == 0
        assert "chain = 0.7" in out
        assert "star = 0.7" in out

    def test_unreachable_comparison(self, capsys, tmp_path):
        script = tmp_path / "un.vlp"
        script.write_text(
            "actor a, b, c.\n"
            "trust T { a -> b @ 0.7. }\n"
            "compare chain T star T from a to c.\n",
            encoding="utf-8",
        )
        code, out, _ = run(capsys, "trust", str(script))
        assert code == 0
        assert "verdict: unreachable" in out


class TestStructured:
    def cfg(self, command, *paths):
        return RunConfig(command=command, input_paths=paths, output_format="structured")

    def test_check_report_round_trips(self):
        _, _, report = run_check(self.cfg("check", PENELOPE, ATTEMPT))
        assert parse_structured(to_structured(report)) == report

    def test_model_report_round_trips(self):
        _, _, report = run_model(self.cfg("model", TRUST_CHAIN))
        assert parse_structured(to_structured(report)) == report

    def test_trust_report_round_trips(self):
        _, _, report = run_trust(self.cfg("trust", STAR))
        assert parse_structured(to_structured(report)) == report

    def test_structured_stdout_parses(self, capsys):
        code, out, _ = run(capsys, "report", "--format", "structured", TRUST_CHAIN)
        assert code == 0
        report = parse_structured(out)
        names = [section.name for section in report.sections]
        assert names == [
            f"check {TRUST_CHAIN} Chained",
            f"model {TRUST_CHAIN} query 1",
            f"model {TRUST_CHAIN} sound Chained",
            f"trust {TRUST_CHAIN} relation T",
        ]

    def test_failed_check_section_carries_the_error(self):
        _, _, report = run_check(self.cfg("check", ATTEMPT))
        (section,) = report.sections
        fields = dict(section.fields)
        assert fields["status"] == "failed"
        assert fields["error-kind"] == "tagMismatch"
        assert fields["error-path"] == "root"


class TestColor:
    def test_always_paints_status_words(self, capsys, monkeypatch):
        monkeypatch.setenv("VERACITY_COLOR", "always")
        _, out, _ = run(capsys, "check", PENELOPE)
        assert "\x1b[32mok\x1b[0m" in out

    def test_never_stays_plain(self, capsys):
        _, out, _ = run(capsys, "check", PENELOPE)
        assert "\x1b[" not in out

    def test_structured_mode_never_paints(self, capsys, monkeypatch):
        monkeypatch.setenv("VERACITY_COLOR", "always")
        _, out, _ = run(capsys, "check", "--format", "structured", PENELOPE)
        assert "\x1b[" not in out


class TestArgs:
    def test_unknown_command_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_fixtures_ship_with_the_package(self):
        assert (FIXTURES / "penelope.vlp").is_file()
        assert sorted(p.name for p in FIXTURES.glob("*.vlp")) == [
            "curried.vlp",
            "excluded-middle-attempt.vlp",
            "negation.vlp",
            "penelope.vlp",
            "process.vlp",
            "star-vs-chain.vlp",
            "trust-chain.vlp",
        ]
