"""End-to-end runs of the command line, in process via main()."""

import json

import pytest

from plankit.cli import main


def paths(benchmarks_dir, domain, problem="p01"):
    d = benchmarks_dir / domain
    return str(d / "domain.pddl"), str(d / f"{problem}.pddl")


class TestSolveAndValidate:
    def test_solve_writes_valid_plan(self, benchmarks_dir, tmp_path, capsys):
        domain, problem = paths(benchmarks_dir, "blocksworld")
        plan_path = tmp_path / "out.plan"
        rc = main([
            "solve", "--domain", domain, "--problem", problem,
            "--heuristic", "bw-r1", "--plan-out", str(plan_path),
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "status=solved" in out
        assert "plan_length=2" in out

        rc = main([
            "validate", "--domain", domain, "--problem", problem,
            "--plan", str(plan_path),
        ])
        assert rc == 0
        assert "valid plan, 2 steps" in capsys.readouterr().out

    def test_solve_unsolvable_exits_one(self, benchmarks_dir, capsys):
        d = benchmarks_dir / "sokoban"
        rc = main([
            "solve", "--domain", str(d / "domain.pddl"),
            "--problem", str(d / "unreachable.pddl"),
            "--heuristic", "sokoban-r1",
        ])
        assert rc == 1
        assert "status=unsolvable" in capsys.readouterr().out

    def test_validate_rejects_bad_plan(self, benchmarks_dir, tmp_path, capsys):
        domain, problem = paths(benchmarks_dir, "gripper")
        bad = tmp_path / "bad.plan"
        bad.write_text("(move rooma roomb)\n(pick b1 rooma g1)\n")
        rc = main([
            "validate", "--domain", domain, "--problem", problem,
            "--plan", str(bad),
        ])
        assert rc == 1
        assert "invalid at step 1" in capsys.readouterr().out

    def test_unknown_heuristic_exits_two(self, benchmarks_dir, capsys):
        domain, problem = paths(benchmarks_dir, "gripper")
        rc = main([
            "solve", "--domain", domain, "--problem", problem,
            "--heuristic", "wishful-thinking",
        ])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_parse_error_exits_two(self, tmp_path, benchmarks_dir, capsys):
        bad = tmp_path / "d.pddl"
        bad.write_text("(define (domain broken)")
        _, problem = paths(benchmarks_dir, "gripper")
        rc = main(["ground", "--domain", str(bad), "--problem", problem])
        assert rc == 2


class TestGround:
    def test_dump_to_file(self, benchmarks_dir, tmp_path, capsys):
        domain, problem = paths(benchmarks_dir, "blocksworld")
        out = tmp_path / "ground.txt"
        rc = main(["ground", "--domain", domain, "--problem", problem,
                   "--out", str(out)])
        assert rc == 0
        err = capsys.readouterr().err
        assert "atoms=" in err and "actions=8" in err
        assert "(stack a b)" in out.read_text()


class TestEvaluateSelectReport:
    def test_builtin_pool_roundtrip(self, benchmarks_dir, tmp_path, capsys):
        d = benchmarks_dir / "blocksworld"
        records = tmp_path / "records.jsonl"
        rc = main([
            "evaluate", "--domain", str(d / "domain.pddl"),
            "--problems", str(d / "p01.pddl"), str(d / "p02.pddl"),
            "--heuristics", "bw-r1", "goal-count",
            "--records", str(records), "--time-limit", "30",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "bw-r1: coverage=2" in out
        assert "goal-count: coverage=2" in out

        rc = main(["select", "--records", str(records)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "winner=" in out and "rule=max-agile" in out

        csv_path = tmp_path / "scatter.csv"
        rc = main(["report", "--records", str(records), "--csv", str(csv_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "expansions/s=" in out
        rows = csv_path.read_text().splitlines()
        assert rows[0].startswith("candidate,domain,problem,status")
        assert len(rows) == 1 + 4  # header + 2 candidates x 2 tasks

    def test_select_missing_records_exits_two(self, tmp_path, capsys):
        missing = tmp_path / "none.jsonl"
        missing.write_text("")
        rc = main(["select", "--records", str(missing)])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestPromptCommands:
    def test_gen_prompt_full(self, benchmarks_dir, prompts_dir, tmp_path, capsys):
        d = benchmarks_dir / "spanner"
        out = tmp_path / "prompt.md"
        rc = main([
            "gen-prompt", "--domain", str(d / "domain.pddl"),
            "--problems", str(d / "p01.pddl"), str(d / "p02.pddl"),
            "--assets", str(prompts_dir), "--out", str(out),
        ])
        assert rc == 0
        text = out.read_text()
        assert text.startswith("## Instructions")
        assert "## Checklist" in text

    def test_gen_prompt_toggle(self, benchmarks_dir, prompts_dir, capsys):
        d = benchmarks_dir / "spanner"
        rc = main([
            "gen-prompt", "--domain", str(d / "domain.pddl"),
            "--problems", str(d / "p01.pddl"),
            "--assets", str(prompts_dir), "--no-checklist",
        ])
        assert rc == 0
        assert "## Checklist" not in capsys.readouterr().out

    def test_endtoend_requires_target(self, benchmarks_dir, prompts_dir, capsys):
        d = benchmarks_dir / "spanner"
        rc = main([
            "gen-prompt", "--domain", str(d / "domain.pddl"),
            "--assets", str(prompts_dir), "--endtoend",
        ])
        assert rc == 2

    def test_endtoend_prompt(self, benchmarks_dir, prompts_dir, capsys):
        d = benchmarks_dir / "spanner"
        rc = main([
            "gen-prompt", "--domain", str(d / "domain.pddl"),
            "--assets", str(prompts_dir),
            "--endtoend", "--target", str(d / "p01.pddl"),
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "## Target task: p01" in out


class TestGeneratePipeline:
    def test_mock_generate_builds_pool(
        self, benchmarks_dir, prompts_dir, mock_responses_dir, tmp_path, capsys
    ):
        d = benchmarks_dir / "blocksworld"
        out_dir = tmp_path / "gen"
        rc = main([
            "generate", "--domain", str(d / "domain.pddl"),
            "--problems", str(d / "p01.pddl"),
            "--assets", str(prompts_dir),
            "--endpoint", f"mock:{mock_responses_dir}",
            "--n", "3", "--out-dir", str(out_dir),
        ])
        assert rc == 0
        assert "accepted 3 candidates, rejected 0" in capsys.readouterr().out
        pool_lines = (out_dir / "pool.jsonl").read_text().splitlines()
        assert len(pool_lines) == 3
        entry = json.loads(pool_lines[0])
        assert entry["kind"] == "external"
        assert str(out_dir / "sources" / "candidate_000.py") in entry["spec"]
        for i in range(3):
            assert (out_dir / "responses" / f"response_{i:03d}.txt").is_file()
            assert (out_dir / "sources" / f"candidate_{i:03d}.py").is_file()

    def test_generate_missing_mock_dir_exits_two(
        self, benchmarks_dir, prompts_dir, tmp_path, capsys
    ):
        d = benchmarks_dir / "blocksworld"
        rc = main([
            "generate", "--domain", str(d / "domain.pddl"),
            "--problems", str(d / "p01.pddl"),
            "--assets", str(prompts_dir),
            "--endpoint", f"mock:{tmp_path / 'absent'}",
            "--n", "1", "--out-dir", str(tmp_path / "gen"),
        ])
        assert rc == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert "plankit" in capsys.readouterr().out
