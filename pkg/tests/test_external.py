"""Child-process heuristics speaking the line-based JSON protocol."""

import json
import math
import sys
import time

import pytest

from plankit import bfs_oracle, gbfs, make_heuristic
from plankit.errors import EvaluationTimeout, ExternalHeuristicError
from plankit.external import ExternalHeuristic, task_payload
from plankit.grounding import successors
from plankit.search import SearchStatus

GOALCOUNT = """\
import json
import sys

goal = set()
for line in sys.stdin:
    msg = json.loads(line)
    if msg.get("kind") == "init":
        goal = set(msg["task"]["goal"])
    elif msg.get("kind") == "eval":
        value = len(goal - set(msg["state"]))
        sys.stdout.write(json.dumps({"kind": "value", "value": value}) + "\\n")
        sys.stdout.flush()
"""

SCRIPTS = {
    "goalcount.py": GOALCOUNT,
    "always_inf.py": """\
import json, sys
for line in sys.stdin:
    if json.loads(line).get("kind") == "eval":
        sys.stdout.write('{"kind": "value", "value": "inf"}\\n')
        sys.stdout.flush()
""",
    "error_reply.py": """\
import json, sys
for line in sys.stdin:
    if json.loads(line).get("kind") == "eval":
        sys.stdout.write('{"kind": "error", "message": "synthetic failure"}\\n')
        sys.stdout.flush()
""",
    "garbage.py": """\
import json, sys
for line in sys.stdin:
    if json.loads(line).get("kind") == "eval":
        sys.stdout.write("certainly! the value is 4\\n")
        sys.stdout.flush()
""",
    "bad_value.py": """\
import json, sys
for line in sys.stdin:
    if json.loads(line).get("kind") == "eval":
        sys.stdout.write('{"kind": "value", "value": true}\\n')
        sys.stdout.flush()
""",
    "exit_after_init.py": """\
import sys
sys.stdin.readline()
sys.exit(3)
""",
    "hang.py": """\
import json, sys, time
for line in sys.stdin:
    if json.loads(line).get("kind") == "eval":
        time.sleep(3600)
""",
}


@pytest.fixture(scope="module")
def script_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("wire")
    for name, text in SCRIPTS.items():
        (d / name).write_text(text)
    return d


def command(script_dir, name):
    return f"{sys.executable} {script_dir / name}"


def sample_states(task, limit=25):
    """Init, a goal state, and the first couple of search layers."""
    states = [task.init]
    for _, succ in successors(task, task.init):
        states.append(succ)
        for _, succ2 in successors(task, succ):
            states.append(succ2)
    res = bfs_oracle(task)
    if res.solved:
        state = task.init
        for name in res.plan:
            a = task.actions[task.action_index[name]]
            state = (state - a.delete) | a.add
        states.append(state)
    return states[:limit]


class TestPayload:
    def test_shape(self, get_task):
        task = get_task("blocksworld", "p01")
        payload = task_payload(task)
        assert set(payload) == {"atoms", "actions", "init", "goal", "static"}
        assert payload["atoms"] == [a.text for a in task.atoms]
        assert payload["init"] == sorted(payload["init"])
        assert payload["goal"] == sorted(payload["goal"])
        assert payload["static"] == sorted(payload["static"])
        for entry in payload["actions"]:
            assert set(entry) == {"name", "pre", "add", "del", "cost"}
            assert entry["pre"] == sorted(entry["pre"])
            assert entry["cost"] == 1
        assert json.dumps(payload)  # serialisable as-is

    def test_indices_reference_atom_table(self, get_task):
        task = get_task("transport", "p01")
        payload = task_payload(task)
        n = len(payload["atoms"])
        referenced = set(payload["init"]) | set(payload["goal"]) | set(payload["static"])
        for entry in payload["actions"]:
            referenced |= set(entry["pre"]) | set(entry["add"]) | set(entry["del"])
        assert all(0 <= i < n for i in referenced)


class TestConformance:
    @pytest.mark.parametrize("domain", ["blocksworld", "spanner", "transport"])
    def test_matches_builtin_goalcount(self, get_task, script_dir, domain):
        task = get_task(domain, "p01")
        builtin = make_heuristic("goal-count", task)
        with ExternalHeuristic(command(script_dir, "goalcount.py"), task) as ext:
            for state in sample_states(task):
                assert ext.evaluate(state) == builtin.evaluate(state)

    def test_list_command_accepted(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        cmd = [sys.executable, str(script_dir / "goalcount.py")]
        with ExternalHeuristic(cmd, task) as ext:
            assert ext.evaluate(task.init) == 1

    def test_inf_reply_maps_to_float_inf(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        with ExternalHeuristic(command(script_dir, "always_inf.py"), task) as ext:
            assert ext.evaluate(task.init) == math.inf


class TestFailureModes:
    def test_error_reply_raises(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        with ExternalHeuristic(command(script_dir, "error_reply.py"), task) as ext:
            with pytest.raises(ExternalHeuristicError, match="synthetic failure"):
                ext.evaluate(task.init)

    def test_garbage_reply_raises(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        with ExternalHeuristic(command(script_dir, "garbage.py"), task) as ext:
            with pytest.raises(ExternalHeuristicError):
                ext.evaluate(task.init)

    def test_non_numeric_value_raises(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        with ExternalHeuristic(command(script_dir, "bad_value.py"), task) as ext:
            with pytest.raises(ExternalHeuristicError):
                ext.evaluate(task.init)

    def test_early_exit_raises(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        with ExternalHeuristic(command(script_dir, "exit_after_init.py"), task) as ext:
            with pytest.raises(ExternalHeuristicError):
                ext.evaluate(task.init)

    def test_unlaunchable_command_raises(self, get_task):
        task = get_task("blocksworld", "p01")
        with pytest.raises(ExternalHeuristicError):
            ExternalHeuristic("/no/such/interpreter h.py", task)


class TestDeadlines:
    def test_hang_honours_search_deadline(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        with ExternalHeuristic(command(script_dir, "hang.py"), task) as ext:
            ext.search_deadline = time.monotonic() + 0.3
            start = time.monotonic()
            with pytest.raises(EvaluationTimeout):
                ext.evaluate(task.init)
            assert time.monotonic() - start < 2.0

    def test_gbfs_reports_time_limit(self, get_task, script_dir):
        task = get_task("blocksworld", "p02")
        limit = 0.5
        with ExternalHeuristic(command(script_dir, "hang.py"), task) as ext:
            start = time.monotonic()
            result = gbfs(task, ext, time_limit=limit)
            elapsed = time.monotonic() - start
        assert result.status is SearchStatus.TIME_LIMIT
        assert result.plan is None
        assert elapsed < limit + 2.0

    def test_close_kills_wedged_process(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        ext = ExternalHeuristic(command(script_dir, "hang.py"), task)
        ext.search_deadline = time.monotonic() + 0.2
        with pytest.raises(EvaluationTimeout):
            ext.evaluate(task.init)
        ext.close()
        assert ext.proc.poll() is not None

    def test_clean_shutdown_on_close(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        ext = ExternalHeuristic(command(script_dir, "goalcount.py"), task)
        ext.evaluate(task.init)
        ext.close()
        assert ext.proc.poll() == 0


class TestSearchIntegration:
    def test_external_goalcount_drives_search(self, get_task, script_dir):
        task = get_task("blocksworld", "p01")
        builtin_result = gbfs(task, make_heuristic("goal-count", task), time_limit=30.0)
        with ExternalHeuristic(command(script_dir, "goalcount.py"), task) as ext:
            ext_result = gbfs(task, ext, time_limit=30.0)
        assert ext_result.solved
        assert ext_result.plan == builtin_result.plan
        assert ext_result.expansions == builtin_result.expansions
        assert ext_result.evaluations == builtin_result.evaluations
