"""Protocol behaviour of the host, driven over real pipes."""

import json
import os
import select
import subprocess
import sys
import time
from importlib import resources

import pytest

from heuristic_host import encode_value
from heuristic_host.__main__ import main as host_main

PYTHON = sys.executable
GOAL_COUNT = resources.files("heuristic_host") / "examples" / "goal_count.py"
HANG = resources.files("heuristic_host") / "examples" / "testing" / "hang.py"


class Host:
    """Raw wire driver with deadlined reads, so a wedged host fails fast."""

    def __init__(self, source):
        self.proc = subprocess.Popen(
            [PYTHON, "-m", "heuristic_host", str(source)],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            bufsize=0,
        )
        self._buf = b""

    def send_raw(self, line: str) -> None:
        self.proc.stdin.write(line.encode() + b"\n")
        self.proc.stdin.flush()

    def send(self, **message) -> None:
        self.send_raw(json.dumps(message))

    def read(self, timeout: float = 10.0) -> dict:
        fd = self.proc.stdout.fileno()
        deadline = time.monotonic() + timeout
        while b"\n" not in self._buf:
            remaining = deadline - time.monotonic()
            assert remaining > 0, "host did not answer in time"
            ready, _, _ = select.select([fd], [], [], remaining)
            assert ready, "host did not answer in time"
            chunk = os.read(fd, 65536)
            assert chunk, "host closed stdout"
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return json.loads(line)

    def close(self) -> int:
        self.proc.stdin.close()
        try:
            return self.proc.wait(timeout=5.0)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait()
            return -1

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()


def init_message(task):
    from plankit.external import task_payload

    return {"kind": "init", "task": task_payload(task)}


def goal_state(task):
    from plankit import bfs_oracle

    state = task.init
    for name in bfs_oracle(task).plan:
        a = task.actions[task.action_index[name]]
        state = (state - a.delete) | a.add
    return state


class TestGoalCountSource:
    def test_zero_on_goal_state(self, get_task):
        task = get_task("blocksworld", "p01")
        with Host(GOAL_COUNT) as host:
            host.send(**init_message(task))
            host.send(kind="eval", state=sorted(goal_state(task)))
            assert host.read() == {"kind": "value", "value": 0}

    @pytest.mark.parametrize("domain", ["blocksworld", "spanner", "miconic"])
    def test_matches_engine_builtin(self, get_task, domain):
        from plankit import make_heuristic
        from plankit.grounding import successors

        task = get_task(domain, "p01")
        builtin = make_heuristic("goal-count", task)
        states = [task.init, goal_state(task)]
        for _, succ in successors(task, task.init):
            states.append(succ)
        with Host(GOAL_COUNT) as host:
            host.send(**init_message(task))
            for state in states:
                host.send(kind="eval", state=sorted(state))
                reply = host.read()
                assert reply["kind"] == "value"
                assert reply["value"] == builtin.evaluate(state)

    def test_engine_side_equivalence(self, get_task):
        """Through the engine's own subprocess client, not raw pipes."""
        from plankit import make_heuristic
        from plankit.external import ExternalHeuristic
        from plankit.grounding import successors

        task = get_task("transport", "p01")
        builtin = make_heuristic("goal-count", task)
        command = f"{PYTHON} -m heuristic_host {GOAL_COUNT}"
        with ExternalHeuristic(command, task) as ext:
            for _, succ in successors(task, task.init):
                assert ext.evaluate(succ) == builtin.evaluate(succ)


class TestProtocolErrors:
    def test_eval_before_init(self, get_task):
        task = get_task("blocksworld", "p01")
        with Host(GOAL_COUNT) as host:
            host.send(kind="eval", state=sorted(task.init))
            reply = host.read()
            assert reply["kind"] == "error"
            assert "init" in reply["message"]

    def test_duplicate_init_then_still_serves(self, get_task):
        task = get_task("blocksworld", "p01")
        with Host(GOAL_COUNT) as host:
            host.send(**init_message(task))
            host.send(**init_message(task))
            reply = host.read()
            assert reply["kind"] == "error"
            assert "init" in reply["message"]
            host.send(kind="eval", state=sorted(task.init))
            assert host.read()["kind"] == "value"

    def test_malformed_line_then_still_serves(self, get_task):
        task = get_task("blocksworld", "p01")
        with Host(GOAL_COUNT) as host:
            host.send(**init_message(task))
            host.send_raw("this is not json")
            assert host.read()["kind"] == "error"
            host.send(kind="eval", state=sorted(task.init))
            assert host.read()["kind"] == "value"

    def test_unknown_kind(self, get_task):
        task = get_task("blocksworld", "p01")
        with Host(GOAL_COUNT) as host:
            host.send(**init_message(task))
            host.send(kind="shutdown")
            reply = host.read()
            assert reply["kind"] == "error"
            assert "shutdown" in reply["message"]

    def test_eof_is_clean_exit(self, get_task):
        task = get_task("blocksworld", "p01")
        host = Host(GOAL_COUNT)
        host.send(**init_message(task))
        assert host.close() == 0


RAISING_SOURCE = """\
def initialize(task):
    return set(task["goal"])

def evaluate(ctx, state):
    if not state:
        raise ValueError("empty state unsupported")
    return len(ctx - set(state))
"""

VALUE_ZOO_SOURCE = """\
def initialize(task):
    return None

def evaluate(ctx, state):
    # first state index selects the probe value
    return {0: -1, 1: float("nan"), 2: float("inf"), 3: True, 4: 2.5}[state[0]]
"""


class TestHostedCodeFailures:
    def test_raising_eval_recovers(self, get_task, tmp_path):
        source = tmp_path / "raising.py"
        source.write_text(RAISING_SOURCE)
        task = get_task("blocksworld", "p01")
        with Host(source) as host:
            host.send(**init_message(task))
            host.send(kind="eval", state=[])
            reply = host.read()
            assert reply["kind"] == "error"
            assert "empty state" in reply["message"]
            host.send(kind="eval", state=sorted(task.init))
            assert host.read()["kind"] == "value"

    def test_value_screening(self, get_task, tmp_path):
        source = tmp_path / "zoo.py"
        source.write_text(VALUE_ZOO_SOURCE)
        task = get_task("blocksworld", "p01")
        with Host(source) as host:
            host.send(**init_message(task))
            expected = {
                0: ("error", None),
                1: ("error", None),
                2: ("value", "inf"),
                3: ("error", None),
                4: ("value", 2.5),
            }
            for probe, (kind, value) in expected.items():
                host.send(kind="eval", state=[probe])
                reply = host.read()
                assert reply["kind"] == kind, reply
                if kind == "value":
                    assert reply["value"] == value

    def test_initialize_crash_reported(self, get_task, tmp_path):
        source = tmp_path / "badinit.py"
        source.write_text(
            "def initialize(task):\n    raise RuntimeError('no table')\n"
            "def evaluate(ctx, state):\n    return 0\n"
        )
        task = get_task("blocksworld", "p01")
        with Host(source) as host:
            host.send(**init_message(task))
            reply = host.read()
            assert reply["kind"] == "error"
            assert "initialize failed" in reply["message"]
            # still not initialized: evals answer with errors, not crashes
            host.send(kind="eval", state=[])
            assert host.read()["kind"] == "error"

    def test_missing_entry_points(self, get_task, tmp_path):
        source = tmp_path / "empty.py"
        source.write_text("x = 1\n")
        task = get_task("blocksworld", "p01")
        with Host(source) as host:
            host.send(**init_message(task))
            reply = host.read()
            assert reply["kind"] == "error"
            assert "initialize" in reply["message"]

    def test_syntax_error_source(self, get_task, tmp_path):
        source = tmp_path / "broken.py"
        source.write_text("def initialize(task:\n")
        task = get_task("blocksworld", "p01")
        with Host(source) as host:
            host.send(**init_message(task))
            assert host.read()["kind"] == "error"
            host.send(kind="eval", state=[0])
            assert host.read()["kind"] == "error"


class TestEngineIntegration:
    def test_hung_source_becomes_time_limit_record(self, get_task):
        from plankit.harness import CandidateHeuristic, evaluate_candidate

        task = get_task("blocksworld", "p02")
        cand = CandidateHeuristic(
            "wedged", "external", f"{PYTHON} -m heuristic_host {HANG}"
        )
        limit = 1.0
        start = time.monotonic()
        record = evaluate_candidate(cand, task, time_limit=limit)
        elapsed = time.monotonic() - start
        assert record.status == "time_limit"
        assert elapsed < limit + 2.0

    def test_throughput_ten_thousand_evals(self, get_task):
        task = get_task("blocksworld", "p01")
        state = sorted(task.init)
        start = time.monotonic()
        with Host(GOAL_COUNT) as host:
            host.send(**init_message(task))
            for _ in range(10_000):
                host.send(kind="eval", state=state)
                assert host.read()["kind"] == "value"
        assert time.monotonic() - start < 60.0


class TestUnits:
    def test_encode_value_table(self):
        assert encode_value(0) == {"kind": "value", "value": 0}
        assert encode_value(3.5) == {"kind": "value", "value": 3.5}
        assert encode_value(float("inf")) == {"kind": "value", "value": "inf"}
        for bad in (-1, float("-inf"), float("nan"), True, "7", None, [2]):
            assert encode_value(bad)["kind"] == "error"

    def test_cli_usage(self, capsys):
        assert host_main([]) == 2
        assert "usage" in capsys.readouterr().err
