"""Run a heuristic in a separate process, one JSON message per line.

The engine writes an ``init`` message carrying the whole ground task, then
one ``eval`` per state; the process answers each ``eval`` with exactly one
``value`` or ``error`` line.  ``init`` gets no reply on success.  See
docs/wire_protocol.md for the byte-level contract.

Responses are read with an explicit deadline so a wedged process surfaces as
:class:`EvaluationTimeout` instead of hanging the search.
"""

from __future__ import annotations

import json
import os
import select
import shlex
import subprocess
import time
from math import inf

from .errors import EvaluationTimeout, ExternalHeuristicError
from .grounding import GroundTask, State

_READ_CHUNK = 65536


def task_payload(task: GroundTask) -> dict:
    """The ``task`` object sent in the init message."""
    return {
        "atoms": [a.text for a in task.atoms],
        "actions": [
            {
                "name": a.name,
                "pre": sorted(a.pre),
                "add": sorted(a.add),
                "del": sorted(a.delete),
                "cost": a.cost,
            }
            for a in task.actions
        ],
        "init": sorted(task.init),
        "goal": sorted(task.goal),
        "static": sorted(task.static_atoms),
    }


class ExternalHeuristic:
    """Duck-types the in-process heuristic interface over a child process."""

    name = "external"

    # The search loop stores its deadline here before evaluating.
    search_deadline: float | None = None

    def __init__(
        self,
        command: list[str] | str,
        task: GroundTask,
        mem_limit: int | None = None,
    ):
        if isinstance(command, str):
            command = shlex.split(command)
        self.command = command
        self.task = task
        preexec = None
        if mem_limit is not None:
            import resource

            def preexec():
                resource.setrlimit(resource.RLIMIT_AS, (mem_limit, mem_limit))

        try:
            self.proc = subprocess.Popen(
                command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                bufsize=0,
                preexec_fn=preexec,
            )
        except OSError as exc:
            raise ExternalHeuristicError(f"cannot launch {command}: {exc}") from exc
        self._buf = b""
        self._send({"kind": "init", "task": task_payload(task)})

    # -- plumbing ---------------------------------------------------------

    def _send(self, message: dict) -> None:
        try:
            self.proc.stdin.write(json.dumps(message).encode() + b"\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ExternalHeuristicError(
                f"external heuristic closed its input: {exc}"
            ) from exc

    def _read_line(self) -> bytes:
        fd = self.proc.stdout.fileno()
        while True:
            nl = self._buf.find(b"\n")
            if nl >= 0:
                line, self._buf = self._buf[:nl], self._buf[nl + 1 :]
                return line
            if self.search_deadline is not None:
                remaining = self.search_deadline - time.monotonic()
                if remaining <= 0:
                    raise EvaluationTimeout("external heuristic response overdue")
                ready, _, _ = select.select([fd], [], [], remaining)
                if not ready:
                    raise EvaluationTimeout("external heuristic response overdue")
            chunk = os.read(fd, _READ_CHUNK)
            if not chunk:
                raise ExternalHeuristicError(
                    "external heuristic exited without answering"
                )
            self._buf += chunk

    # -- heuristic interface ----------------------------------------------

    def evaluate(self, state: State) -> float:
        self._send({"kind": "eval", "state": sorted(state)})
        line = self._read_line()
        try:
            reply = json.loads(line)
        except ValueError as exc:
            raise ExternalHeuristicError(
                f"unparseable reply: {line[:200]!r}"
            ) from exc
        kind = reply.get("kind")
        if kind == "value":
            value = reply.get("value")
            if value == "inf":
                return inf
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                return value
            raise ExternalHeuristicError(f"bad value in reply: {value!r}")
        if kind == "error":
            raise ExternalHeuristicError(
                f"external heuristic error: {reply.get('message', '')}"
            )
        raise ExternalHeuristicError(f"unexpected reply kind: {kind!r}")

    # -- lifecycle ----------------------------------------------------------

    def close(self) -> None:
        if self.proc.poll() is None:
            try:
                self.proc.stdin.close()
            except OSError:
                pass
            try:
                self.proc.wait(timeout=1.0)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()
        elif self.proc.stdin:
            try:
                self.proc.stdin.close()
            except OSError:
                pass

    def __enter__(self) -> "ExternalHeuristic":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
