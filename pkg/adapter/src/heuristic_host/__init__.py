"""Host a Python heuristic module as a line-oriented JSON subprocess.

The hosted source file defines two functions::

    def initialize(task): ...      # called once, returns a context object
    def evaluate(ctx, state): ...  # called per state, returns a number

and this package wraps them in the wire protocol a search engine speaks
over stdin/stdout: an ``init`` message carrying the task (answered only on
failure), then ``eval`` messages each answered by exactly one ``value`` or
``error`` line.  Protocol problems and exceptions inside the hosted code
turn into ``error`` replies; the host itself keeps serving until stdin
closes.
"""

from __future__ import annotations

import importlib.util
import json
import math
import sys

__version__ = "0.1.0"

REQUIRED_ENTRY_POINTS = ("initialize", "evaluate")


def load_source(path: str):
    """Import the heuristic module from an arbitrary file path."""
    spec = importlib.util.spec_from_file_location("hosted_heuristic", path)
    if spec is None or spec.loader is None:
        raise ImportError(f"cannot load heuristic source {path!r}")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    for name in REQUIRED_ENTRY_POINTS:
        if not callable(getattr(module, name, None)):
            raise ImportError(f"heuristic source must define {name}()")
    return module


def encode_value(value) -> dict:
    """A value reply for ``value``, or an error reply when it is unusable.

    Only finite non-negative numbers and positive infinity are legal on the
    wire; everything else (negatives, NaN, bools, non-numbers) is reported
    rather than silently coerced.
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return {"kind": "error", "message": f"evaluate returned non-number {value!r}"}
    if isinstance(value, float) and math.isnan(value):
        return {"kind": "error", "message": "evaluate returned NaN"}
    if value == math.inf:
        return {"kind": "value", "value": "inf"}
    if value < 0:
        return {"kind": "error", "message": f"evaluate returned negative {value!r}"}
    return {"kind": "value", "value": value}


def serve(source_path: str, stdin=None, stdout=None) -> int:
    """Answer protocol messages until stdin closes; never raises outward."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    def reply(payload: dict) -> None:
        stdout.write(json.dumps(payload) + "\n")
        stdout.flush()

    def error(message: str) -> None:
        reply({"kind": "error", "message": message})

    try:
        module = load_source(source_path)
        load_failure = None
    except BaseException as exc:  # syntax errors, import-time crashes
        module = None
        load_failure = f"cannot load heuristic source: {exc}"

    ctx = None
    initialized = False

    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            message = json.loads(line)
        except ValueError:
            error(f"malformed message line: {line[:200]}")
            continue
        kind = message.get("kind") if isinstance(message, dict) else None

        if kind == "init":
            if load_failure is not None:
                error(load_failure)
            elif initialized:
                error("duplicate init message")
            else:
                try:
                    ctx = module.initialize(message["task"])
                    initialized = True
                except BaseException as exc:
                    error(f"initialize failed: {exc!r}")
        elif kind == "eval":
            if load_failure is not None:
                error(load_failure)
            elif not initialized:
                error("eval before init")
            else:
                try:
                    value = module.evaluate(ctx, message["state"])
                except BaseException as exc:
                    error(f"evaluate failed: {exc!r}")
                else:
                    reply(encode_value(value))
        else:
            error(f"unknown message kind: {kind!r}")
    return 0
