"""Command line entry: ``heuristic-host SOURCE`` or ``python -m heuristic_host SOURCE``."""

import sys

from . import serve


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: heuristic-host SOURCE.py", file=sys.stderr)
        return 2
    return serve(argv[0])


if __name__ == "__main__":
    sys.exit(main())
