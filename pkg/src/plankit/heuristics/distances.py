"""Hop-count distance tables over static link atoms."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import inf


def bfs_distances(adjacency: dict, source) -> dict:
    """Hop distances from ``source`` over an adjacency dict (node -> iterable)."""

    dist = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        d = dist[node] + 1
        for nxt in adjacency.get(node, ()):
            if nxt not in dist:
                dist[nxt] = d
                queue.append(nxt)
    return dist


@dataclass
class DistanceTable:
    """All-pairs hop counts; missing pairs are infinite.

    ``distance(x, x)`` is 0 even for locations the table has never seen, so
    callers need not special-case isolated nodes.
    """

    locations: list
    index: dict
    dist: list  # row-major list of lists

    def distance(self, a, b) -> float:
        if a == b:
            return 0
        ia = self.index.get(a)
        ib = self.index.get(b)
        if ia is None or ib is None:
            return inf
        return self.dist[ia][ib]


def apsp_from_links(pairs, nodes=None, undirected: bool = True) -> DistanceTable:
    """Build a :class:`DistanceTable` from (a, b) link pairs via repeated BFS.

    ``pairs`` may also be ground atoms, in which case the first two arguments
    of each atom form the link (ternary links project onto them).
    """

    edges = []
    for pair in pairs:
        if hasattr(pair, "args"):
            a, b = pair.args[0], pair.args[1]
        else:
            a, b = pair[0], pair[1]
        edges.append((a, b))

    seen = set()
    locations = []

    def note(x):
        if x not in seen:
            seen.add(x)
            locations.append(x)

    if nodes is not None:
        for n in nodes:
            note(n)
    for a, b in edges:
        note(a)
        note(b)
    locations.sort()

    adjacency: dict = {}
    for a, b in edges:
        adjacency.setdefault(a, set()).add(b)
        if undirected:
            adjacency.setdefault(b, set()).add(a)

    index = {loc: i for i, loc in enumerate(locations)}
    matrix = []
    for loc in locations:
        row = [inf] * len(locations)
        for node, d in bfs_distances(adjacency, loc).items():
            row[index[node]] = d
        matrix.append(row)
    return DistanceTable(locations, index, matrix)
