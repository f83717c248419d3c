"""Shared enumeration utilities for the tests: route spaces and Prufer trees."""

from __future__ import annotations

import heapq
from itertools import product


def canonical_patterns(length: int, blocks: int | None = None):
    """Restricted-growth label sequences of a given length.

    First occurrences appear in increasing order, so each sequence is one
    representative per relabelling orbit; `blocks` restricts to sequences
    using exactly that many distinct labels.
    """

    def rec(prefix: list[int], used: int):
        if len(prefix) == length:
            if blocks is None or used == blocks:
                yield tuple(prefix)
            return
        for v in range(1, min(used + 1, length) + 1):
            prefix.append(v)
            yield from rec(prefix, max(used, v))
            prefix.pop()

    yield from rec([], 0)


def surjective_routes(length: int, r: int):
    """All label sequences of the given length whose value set is exactly [r]."""
    full = set(range(1, r + 1))
    for t in product(range(1, r + 1), repeat=length):
        if set(t) == full:
            yield t


def all_canonical_routes(length: int):
    """All routes of the given length over every canonical prefix [r]."""
    for r in range(1, length + 1):
        yield from surjective_routes(length, r)


def prufer_to_tree(seq: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    """Decode a Prufer sequence over vertices 1..n into tree edges."""
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = leaves[0], leaves[1]
    edges.append((u, w))
    return edges


def spanning_trees_of_complete_bipartite(b_side: int, w_side: int):
    """All spanning trees of K_{b_side,w_side} by filtering Prufer decodings.

    Vertices 1..b_side form the left part, b_side+1..b_side+w_side the right;
    yields edge lists of the trees whose edges all cross the parts.
    """
    n = b_side + w_side
    if n == 1:
        yield []
        return
    left = set(range(1, b_side + 1))
    for seq in product(range(1, n + 1), repeat=n - 2):
        edges = prufer_to_tree(seq, n)
        if all((u in left) != (v in left) for u, v in edges):
            yield edges
