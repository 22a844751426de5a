"""Matchings in graphs and d-uniform set systems.

max_matching is an exact maximum cardinality matching for general graphs
(augmenting paths with blossom contraction, O(V^3)); greedy matchings on
odd cycles are otherwise off by one, so the contraction step is required
for correctness.  greedy_matching covers the d-uniform case, where exact
maximum matching is NP-hard and a maximal matching is within a factor d.
"""

from __future__ import annotations


def max_matching(n: int, edges) -> list[tuple[int, int]]:
    """Maximum matching of a graph on vertices 1..n.

    edges: iterable of (u, w) pairs, 1-based.  Returns the matched pairs.
    """
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, w in edges:
        u, w = u - 1, w - 1
        if u == w:
            continue
        adj[u].append(w)
        adj[w].append(u)

    match = [-1] * n
    p = [0] * n
    base = [0] * n

    def lca(a: int, b: int) -> int:
        used = [False] * n
        while True:
            a = base[a]
            used[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if used[b]:
                return b
            b = p[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def find_path(root: int) -> int:
        used = [False] * n
        for i in range(n):
            p[i] = -1
            base[i] = i
        used[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    # odd cycle: contract the blossom
                    cur_base = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur_base, to, blossom)
                    mark_path(to, cur_base, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur_base
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    for v in range(n):
        if match[v] == -1:
            end = find_path(v)
            while end != -1:
                prev = p[end]
                prev_match = match[prev]
                match[end] = prev
                match[prev] = end
                end = prev_match

    return sorted(
        (v + 1, match[v] + 1) for v in range(n) if match[v] > v
    )


def max_matching_size(n: int, edges) -> int:
    return len(max_matching(n, edges))


def greedy_matching(sets) -> list[frozenset]:
    """Maximal disjoint subfamily, scanning the given sets in sorted order.

    Deterministic: candidates are compared as sorted element tuples.
    """
    chosen: list[frozenset] = []
    used: set = set()
    for s in sorted((frozenset(s) for s in sets), key=lambda s: tuple(sorted(s))):
        if not (s & used):
            chosen.append(s)
            used |= s
    return chosen
