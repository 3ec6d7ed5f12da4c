"""Small graph routines on adjacency lists (nodes are 0..n-1)."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


def tarjan(succ: Sequence[Iterable[int]], nodes: Iterable[int] | None = None) -> list[list[int]]:
    """Strongly connected components of the subgraph induced by `nodes`.

    Iterative, so deep automata do not hit the recursion limit.
    Components come out in reverse topological order.
    """
    if nodes is None:
        nodes = range(len(succ))
    allowed = set(nodes)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in sorted(allowed):
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in allowed:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def is_cyclic(comp: Sequence[int], succ: Sequence[Iterable[int]]) -> bool:
    """True when the component carries at least one cycle."""
    if len(comp) > 1:
        return True
    v = comp[0]
    return v in succ[v]


def reachable(succ: Sequence[Iterable[int]], sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def predecessors(succ: Sequence[Iterable[int]]) -> list[list[int]]:
    pred: list[list[int]] = [[] for _ in succ]
    for v, ws in enumerate(succ):
        for w in ws:
            pred[w].append(v)
    return pred


def shortest_path(succ: Sequence[Iterable[int]], src: int, dst: int, allowed=None) -> list[int] | None:
    """Node path src..dst (inclusive) using at least one edge when src == dst."""
    parent: dict[int, int] = {}
    queue = deque()
    for w in succ[src]:
        if (allowed is None or w in allowed) and w not in parent:
            parent[w] = src
            queue.append(w)
    while queue:
        v = queue.popleft()
        if v == dst:
            path = [v]
            while True:
                v = parent[v]
                path.append(v)
                if v == src and len(path) > 1:
                    break
            return path[::-1]
        for w in succ[v]:
            if (allowed is None or w in allowed) and w not in parent:
                parent[w] = v
                queue.append(w)
    return None
