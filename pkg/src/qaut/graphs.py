"""Small graph helpers used across the solvers (iterative, deterministic order)."""

from __future__ import annotations

from collections import deque


def reachable(init, succ):
    """Set of nodes reachable from ``init`` via ``succ(node) -> iterable``."""
    seen = {init}
    queue = deque([init])
    while queue:
        node = queue.popleft()
        for nxt in succ(node):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def bfs_path(sources, targets, succ):
    """Shortest node path from any source to any target, or None.

    Deterministic: expansion follows the iteration order of ``succ``.
    """
    targets = set(targets)
    parent = {}
    queue = deque()
    for s in sources:
        if s not in parent:
            parent[s] = None
            queue.append(s)
            if s in targets:
                return [s]
    while queue:
        node = queue.popleft()
        for nxt in succ(node):
            if nxt not in parent:
                parent[nxt] = node
                if nxt in targets:
                    path = [nxt]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(nxt)
    return None


def strongly_connected_components(nodes, succ):
    """Tarjan's algorithm, iterative.  Returns a list of lists of nodes."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(comp)
    return sccs
