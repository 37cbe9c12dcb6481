"""Pure-Python versions of the hot kernels.

Every function here has a twin with the same signature in ``_kernels.pyx``.
Edges are given as two parallel lists ``eu``/``ev`` of endpoints plus a
``mask`` (any indexable of truthy/falsy values) selecting the live ones.
Self-loops are ignored by all kernels.
"""

from __future__ import annotations

from typing import Sequence

FOUND = 1
INFEASIBLE = 0
BUDGET = -1


def _adjacency(n: int, eu: Sequence[int], ev: Sequence[int], mask) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in range(len(eu)):
        if mask[i]:
            u = eu[i]
            v = ev[i]
            if u != v:
                adj[u].append((v, i))
                adj[v].append((u, i))
    return adj


def bridges(n: int, eu: Sequence[int], ev: Sequence[int], mask) -> list[int]:
    """Indices of masked edges that are bridges, in discovery order."""
    adj = _adjacency(n, eu, ev, mask)
    disc = [-1] * n
    low = [0] * n
    out: list[int] = []
    clock = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            for w, i in it:
                if i == via:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, i, iter(adj[w])))
                    break
                if disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] > disc[p]:
                        out.append(via)
    return out


def is_two_edge_connected(n: int, eu: Sequence[int], ev: Sequence[int], mask) -> bool:
    """True iff the masked edges connect all ``n`` nodes without a bridge."""
    if n <= 1:
        return True
    adj = _adjacency(n, eu, ev, mask)
    disc = [-1] * n
    low = [0] * n
    disc[0] = low[0] = 0
    clock = 1
    stack = [(0, -1, iter(adj[0]))]
    while stack:
        v, via, it = stack[-1]
        for w, i in it:
            if i == via:
                continue
            if disc[w] == -1:
                disc[w] = low[w] = clock
                clock += 1
                stack.append((w, i, iter(adj[w])))
                break
            if disc[w] < low[v]:
                low[v] = disc[w]
        else:
            stack.pop()
            if stack:
                p = stack[-1][0]
                if low[v] < low[p]:
                    low[p] = low[v]
                if low[v] > disc[p]:
                    return False
    return clock == n


def min_2ecss(n: int, eu: Sequence[int], ev: Sequence[int], size: int,
              budget: int) -> tuple[int, list[int]]:
    """Search for a 2EC spanning subgraph with at most ``size`` edges.

    Branches on edges in index order, include before exclude, so the first
    solution found is the lexicographically smallest one of its size.
    Returns ``(FOUND, edges)``, ``(INFEASIBLE, [])`` once the search space is
    exhausted, or ``(BUDGET, [])`` after ``budget`` search nodes.
    """
    m = len(eu)
    if n <= 1:
        return FOUND, []
    status = [0] * m  # 0 undecided, 1 in, -1 out
    for i in range(m):
        if eu[i] == ev[i]:
            status[i] = -1
    inc: list[list[int]] = [[] for _ in range(n)]
    for i in range(m):
        if status[i] == 0:
            inc[eu[i]].append(i)
            inc[ev[i]].append(i)
    avail = [1 if s == 0 else 0 for s in status]
    if not is_two_edge_connected(n, eu, ev, avail):
        return INFEASIBLE, []
    deg_in = [0] * n
    deg_av = [len(inc[v]) for v in range(n)]
    counter = [0]
    n_in = [0]

    def set_in(i: int, trail: list[int]) -> None:
        status[i] = 1
        deg_in[eu[i]] += 1
        deg_in[ev[i]] += 1
        n_in[0] += 1
        trail.append(i)

    def set_out(i: int, trail: list[int]) -> None:
        status[i] = -1
        avail[i] = 0
        deg_av[eu[i]] -= 1
        deg_av[ev[i]] -= 1
        trail.append(i)

    def undo(trail: list[int]) -> None:
        for i in reversed(trail):
            if status[i] == 1:
                deg_in[eu[i]] -= 1
                deg_in[ev[i]] -= 1
                n_in[0] -= 1
            else:
                avail[i] = 1
                deg_av[eu[i]] += 1
                deg_av[ev[i]] += 1
            status[i] = 0

    def propagate(trail: list[int]) -> bool:
        # nodes with exactly two available edges need both of them
        changed = True
        while changed:
            changed = False
            for v in range(n):
                if deg_av[v] < 2:
                    return False
                if deg_av[v] == 2 and deg_in[v] < 2:
                    for i in inc[v]:
                        if status[i] == 0:
                            set_in(i, trail)
                            changed = True
            if n_in[0] > size:
                return False
        return True

    def lower_bound() -> int:
        total = 0
        for v in range(n):
            d = deg_in[v]
            total += d if d > 2 else 2
        return (total + 1) // 2

    def rec(pos: int) -> bool:
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget
        if n_in[0] > size or lower_bound() > size:
            return False
        while pos < m and status[pos] != 0:
            pos += 1
        if n_in[0] == size or pos == m:
            mask = [1 if s == 1 else 0 for s in status]
            return is_two_edge_connected(n, eu, ev, mask)
        trail: list[int] = []
        set_in(pos, trail)
        if propagate(trail) and rec(pos + 1):
            return True
        undo(trail)
        trail = []
        set_out(pos, trail)
        if (propagate(trail) and is_two_edge_connected(n, eu, ev, avail)
                and rec(pos + 1)):
            return True
        undo(trail)
        return False

    root: list[int] = []
    try:
        if propagate(root) and rec(0):
            return FOUND, [i for i in range(m) if status[i] == 1]
    except _Budget:
        return BUDGET, []
    return INFEASIBLE, []


class _Budget(Exception):
    pass
