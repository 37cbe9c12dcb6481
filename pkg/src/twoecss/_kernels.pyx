# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_kernels_py`` for the contract."""

from libc.stdlib cimport malloc, free

cdef enum:
    FOUND = 1
    INFEASIBLE = 0
    BUDGET = -1


cdef struct Csr:
    int n
    int m
    int *start
    int *nbr
    int *eid


cdef int build_csr(Csr *g, int n, list eu, list ev, object mask, bint use_mask) except -1:
    cdef int m = len(eu)
    cdef int i, u, v, k
    cdef int *deg = <int *> malloc((n + 1) * sizeof(int))
    g.n = n
    g.m = m
    g.start = <int *> malloc((n + 1) * sizeof(int))
    g.nbr = <int *> malloc((2 * m + 1) * sizeof(int))
    g.eid = <int *> malloc((2 * m + 1) * sizeof(int))
    for i in range(n + 1):
        deg[i] = 0
    for i in range(m):
        if use_mask and not mask[i]:
            continue
        u = eu[i]
        v = ev[i]
        if u == v:
            continue
        deg[u] += 1
        deg[v] += 1
    g.start[0] = 0
    for i in range(n):
        g.start[i + 1] = g.start[i] + deg[i]
        deg[i] = g.start[i]
    for i in range(m):
        if use_mask and not mask[i]:
            continue
        u = eu[i]
        v = ev[i]
        if u == v:
            continue
        k = deg[u]
        g.nbr[k] = v
        g.eid[k] = i
        deg[u] += 1
        k = deg[v]
        g.nbr[k] = u
        g.eid[k] = i
        deg[v] += 1
    free(deg)
    return 0


cdef void free_csr(Csr *g):
    free(g.start)
    free(g.nbr)
    free(g.eid)


cdef int lowpoint(Csr *g, const char *alive, int *disc, int *low, int *stack_v,
                  int *stack_via, int *stack_pos, int *out, bint stop_early,
                  int *n_out) nogil:
    """Iterative lowpoint DFS over all roots.

    Writes bridge edge ids to ``out`` (count in ``n_out``); returns the number
    of DFS trees, or -1 when ``stop_early`` and a bridge was found.
    """
    cdef int n = g.n
    cdef int clock = 0, trees = 0, top, v, w, i, k, p, via
    n_out[0] = 0
    for v in range(n):
        disc[v] = -1
    for v in range(n):
        if disc[v] != -1:
            continue
        trees += 1
        disc[v] = clock
        low[v] = clock
        clock += 1
        top = 0
        stack_v[0] = v
        stack_via[0] = -1
        stack_pos[0] = g.start[v]
        while top >= 0:
            w = stack_v[top]
            k = stack_pos[top]
            via = stack_via[top]
            while k < g.start[w + 1]:
                i = g.eid[k]
                if alive != NULL and not alive[i]:
                    k += 1
                    continue
                if i == via:
                    k += 1
                    continue
                p = g.nbr[k]
                if disc[p] == -1:
                    break
                if disc[p] < low[w]:
                    low[w] = disc[p]
                k += 1
            if k < g.start[w + 1]:
                stack_pos[top] = k + 1
                p = g.nbr[k]
                disc[p] = clock
                low[p] = clock
                clock += 1
                top += 1
                stack_v[top] = p
                stack_via[top] = g.eid[k]
                stack_pos[top] = g.start[p]
            else:
                top -= 1
                if top >= 0:
                    p = stack_v[top]
                    if low[w] < low[p]:
                        low[p] = low[w]
                    if low[w] > disc[p]:
                        if stop_early:
                            return -1
                        out[n_out[0]] = via
                        n_out[0] += 1
    return trees


def bridges(int n, list eu, list ev, object mask):
    cdef Csr g
    cdef int m = len(eu)
    cdef int n_out = 0, i
    if n == 0:
        return []
    build_csr(&g, n, eu, ev, mask, True)
    cdef int *disc = <int *> malloc(n * sizeof(int))
    cdef int *low = <int *> malloc(n * sizeof(int))
    cdef int *sv = <int *> malloc((n + 1) * sizeof(int))
    cdef int *svia = <int *> malloc((n + 1) * sizeof(int))
    cdef int *spos = <int *> malloc((n + 1) * sizeof(int))
    cdef int *out = <int *> malloc((m + 1) * sizeof(int))
    lowpoint(&g, NULL, disc, low, sv, svia, spos, out, False, &n_out)
    result = [out[i] for i in range(n_out)]
    free(disc); free(low); free(sv); free(svia); free(spos); free(out)
    free_csr(&g)
    return result


def is_two_edge_connected(int n, list eu, list ev, object mask):
    cdef Csr g
    cdef int m = len(eu)
    cdef int n_out = 0, trees
    if n <= 1:
        return True
    build_csr(&g, n, eu, ev, mask, True)
    cdef int *disc = <int *> malloc(n * sizeof(int))
    cdef int *low = <int *> malloc(n * sizeof(int))
    cdef int *sv = <int *> malloc((n + 1) * sizeof(int))
    cdef int *svia = <int *> malloc((n + 1) * sizeof(int))
    cdef int *spos = <int *> malloc((n + 1) * sizeof(int))
    trees = lowpoint(&g, NULL, disc, low, sv, svia, spos, NULL, True, &n_out)
    free(disc); free(low); free(sv); free(svia); free(spos)
    free_csr(&g)
    return trees == 1


cdef struct Search:
    Csr g
    int n
    int m
    int size
    long budget
    long counter
    int n_in
    int *eu
    int *ev
    signed char *status
    char *avail
    char *chosen
    int *deg_in
    int *deg_av
    int *trail
    int trail_len
    int *disc
    int *low
    int *sv
    int *svia
    int *spos


cdef bint avail_2ec(Search *s) nogil:
    cdef int n_out = 0
    return lowpoint(&s.g, s.avail, s.disc, s.low, s.sv, s.svia, s.spos, NULL,
                    True, &n_out) == 1


cdef bint chosen_2ec(Search *s) nogil:
    cdef int n_out = 0, i
    for i in range(s.m):
        s.chosen[i] = 1 if s.status[i] == 1 else 0
    return lowpoint(&s.g, s.chosen, s.disc, s.low, s.sv, s.svia, s.spos, NULL,
                    True, &n_out) == 1


cdef inline void set_in(Search *s, int i) nogil:
    s.status[i] = 1
    s.deg_in[s.eu[i]] += 1
    s.deg_in[s.ev[i]] += 1
    s.n_in += 1
    s.trail[s.trail_len] = i
    s.trail_len += 1


cdef inline void set_out(Search *s, int i) nogil:
    s.status[i] = -1
    s.avail[i] = 0
    s.deg_av[s.eu[i]] -= 1
    s.deg_av[s.ev[i]] -= 1
    s.trail[s.trail_len] = i
    s.trail_len += 1


cdef void undo(Search *s, int mark) nogil:
    cdef int i
    while s.trail_len > mark:
        s.trail_len -= 1
        i = s.trail[s.trail_len]
        if s.status[i] == 1:
            s.deg_in[s.eu[i]] -= 1
            s.deg_in[s.ev[i]] -= 1
            s.n_in -= 1
        else:
            s.avail[i] = 1
            s.deg_av[s.eu[i]] += 1
            s.deg_av[s.ev[i]] += 1
        s.status[i] = 0


cdef bint propagate(Search *s) nogil:
    cdef bint changed = True
    cdef int v, k, i
    while changed:
        changed = False
        for v in range(s.n):
            if s.deg_av[v] < 2:
                return False
            if s.deg_av[v] == 2 and s.deg_in[v] < 2:
                for k in range(s.g.start[v], s.g.start[v + 1]):
                    i = s.g.eid[k]
                    if s.status[i] == 0:
                        set_in(s, i)
                        changed = True
        if s.n_in > s.size:
            return False
    return True


cdef int lower_bound(Search *s) nogil:
    cdef int total = 0, v, d
    for v in range(s.n):
        d = s.deg_in[v]
        total += d if d > 2 else 2
    return (total + 1) // 2


cdef int rec(Search *s, int pos) nogil:
    cdef int mark, r
    s.counter += 1
    if s.counter > s.budget:
        return BUDGET
    if s.n_in > s.size or lower_bound(s) > s.size:
        return INFEASIBLE
    while pos < s.m and s.status[pos] != 0:
        pos += 1
    if s.n_in == s.size or pos == s.m:
        return FOUND if chosen_2ec(s) else INFEASIBLE
    mark = s.trail_len
    set_in(s, pos)
    if propagate(s):
        r = rec(s, pos + 1)
        if r != INFEASIBLE:
            return r
    undo(s, mark)
    set_out(s, pos)
    if propagate(s) and avail_2ec(s):
        r = rec(s, pos + 1)
        if r != INFEASIBLE:
            return r
    undo(s, mark)
    return INFEASIBLE


def min_2ecss(int n, list eu, list ev, int size, long budget):
    cdef Search s
    cdef int m = len(eu)
    cdef int i, r
    if n <= 1:
        return FOUND, []
    build_csr(&s.g, n, eu, ev, None, False)
    s.n = n
    s.m = m
    s.size = size
    s.budget = budget
    s.counter = 0
    s.n_in = 0
    s.eu = <int *> malloc((m + 1) * sizeof(int))
    s.ev = <int *> malloc((m + 1) * sizeof(int))
    s.status = <signed char *> malloc((m + 1) * sizeof(signed char))
    s.avail = <char *> malloc((m + 1) * sizeof(char))
    s.chosen = <char *> malloc((m + 1) * sizeof(char))
    s.deg_in = <int *> malloc((n + 1) * sizeof(int))
    s.deg_av = <int *> malloc((n + 1) * sizeof(int))
    s.trail = <int *> malloc((2 * m + 2) * sizeof(int))
    s.trail_len = 0
    s.disc = <int *> malloc(n * sizeof(int))
    s.low = <int *> malloc(n * sizeof(int))
    s.sv = <int *> malloc((n + 1) * sizeof(int))
    s.svia = <int *> malloc((n + 1) * sizeof(int))
    s.spos = <int *> malloc((n + 1) * sizeof(int))
    for i in range(n):
        s.deg_in[i] = 0
        s.deg_av[i] = 0
    for i in range(m):
        s.eu[i] = eu[i]
        s.ev[i] = ev[i]
        if s.eu[i] == s.ev[i]:
            s.status[i] = -1
            s.avail[i] = 0
        else:
            s.status[i] = 0
            s.avail[i] = 1
            s.deg_av[s.eu[i]] += 1
            s.deg_av[s.ev[i]] += 1
    if not avail_2ec(&s):
        r = INFEASIBLE
    elif not propagate(&s):
        r = INFEASIBLE
    else:
        r = rec(&s, 0)
    result = [i for i in range(m) if s.status[i] == 1] if r == FOUND else []
    free(s.eu); free(s.ev); free(s.status); free(s.avail); free(s.chosen)
    free(s.deg_in); free(s.deg_av); free(s.trail)
    free(s.disc); free(s.low); free(s.sv); free(s.svia); free(s.spos)
    free_csr(&s.g)
    return r, result
