"""Pure-Python kernels; reference behaviour for the compiled ``_ckernels`` module.

All tables are square integer arrays where ``table[i][j]`` is the index of
the product of elements ``i`` and ``j``.
"""

import numpy as np


def closure_pairs(mul, gens, cap):
    """Subgroup of G x G generated by flat pair indices ``a * n + b``.

    Returns the sorted flat indices, or None when more than ``cap``
    elements are produced.
    """
    rows = mul.tolist() if hasattr(mul, "tolist") else mul
    n = len(rows)
    gens = [divmod(int(g), n) for g in gens]
    seen = {0}
    frontier = [0]
    while frontier:
        new = []
        for x in frontier:
            xa, xb = divmod(x, n)
            ra, rb = rows[xa], rows[xb]
            for sa, sb in gens:
                y = ra[sa] * n + rb[sb]
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        if len(seen) > cap:
            return None
        frontier = new
    return sorted(seen)


def check_associativity(table):
    """First triple (a, b, c) with (ab)c != a(bc), or None."""
    t = table.tolist()
    n = len(t)
    for a in range(n):
        ta = t[a]
        for b in range(n):
            tab = t[ta[b]]
            tb = t[b]
            for c in range(n):
                if tab[c] != ta[tb[c]]:
                    return (a, b, c)
    return None


def check_associativity_sampled(table, a, b, c):
    t = table.tolist()
    for x, y, w in zip(a.tolist(), b.tolist(), c.tolist()):
        if t[t[x][y]][w] != t[x][t[y][w]]:
            return (x, y, w)
    return None


def regular_flags(table):
    """flags[x] = 1 iff x * a * x == x for some a."""
    t = table.tolist()
    n = len(t)
    flags = np.zeros(n, dtype=np.uint8)
    for x in range(n):
        tx = t[x]
        for a in range(n):
            if t[tx[a]][x] == x:
                flags[x] = 1
                break
    return flags


def j_components(table):
    """Strongly connected components of x -> x*b, x -> a*x.

    With an identity present, y is reachable from x exactly when y lies in
    the two-sided ideal MxM, so the components are the J-classes.
    Component ids are arbitrary; callers normalise them.
    """
    t = table.tolist()
    cols = table.T.tolist()
    n = len(t)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, pos = work[-1]
            if pos < 2 * n:
                work[-1] = (v, pos + 1)
                w = t[v][pos] if pos < n else cols[v][pos - n]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return np.array(comp, dtype=np.int64)
