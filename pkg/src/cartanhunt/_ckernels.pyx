# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_kernels_py`` function for function."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


def closure_pairs(mul, gens, Py_ssize_t cap):
    cdef int[:, ::1] t = np.ascontiguousarray(mul, dtype=np.int32)
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t total = n * n
    cdef Py_ssize_t ng = len(gens)
    cdef cnp.int64_t[::1] ga = np.array([int(g) // n for g in gens], dtype=np.int64)
    cdef cnp.int64_t[::1] gb = np.array([int(g) % n for g in gens], dtype=np.int64)
    cdef cnp.uint8_t[::1] seen = np.zeros(total, dtype=np.uint8)
    cdef cnp.int64_t[::1] queue = np.empty(min(total, cap + 1), dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 1, count = 1, k
    cdef cnp.int64_t x, xa, xb, y
    seen[0] = 1
    queue[0] = 0
    while head < tail:
        x = queue[head]
        head += 1
        xa = x // n
        xb = x % n
        for k in range(ng):
            y = t[xa, ga[k]] * n + t[xb, gb[k]]
            if not seen[y]:
                seen[y] = 1
                count += 1
                if count > cap:
                    return None
                queue[tail] = y
                tail += 1
    return np.flatnonzero(np.asarray(seen)).tolist()


def check_associativity(table):
    cdef int[:, ::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = t.shape[0], a, b, c
    cdef int ab
    for a in range(n):
        for b in range(n):
            ab = t[a, b]
            for c in range(n):
                if t[ab, c] != t[a, t[b, c]]:
                    return (a, b, c)
    return None


def check_associativity_sampled(table, a, b, c):
    cdef int[:, ::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef cnp.int64_t[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef cnp.int64_t[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef cnp.int64_t[::1] cv = np.ascontiguousarray(c, dtype=np.int64)
    cdef Py_ssize_t i, m = av.shape[0]
    for i in range(m):
        if t[t[av[i], bv[i]], cv[i]] != t[av[i], t[bv[i], cv[i]]]:
            return (int(av[i]), int(bv[i]), int(cv[i]))
    return None


def regular_flags(table):
    cdef int[:, ::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = t.shape[0], x, a
    out = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] flags = out
    for x in range(n):
        for a in range(n):
            if t[t[x, a], x] == x:
                flags[x] = 1
                break
    return out


def j_components(table):
    cdef int[:, ::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = t.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] comp = out
    cdef cnp.int64_t[::1] index = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] low = np.zeros(n, dtype=np.int64)
    cdef cnp.uint8_t[::1] on_stack = np.zeros(n, dtype=np.uint8)
    cdef cnp.int64_t[::1] stack = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] work_v = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] work_pos = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t sp = 0, wp = 0, root
    cdef cnp.int64_t counter = 0, ncomp = 0, v, pos, w, u
    for root in range(n):
        if index[root] >= 0:
            continue
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        on_stack[root] = 1
        work_v[0] = root
        work_pos[0] = 0
        wp = 1
        while wp > 0:
            v = work_v[wp - 1]
            pos = work_pos[wp - 1]
            if pos < 2 * n:
                work_pos[wp - 1] = pos + 1
                if pos < n:
                    w = t[v, pos]
                else:
                    w = t[pos - n, v]
                if index[w] < 0:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    on_stack[w] = 1
                    work_v[wp] = w
                    work_pos[wp] = 0
                    wp += 1
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            wp -= 1
            if wp > 0:
                u = work_v[wp - 1]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    sp -= 1
                    w = stack[sp]
                    on_stack[w] = 0
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return out
