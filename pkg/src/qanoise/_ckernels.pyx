# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled edit-distance kernels.

Same contract as :mod:`qanoise._pykernels`; selected by :mod:`qanoise.kernels`.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


cdef Py_ssize_t* _encode(seq, dict table, Py_ssize_t n) except NULL:
    cdef Py_ssize_t* out = <Py_ssize_t*> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i
    if out == NULL:
        raise MemoryError()
    if isinstance(seq, str):
        for i in range(n):
            out[i] = ord(seq[i])
    else:
        for i in range(n):
            item = seq[i]
            code = table.get(item)
            if code is None:
                code = len(table)
                table[item] = code
            out[i] = code
    return out


cdef inline Py_ssize_t _min3(Py_ssize_t a, Py_ssize_t b, Py_ssize_t c) nogil:
    if b < a:
        a = b
    if c < a:
        a = c
    return a


def levenshtein(a, b):
    """Unit-cost Levenshtein distance between two sequences."""
    cdef Py_ssize_t n = len(a), m = len(b)
    cdef Py_ssize_t i, j, cost, best
    cdef Py_ssize_t *sa
    cdef Py_ssize_t *sb
    cdef Py_ssize_t *prev
    cdef Py_ssize_t *cur
    cdef Py_ssize_t *tmp
    if n == 0:
        return m
    if m == 0:
        return n
    table = {}
    sa = _encode(a, table, n)
    sb = _encode(b, table, m)
    prev = <Py_ssize_t*> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    cur = <Py_ssize_t*> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    try:
        if prev == NULL or cur == NULL:
            raise MemoryError()
        with nogil:
            for j in range(m + 1):
                prev[j] = j
            for i in range(1, n + 1):
                cur[0] = i
                for j in range(1, m + 1):
                    cost = 0 if sa[i - 1] == sb[j - 1] else 1
                    cur[j] = _min3(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
                tmp = prev
                prev = cur
                cur = tmp
            best = prev[m]
        return best
    finally:
        PyMem_Free(sa)
        PyMem_Free(sb)
        PyMem_Free(prev)
        PyMem_Free(cur)


def osa_distance(a, b):
    """Levenshtein distance with adjacent transpositions (optimal string alignment)."""
    cdef Py_ssize_t n = len(a), m = len(b)
    cdef Py_ssize_t i, j, cost, v, best
    cdef Py_ssize_t *sa
    cdef Py_ssize_t *sb
    cdef Py_ssize_t *prev2
    cdef Py_ssize_t *prev
    cdef Py_ssize_t *cur
    cdef Py_ssize_t *tmp
    if n == 0:
        return m
    if m == 0:
        return n
    table = {}
    sa = _encode(a, table, n)
    sb = _encode(b, table, m)
    prev2 = <Py_ssize_t*> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    prev = <Py_ssize_t*> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    cur = <Py_ssize_t*> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    try:
        if prev2 == NULL or prev == NULL or cur == NULL:
            raise MemoryError()
        with nogil:
            for j in range(m + 1):
                prev[j] = j
                prev2[j] = 0
            for i in range(1, n + 1):
                cur[0] = i
                for j in range(1, m + 1):
                    cost = 0 if sa[i - 1] == sb[j - 1] else 1
                    v = _min3(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
                    if (i > 1 and j > 1 and sa[i - 1] == sb[j - 2]
                            and sa[i - 2] == sb[j - 1] and prev2[j - 2] + 1 < v):
                        v = prev2[j - 2] + 1
                    cur[j] = v
                tmp = prev2
                prev2 = prev
                prev = cur
                cur = tmp
            best = prev[m]
        return best
    finally:
        PyMem_Free(sa)
        PyMem_Free(sb)
        PyMem_Free(prev2)
        PyMem_Free(prev)
        PyMem_Free(cur)


def nearest(query, candidates):
    """Index and distance of the candidate closest to ``query`` (first wins on ties).

    Returns ``(-1, -1)`` for an empty candidate list.
    """
    cdef Py_ssize_t best_i = -1, best_d = -1, d, i
    for i in range(len(candidates)):
        d = levenshtein(query, candidates[i])
        if best_d < 0 or d < best_d:
            best_i = i
            best_d = d
    return best_i, best_d
