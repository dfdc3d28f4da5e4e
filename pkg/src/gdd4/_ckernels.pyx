# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: pair counting and dancing-links exact cover.

The search follows exactly the same step order as ``_pykernels`` so both
backends report identical node counts and solutions.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    FOUND = 0
    EXHAUSTED = 1
    BUDGET = 2
    CANCELLED = 3


def pair_counts(const int[:, :] blocks, int v):
    """Times each unordered pair {i<j} occurs, indexed j*(j-1)/2 + i."""
    cdef Py_ssize_t npairs = <Py_ssize_t>v * (v - 1) // 2
    out = np.zeros(npairs, dtype=np.int32)
    cdef int[:] counts = out
    cdef Py_ssize_t b, x, y
    cdef int p, q, lo, hi
    cdef Py_ssize_t nb = blocks.shape[0], k = blocks.shape[1]
    for b in range(nb):
        for x in range(k):
            p = blocks[b, x]
            for y in range(x + 1, k):
                q = blocks[b, y]
                if p == q:
                    continue
                if p < q:
                    lo = p; hi = q
                else:
                    lo = q; hi = p
                counts[<Py_ssize_t>hi * (hi - 1) // 2 + lo] += 1
    return out


cdef inline void _cover(int c, int *L, int *R, int *U, int *D, int *C, int *S) noexcept nogil:
    cdef int i, j
    L[R[c]] = L[c]
    R[L[c]] = R[c]
    i = D[c]
    while i != c:
        j = R[i]
        while j != i:
            U[D[j]] = U[j]
            D[U[j]] = D[j]
            S[C[j]] -= 1
            j = R[j]
        i = D[i]


cdef inline void _uncover(int c, int *L, int *R, int *U, int *D, int *C, int *S) noexcept nogil:
    cdef int i, j
    i = U[c]
    while i != c:
        j = L[i]
        while j != i:
            S[C[j]] += 1
            U[D[j]] = j
            D[U[j]] = j
            j = L[j]
        i = U[i]
    L[R[c]] = c
    R[L[c]] = c


def exact_cover(int n_cols, const int[:] row_ptr, const int[:] row_cols,
                const int[:] forced, long long max_nodes, int branching,
                int[:] cancel):
    """Find one exact cover of columns 0..n_cols-1.

    Row r covers ``row_cols[row_ptr[r]:row_ptr[r+1]]``. ``forced`` rows are
    taken before the search starts. ``branching`` 0 picks the column with
    fewest candidates (lowest index on ties), 1 the lowest-index column.
    Returns (status, solution rows, nodes, max depth).
    """
    cdef int n_rows = row_ptr.shape[0] - 1
    cdef int nnz = row_ptr[n_rows]
    cdef int total = 1 + n_cols + nnz
    cdef int *L = <int *>malloc(total * sizeof(int))
    cdef int *R = <int *>malloc(total * sizeof(int))
    cdef int *U = <int *>malloc(total * sizeof(int))
    cdef int *D = <int *>malloc(total * sizeof(int))
    cdef int *C = <int *>malloc(total * sizeof(int))
    cdef int *ROW = <int *>malloc(total * sizeof(int))
    cdef int *S = <int *>malloc((n_cols + 1) * sizeof(int))
    cdef int *FIRST = <int *>malloc((n_rows + 1) * sizeof(int))
    cdef int *O = <int *>malloc((n_cols + 2) * sizeof(int))
    cdef int *CAT = <int *>malloc((n_cols + 2) * sizeof(int))
    cdef char *COVERED = <char *>malloc((n_cols + 1) * sizeof(char))
    if (L == NULL or R == NULL or U == NULL or D == NULL or C == NULL or ROW == NULL
            or S == NULL or FIRST == NULL or O == NULL or CAT == NULL or COVERED == NULL):
        free(L); free(R); free(U); free(D); free(C); free(ROW); free(S)
        free(FIRST); free(O); free(CAT); free(COVERED)
        raise MemoryError()

    cdef int c, r, x, j, first, prev, col, best, bestsize
    cdef int level = 0, maxdepth = 0, status = EXHAUSTED, state = 0
    cdef long long nodes = 0
    cdef int nforced = forced.shape[0]
    cdef int conflict = 0
    cdef int *cancel_ptr = &cancel[0]

    for c in range(n_cols + 1):
        L[c] = c - 1
        R[c] = c + 1
        U[c] = c
        D[c] = c
        C[c] = c
        S[c] = 0
        COVERED[c] = 0
    L[0] = n_cols
    R[n_cols] = 0

    x = n_cols + 1
    for r in range(n_rows):
        first = -1
        prev = -1
        FIRST[r] = -1
        for j in range(row_ptr[r], row_ptr[r + 1]):
            col = row_cols[j] + 1
            U[x] = U[col]
            D[x] = col
            D[U[col]] = x
            U[col] = x
            C[x] = col
            ROW[x] = r
            S[col] += 1
            if first < 0:
                first = x
                L[x] = x
                R[x] = x
            else:
                L[x] = prev
                R[x] = first
                R[prev] = x
                L[first] = x
            prev = x
            x += 1
        FIRST[r] = first

    for j in range(nforced):
        r = forced[j]
        first = FIRST[r]
        x = first
        while True:
            if COVERED[C[x]]:
                conflict = 1
            x = R[x]
            if x == first:
                break
        if conflict:
            break
        x = first
        while True:
            COVERED[C[x]] = 1
            _cover(C[x], L, R, U, D, C, S)
            x = R[x]
            if x == first:
                break

    with nogil:
        if conflict:
            status = EXHAUSTED
        else:
            # state 0: pick a column; 1: try row O[level]; 2: backtrack
            state = 0
            while True:
                if state == 0:
                    if R[0] == 0:
                        status = FOUND
                        break
                    best = R[0]
                    if branching == 0:
                        bestsize = S[best]
                        c = R[best]
                        while c != 0 and bestsize > 0:
                            if S[c] < bestsize:
                                best = c
                                bestsize = S[c]
                            c = R[c]
                    _cover(best, L, R, U, D, C, S)
                    CAT[level] = best
                    O[level] = D[best]
                    state = 1
                elif state == 1:
                    r = O[level]
                    c = CAT[level]
                    if r == c:
                        _uncover(c, L, R, U, D, C, S)
                        state = 2
                        continue
                    if max_nodes > 0 and nodes >= max_nodes:
                        status = BUDGET
                        break
                    nodes += 1
                    if (nodes & 1023) == 0 and cancel_ptr[0] != 0:
                        status = CANCELLED
                        break
                    j = R[r]
                    while j != r:
                        _cover(C[j], L, R, U, D, C, S)
                        j = R[j]
                    level += 1
                    if level > maxdepth:
                        maxdepth = level
                    state = 0
                else:
                    if level == 0:
                        status = EXHAUSTED
                        break
                    level -= 1
                    r = O[level]
                    j = L[r]
                    while j != r:
                        _uncover(C[j], L, R, U, D, C, S)
                        j = L[j]
                    O[level] = D[r]
                    state = 1

    solution = []
    if status == FOUND:
        solution = [forced[j] for j in range(nforced)]
        for j in range(level):
            solution.append(ROW[O[j]])
    free(L); free(R); free(U); free(D); free(C); free(ROW); free(S)
    free(FIRST); free(O); free(CAT); free(COVERED)
    return status, np.asarray(solution, dtype=np.int32), nodes, maxdepth + nforced
