"""Pure-Python kernels, used when the compiled extension is unavailable.

``exact_cover`` mirrors the compiled version step for step (same column
choice, same row order, same node accounting).
"""

from __future__ import annotations

import numpy as np

FOUND, EXHAUSTED, BUDGET, CANCELLED = 0, 1, 2, 3


def pair_counts(blocks, v: int) -> np.ndarray:
    blocks = np.asarray(blocks, dtype=np.int64)
    counts = np.zeros(v * (v - 1) // 2, dtype=np.int32)
    if blocks.size == 0:
        return counts
    k = blocks.shape[1]
    idx = []
    for x in range(k):
        for y in range(x + 1, k):
            p, q = blocks[:, x], blocks[:, y]
            lo, hi = np.minimum(p, q), np.maximum(p, q)
            keep = lo != hi
            idx.append(hi[keep] * (hi[keep] - 1) // 2 + lo[keep])
    flat = np.concatenate(idx)
    counts += np.bincount(flat, minlength=counts.size).astype(np.int32)
    return counts


def exact_cover(n_cols, row_ptr, row_cols, forced, max_nodes, branching, cancel):
    row_ptr = [int(x) for x in row_ptr]
    row_cols = [int(x) for x in row_cols]
    forced = [int(x) for x in forced]
    n_rows = len(row_ptr) - 1
    total = 1 + n_cols + row_ptr[n_rows]
    L = [0] * total
    R = [0] * total
    U = [0] * total
    D = [0] * total
    C = [0] * total
    ROW = [0] * total
    S = [0] * (n_cols + 1)
    covered = [False] * (n_cols + 1)
    for c in range(n_cols + 1):
        L[c], R[c], U[c], D[c], C[c] = c - 1, c + 1, c, c, c
    L[0] = n_cols
    R[n_cols] = 0

    first_of = [-1] * n_rows
    x = n_cols + 1
    for r in range(n_rows):
        first = prev = -1
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
                L[x] = R[x] = x
            else:
                L[x] = prev
                R[x] = first
                R[prev] = x
                L[first] = x
            prev = x
            x += 1
        first_of[r] = first

    def cover(c):
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

    def uncover(c):
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

    conflict = False
    for r in forced:
        first = first_of[r]
        x = first
        while True:
            if covered[C[x]]:
                conflict = True
            x = R[x]
            if x == first:
                break
        if conflict:
            break
        x = first
        while True:
            covered[C[x]] = True
            cover(C[x])
            x = R[x]
            if x == first:
                break

    O = [0] * (n_cols + 2)
    CAT = [0] * (n_cols + 2)
    level = maxdepth = 0
    nodes = 0
    status = EXHAUSTED
    if not conflict:
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
                cover(best)
                CAT[level] = best
                O[level] = D[best]
                state = 1
            elif state == 1:
                r = O[level]
                c = CAT[level]
                if r == c:
                    uncover(c)
                    state = 2
                    continue
                if max_nodes > 0 and nodes >= max_nodes:
                    status = BUDGET
                    break
                nodes += 1
                if (nodes & 1023) == 0 and cancel[0] != 0:
                    status = CANCELLED
                    break
                j = R[r]
                while j != r:
                    cover(C[j])
                    j = R[j]
                level += 1
                maxdepth = max(maxdepth, level)
                state = 0
            else:
                if level == 0:
                    status = EXHAUSTED
                    break
                level -= 1
                r = O[level]
                j = L[r]
                while j != r:
                    uncover(C[j])
                    j = L[j]
                O[level] = D[r]
                state = 1

    solution = []
    if status == FOUND:
        solution = list(forced) + [ROW[O[j]] for j in range(level)]
    return status, np.asarray(solution, dtype=np.int32), nodes, maxdepth + len(forced)
