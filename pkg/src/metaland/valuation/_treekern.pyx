# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tree-growing kernel.

Twin of ``_treekern_py.grow_tree``; must stay bit-for-bit equivalent (same
scan order, same accumulation order, same tie-breaking). See the Python
module for the algorithm description.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

KERNEL_NAME = "cython"


def grow_tree(values, grad, col_ids, sorted_idx, int max_depth, int min_leaf, double lam):
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] values_c = np.ascontiguousarray(values, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] grad_c = np.ascontiguousarray(grad, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode="c"] cols_c = np.ascontiguousarray(col_ids, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] idx = np.ascontiguousarray(sorted_idx, dtype=np.int32).copy()

    cdef int k = idx.shape[0]
    cdef int m = idx.shape[1]
    cdef int cap = 2 * m + 3

    cdef cnp.ndarray[cnp.int32_t, ndim=1] feature = np.zeros(cap, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] threshold = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] left = np.zeros(cap, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] right = np.zeros(cap, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] value = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] count = np.zeros(cap, dtype=np.int32)
    cdef int n_nodes = 1

    # manual DFS stack: lo, hi, depth, slot
    cdef cnp.ndarray[cnp.int32_t, ndim=2] stack = np.zeros((cap, 4), dtype=np.int32)
    cdef int sp = 0
    stack[0, 0] = 0
    stack[0, 1] = m
    stack[0, 2] = 0
    stack[0, 3] = 0
    sp = 1

    cdef cnp.ndarray[cnp.int32_t, ndim=1] scratch = np.zeros(m, dtype=np.int32)

    cdef int lo, hi, depth, slot, size
    cdef int f, i, row, cid, best_f, nl, nr, pos_l, pos_r
    cdef double g_total, h_total, parent_score, gl, hl, gr, hr, gain, best_gain, best_thr, vi, vnext
    cdef int left_slot, right_slot

    while sp > 0:
        sp -= 1
        lo = stack[sp, 0]
        hi = stack[sp, 1]
        depth = stack[sp, 2]
        slot = stack[sp, 3]
        size = hi - lo

        g_total = 0.0
        for i in range(lo, hi):
            g_total += grad_c[idx[0, i]]
        h_total = <double>size
        parent_score = g_total * g_total / (h_total + lam)

        best_gain = 0.0
        best_f = -1
        best_thr = 0.0

        if depth < max_depth and size >= 2 * min_leaf:
            for f in range(k):
                cid = cols_c[f]
                gl = 0.0
                for i in range(size - 1):
                    row = idx[f, lo + i]
                    gl += grad_c[row]
                    vi = values_c[row, cid]
                    vnext = values_c[idx[f, lo + i + 1], cid]
                    if vnext <= vi:
                        continue
                    hl = <double>(i + 1)
                    if i + 1 < min_leaf or size - i - 1 < min_leaf:
                        continue
                    gr = g_total - gl
                    hr = h_total - hl
                    gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent_score
                    if gain > best_gain:
                        best_gain = gain
                        best_f = f
                        best_thr = (vi + vnext) / 2.0

        count[slot] = size
        if best_f < 0:
            feature[slot] = -1
            threshold[slot] = 0.0
            left[slot] = -1
            right[slot] = -1
            value[slot] = -g_total / (h_total + lam)
            continue

        cid = cols_c[best_f]
        nl = 0
        # stable two-pass partition of every feature's ordering
        for f in range(k):
            pos_l = 0
            pos_r = 0
            for i in range(lo, hi):
                row = idx[f, i]
                if values_c[row, cid] < best_thr:
                    idx[f, lo + pos_l] = row
                    pos_l += 1
                else:
                    scratch[pos_r] = row
                    pos_r += 1
            for i in range(pos_r):
                idx[f, lo + pos_l + i] = scratch[i]
            nl = pos_l

        feature[slot] = cid
        threshold[slot] = best_thr
        left_slot = n_nodes
        right_slot = n_nodes + 1
        n_nodes += 2
        left[slot] = left_slot
        right[slot] = right_slot
        stack[sp, 0] = lo + nl
        stack[sp, 1] = hi
        stack[sp, 2] = depth + 1
        stack[sp, 3] = right_slot
        sp += 1
        stack[sp, 0] = lo
        stack[sp, 1] = lo + nl
        stack[sp, 2] = depth + 1
        stack[sp, 3] = left_slot
        sp += 1

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
        count[:n_nodes].copy(),
    )
