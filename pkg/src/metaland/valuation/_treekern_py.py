"""Pure-Python (numpy) tree-growing kernel.

Twin of the compiled extension in ``_treekern.pyx``: same inputs, same
outputs, bit-for-bit. Both scan candidate splits in ascending feature order
with sequential left-sum accumulation and first-wins tie-breaking, so the
two kernels build identical trees; only the speed differs. Keep any change
here in lock-step with the .pyx file.
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "python"


def grow_tree(values, grad, col_ids, sorted_idx, max_depth, min_leaf, lam):
    """Grow one regression tree on pre-sorted sample indices.

    values     float64 (n_rows, n_features), the full feature matrix
    grad       float64 (n_rows,), loss gradient per row (pred - target)
    col_ids    int32 (k,), global feature ids this tree may split on
    sorted_idx int32 (k, m), the tree's sample rows, per feature, in
               ascending feature-value order (stable)

    Returns (feature, threshold, left, right, value, count) arrays. Internal
    nodes carry a global feature id; leaves have feature == -1 and the raw
    leaf weight -G/(H+lam).
    """
    k, m = sorted_idx.shape
    idx = np.ascontiguousarray(sorted_idx, dtype=np.int32).copy()

    feature = [0]
    threshold = [0.0]
    left = [0]
    right = [0]
    value = [0.0]
    count = [0]

    def new_node():
        feature.append(0)
        threshold.append(0.0)
        left.append(0)
        right.append(0)
        value.append(0.0)
        count.append(0)
        return len(feature) - 1

    # preorder DFS; children are numbered left-then-right at split time
    stack = [(0, m, 0, 0)]
    while stack:
        lo, hi, depth, slot = stack.pop()
        size = hi - lo
        g0 = grad[idx[0, lo:hi]]
        csum0 = np.cumsum(g0)
        g_total = float(csum0[-1])
        h_total = float(size)

        best_gain = 0.0
        best_f = -1
        best_thr = 0.0
        parent_score = g_total * g_total / (h_total + lam)

        if depth < max_depth and size >= 2 * min_leaf:
            for f in range(k):
                rows = idx[f, lo:hi]
                v = values[rows, col_ids[f]]
                g = csum0 if f == 0 else np.cumsum(grad[rows])
                gl = g[:-1]
                hl = np.arange(1, size, dtype=np.float64)
                ok = (v[1:] > v[:-1]) & (hl >= min_leaf) & (size - hl >= min_leaf)
                if not ok.any():
                    continue
                gr = g_total - gl
                hr = h_total - hl
                gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent_score
                gain = np.where(ok, gain, -np.inf)
                i = int(np.argmax(gain))
                if gain[i] > best_gain:
                    best_gain = float(gain[i])
                    best_f = f
                    best_thr = (float(v[i]) + float(v[i + 1])) / 2.0

        count[slot] = size
        if best_f < 0:
            feature[slot] = -1
            threshold[slot] = 0.0
            left[slot] = -1
            right[slot] = -1
            value[slot] = -g_total / (h_total + lam)
            continue

        cid = int(col_ids[best_f])
        go_left = values[:, cid] < best_thr
        n_left = 0
        for f in range(k):
            block = idx[f, lo:hi]
            sel = go_left[block]
            left_rows = block[sel]
            right_rows = block[~sel]  # materialize before writing into the view
            n_left = len(left_rows)
            idx[f, lo : lo + n_left] = left_rows
            idx[f, lo + n_left : hi] = right_rows

        feature[slot] = cid
        threshold[slot] = best_thr
        left_slot = new_node()
        right_slot = new_node()
        left[slot] = left_slot
        right[slot] = right_slot
        stack.append((lo + n_left, hi, depth + 1, right_slot))
        stack.append((lo, lo + n_left, depth + 1, left_slot))

    return (
        np.array(feature, dtype=np.int32),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.int32),
        np.array(right, dtype=np.int32),
        np.array(value, dtype=np.float64),
        np.array(count, dtype=np.int32),
    )
