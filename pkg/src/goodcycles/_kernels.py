"""Compiled inner loops for the staged search.

Graphs are passed as padded adjacency arrays (max degree 3 in a
configuration graph); edge sets are int64 bitmasks, which caps a graph at 63
edges (``3·|E(H)|``, so ``|E(H)| <= 21``).
"""

import numpy as np
from numba import njit

MAX_EDGES = 63


@njit(cache=True)
def cycle_masks(adj_e, adj_w, deg, allowed, out):
    """Write the edge mask of every simple cycle within ``allowed`` to ``out``.

    Returns the number of cycles, or -1 if ``out`` is too small.
    """
    n = adj_e.shape[0]
    count = 0
    cap = out.shape[0]
    path_v = np.empty(n + 1, np.int64)
    path_e = np.empty(n + 1, np.int64)
    pos = np.empty(n + 1, np.int64)
    one = np.int64(1)
    for s in range(n):
        for k in range(deg[s]):
            e = adj_e[s, k]
            if adj_w[s, k] == s and (allowed >> e) & one:
                if count >= cap:
                    return -1
                out[count] = one << e
                count += 1
        depth = 0
        path_v[0] = s
        pos[0] = 0
        visited = one << s
        cur = np.int64(0)
        first = np.int64(-1)
        while depth >= 0:
            v = path_v[depth]
            if pos[depth] < deg[v]:
                k = pos[depth]
                pos[depth] += 1
                e = adj_e[v, k]
                w = adj_w[v, k]
                if w == v or not (allowed >> e) & one:
                    continue
                if w == s:
                    if depth >= 1 and first < e:
                        if count >= cap:
                            return -1
                        out[count] = cur | (one << e)
                        count += 1
                elif w > s and not (visited >> w) & one:
                    depth += 1
                    path_v[depth] = w
                    path_e[depth] = e
                    pos[depth] = 0
                    visited |= one << w
                    cur |= one << e
                    if depth == 1:
                        first = e
            else:
                if depth >= 1:
                    visited &= ~(one << v)
                    cur &= ~(one << path_e[depth])
                depth -= 1
    return count


@njit(cache=True)
def covering_pair(a_masks, na, b_masks, nb, main, cross, need_a, need_b):
    """First ``(i, j)`` with ``a_i | b_j`` covering ``main`` and meeting ``cross``.

    Only ``a_i ⊇ need_a`` and ``b_j ⊇ need_b`` are considered.
    """
    for i in range(na):
        a = a_masks[i]
        if a & need_a != need_a:
            continue
        rest = main & ~a
        for j in range(nb):
            b = b_masks[j]
            if b & need_b != need_b:
                continue
            if b & rest == rest and (a | b) & cross != 0:
                return i, j
    return -1, -1
