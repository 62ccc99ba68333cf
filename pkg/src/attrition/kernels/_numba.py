"""numba-compiled twins of the kernels in ``_numpy``."""

import numpy as np
from numba import njit


@njit(cache=True)
def backward_values(flows, tail, beta, dt, tail_factor):
    T, n = flows.shape
    out = np.empty((T + 1, n))
    for j in range(n):
        out[T, j] = tail[j] * tail_factor
    for t in range(T - 1, -1, -1):
        for j in range(n):
            out[t, j] = flows[t, j] * dt + beta * out[t + 1, j]
    return out


@njit(cache=True)
def enumerate_best(flows, transition, terminal, disc, dt, start_state):
    H, S, A = flows.shape
    if H == 0:
        return terminal[start_state]
    n = A ** H
    best = -np.inf
    digits = np.empty(H, dtype=np.int64)
    for code in range(n):
        rest = code
        for h in range(H - 1, -1, -1):
            digits[h] = rest % A
            rest //= A
        state = start_state
        total = 0.0
        for h in range(H):
            a = digits[h]
            total += disc[h] * flows[h, state, a] * dt
            state = transition[h, state, a]
        total += disc[H] * terminal[state]
        if total > best:
            best = total
    return best


@njit(cache=True)
def dominance_matrix(cdfs, tol):
    B, n = cdfs.shape
    out = np.zeros((B, B), dtype=np.bool_)
    for i in range(B):
        for j in range(B):
            above = False
            below = False
            for k in range(n):
                d = cdfs[i, k] - cdfs[j, k]
                if d > tol:
                    above = True
                    break
                if d < -tol:
                    below = True
            out[i, j] = below and not above
    return out


@njit(cache=True)
def mon_violations(table, pairs, slack):
    P = pairs.shape[0]
    A = table.shape[1]
    out = np.zeros((P, A), dtype=np.bool_)
    for k in range(P):
        i = pairs[k, 0]
        j = pairs[k, 1]
        for a in range(A):
            out[k, a] = table[i, a] < table[j, a] - slack
    return out


@njit(cache=True)
def discounted_totals(flows, disc, dt):
    K, L, n = flows.shape
    out = np.zeros((K, n))
    for k in range(K):
        for l in range(L):
            for j in range(n):
                out[k, j] += disc[l] * flows[k, l, j]
    return out * dt


@njit(cache=True)
def sign_changes(values, zero_tol):
    P, n = values.shape
    out = np.zeros(P, dtype=np.int64)
    for k in range(P):
        last = 0.0
        count = 0
        for j in range(n):
            v = values[k, j]
            if abs(v) < zero_tol:
                continue
            s = 1.0 if v > 0 else -1.0
            if last != 0.0 and s != last:
                count += 1
            last = s
        out[k] = count
    return out
