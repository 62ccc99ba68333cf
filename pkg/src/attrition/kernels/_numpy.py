"""Pure-numpy reference implementations of the hot loops."""

import numpy as np


def backward_values(flows, tail, beta, dt, tail_factor):
    """Discounted values by backward recursion with a geometric tail.

    flows: (T, n) flow payoffs for periods before the tail.
    tail: (n,) stationary flow from period T on.
    Returns (T + 1, n): row t is the value at period t.
    """
    T, n = flows.shape
    out = np.empty((T + 1, n))
    out[T] = tail * tail_factor
    for t in range(T - 1, -1, -1):
        out[t] = flows[t] * dt + beta * out[t + 1]
    return out


def enumerate_best(flows, transition, terminal, disc, dt, start_state):
    """Best discounted payoff over every action sequence, by enumeration.

    flows: (H, S, A) flow of taking action a in state s at step h.
    transition: (H, S, A) next state index.
    terminal: (S,) continuation value after step H - 1.
    disc: (H + 1,) discount factor applied at step h.
    """
    H, S, A = flows.shape
    if H == 0:
        return float(terminal[start_state])
    seqs = np.indices((A,) * H).reshape(H, -1).T
    n = seqs.shape[0]
    state = np.full(n, start_state)
    total = np.zeros(n)
    for h in range(H):
        a = seqs[:, h]
        total += disc[h] * flows[h, state, a] * dt
        state = transition[h, state, a]
    total += disc[H] * terminal[state]
    return float(total.max())


def dominance_matrix(cdfs, tol):
    """D[i, j] is True iff belief i strictly FOSD-dominates belief j."""
    diff = cdfs[:, None, :] - cdfs[None, :, :]
    no_above = np.all(diff <= tol, axis=2)
    some_below = np.any(diff < -tol, axis=2)
    return no_above & some_below


def mon_violations(table, pairs, slack):
    """table: (B, A); pairs: (P, 2) with row i dominating row j.

    Returns (P, A) mask where table[i] < table[j] - slack.
    """
    if len(pairs) == 0:
        return np.zeros((0, table.shape[1]), dtype=bool)
    return table[pairs[:, 0]] < table[pairs[:, 1]] - slack


def discounted_totals(flows, disc, dt):
    """flows: (K, L, n) -> (K, n) discounted sums over the L periods."""
    return np.einsum("kln,l->kn", flows, disc) * dt


def sign_changes(values, zero_tol):
    """Number of sign flips along each row, ignoring near-zero entries."""
    out = np.zeros(values.shape[0], dtype=np.int64)
    for k, row in enumerate(values):
        signs = np.sign(row[np.abs(row) >= zero_tol])
        out[k] = int(np.count_nonzero(signs[1:] != signs[:-1])) if signs.size else 0
    return out
