"""Compiled inner loop of the (1+1) EA.

Mirrors ``ea._run_python`` draw for draw: same generator calls in the same
order, same float summation order, so both backends return identical
archives. The archive is stored as giant tours, which decode to solutions
deterministically.
"""

import numpy as np
from numba import njit

SWAP = 0
REVERSE = 1


@njit(cache=True)
def _shuffle(values, rng):
    for k in range(values.shape[0] - 1, 0, -1):
        r = rng.integers(0, k + 1)
        tmp = values[k]
        values[k] = values[r]
        values[r] = tmp


@njit(cache=True)
def swap_mutation(tour, rng):
    n = tour.shape[0]
    k = rng.integers(2, 5)
    if k > n:
        k = n
    idx = np.arange(n)
    for a in range(k):
        r = rng.integers(a, n)
        tmp = idx[a]
        idx[a] = idx[r]
        idx[r] = tmp
    perm = np.arange(k)
    while True:
        for a in range(k):
            perm[a] = a
        _shuffle(perm, rng)
        moved = False
        for a in range(k):
            if perm[a] != a:
                moved = True
                break
        if moved:
            break
    out = tour.copy()
    for a in range(k):
        out[idx[a]] = tour[idx[perm[a]]]
    return out


@njit(cache=True)
def reverse_mutation(tour, rng):
    n = tour.shape[0]
    i = rng.integers(0, n)
    j = rng.integers(0, n - 1)
    if j >= i:
        j += 1
    if i > j:
        i, j = j, i
    out = tour.copy()
    while i < j:
        out[i] = tour[j]
        out[j] = tour[i]
        i += 1
        j -= 1
    return out


@njit(cache=True)
def split_lengths(tour, dist, demands, capacity, lengths):
    """Greedy split of ``tour``; writes route lengths, returns the route count."""
    m = 0
    load = 0.0
    prev = 0
    cur = 0.0
    for p in range(tour.shape[0]):
        c = tour[p]
        d = demands[c]
        if p > 0 and load + d > capacity:
            cur += dist[prev, 0]
            lengths[m] = cur
            m += 1
            load = 0.0
            prev = 0
            cur = 0.0
        cur += dist[prev, c]
        prev = c
        load += d
    cur += dist[prev, 0]
    lengths[m] = cur
    return m + 1


@njit(cache=True)
def balance(code, lengths, m):
    lo = lengths[0]
    hi = lengths[0]
    total = 0.0
    for k in range(m):
        v = lengths[k]
        if v < lo:
            lo = v
        if v > hi:
            hi = v
        total += v
    if code == 0:  # all-min
        acc = 0.0
        for k in range(m):
            acc += lengths[k] - lo
        return acc
    if code == 1:  # max-min
        return hi - lo
    if code == 2:  # min-max
        return hi
    if code == 3:  # rel
        acc = 0.0
        for k in range(m):
            acc += (hi - lengths[k]) / hi
        return acc / m
    mean = total / m
    if code == 4:  # var
        acc = 0.0
        for k in range(m):
            acc += lengths[k] * lengths[k]
        return max(0.0, acc / m - mean * mean)
    if code == 5:  # mad
        acc = 0.0
        for k in range(m):
            acc += abs(lengths[k] - mean)
        return acc / m
    acc = 0.0  # gini
    for a in range(m):
        for b in range(m):
            acc += abs(lengths[a] - lengths[b])
    return acc / (2.0 * m * m * mean)


@njit(cache=True)
def _evaluate(tour, dist, demands, capacity, code, lengths):
    m = split_lengths(tour, dist, demands, capacity, lengths)
    total = 0.0
    for k in range(m):
        total += lengths[k]
    return total, balance(code, lengths, m)


@njit(cache=True)
def run(dist, demands, capacity, code, mutation, max_iter, rng, record):
    n = dist.shape[0] - 1
    lengths = np.empty(n)

    tour = np.arange(1, n + 1)
    _shuffle(tour, rng)

    cap = 64
    tours = np.empty((cap, n), dtype=np.int64)
    arc_d = np.empty(cap)
    arc_b = np.empty(cap)
    d0, b0 = _evaluate(tour, dist, demands, capacity, code, lengths)
    tours[0] = tour
    arc_d[0] = d0
    arc_b[0] = b0
    size = 1

    n_trace = max_iter if record else 0
    trace_d = np.empty(n_trace)
    trace_b = np.empty(n_trace)

    for it in range(max_iter):
        if mutation == SWAP:
            cand = swap_mutation(tour, rng)
        else:
            cand = reverse_mutation(tour, rng)
        cd, cb = _evaluate(cand, dist, demands, capacity, code, lengths)

        rejected = False
        for k in range(size):
            if arc_d[k] <= cd and arc_b[k] <= cb and (arc_d[k] < cd or arc_b[k] < cb):
                rejected = True
                break

        if not rejected:
            w = 0
            for k in range(size):
                beaten = cd <= arc_d[k] and cb <= arc_b[k] and (cd < arc_d[k] or cb < arc_b[k])
                same = cd == arc_d[k] and cb == arc_b[k]
                if not (beaten or same):
                    if w != k:
                        tours[w] = tours[k]
                        arc_d[w] = arc_d[k]
                        arc_b[w] = arc_b[k]
                    w += 1
            if w == cap:
                cap *= 2
                grown = np.empty((cap, n), dtype=np.int64)
                grown[:w] = tours[:w]
                tours = grown
                gd = np.empty(cap)
                gd[:w] = arc_d[:w]
                arc_d = gd
                gb = np.empty(cap)
                gb[:w] = arc_b[:w]
                arc_b = gb
            tours[w] = cand
            arc_d[w] = cd
            arc_b[w] = cb
            size = w + 1
            tour = cand

        if record:
            md = arc_d[0]
            mb = arc_b[0]
            for k in range(1, size):
                if arc_d[k] < md:
                    md = arc_d[k]
                if arc_b[k] < mb:
                    mb = arc_b[k]
            trace_d[it] = md
            trace_b[it] = mb

    return tours[:size].copy(), arc_d[:size].copy(), arc_b[:size].copy(), trace_d, trace_b
