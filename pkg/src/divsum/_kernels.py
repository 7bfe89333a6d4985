"""Hot loops of the ergodic layer, compiled with numba when available.

``DIVSUM_BACKEND=numpy`` forces the vectorized numpy versions; the default
(``numba``) falls back to numpy silently if numba cannot be imported.  Both
paths accumulate in a fixed order, so results do not depend on scheduling.
"""
from __future__ import annotations

import os

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


TWO_PI = 2.0 * np.pi


def backend() -> str:
    name = os.environ.get("DIVSUM_BACKEND", "numba").strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"DIVSUM_BACKEND must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


# orbital partial sums on an integer-phase grid ------------------------------
#
# theta is tabulated at t_j = 2 pi j / N.  Since q^k t_j = 2 pi (q^k j mod N) / N
# modulo 2 pi, theta_n(t_j) is a sum of table entries along j -> q j mod N,
# with no floating point phase error at all.

@njit(cache=True)
def _orbit_stats_jit(table, q, ns, thr):
    N = table.size
    K = ns.size
    counts = np.zeros(K, np.int64)
    sumsq = np.zeros(K, np.float64)
    n_last = ns[K - 1]
    for j in range(N):
        idx = j
        acc = 0.0
        nxt = 0
        while nxt < K and ns[nxt] == 0:
            if thr[nxt] <= 0.0:
                counts[nxt] += 1
            nxt += 1
        for step in range(1, n_last + 1):
            acc += table[idx]
            idx = (idx * q) % N
            while nxt < K and ns[nxt] == step:
                sumsq[nxt] += acc * acc
                if abs(acc) >= thr[nxt]:
                    counts[nxt] += 1
                nxt += 1
    return counts, sumsq


def _orbit_stats_numpy(table, q, ns, thr):
    N = table.size
    K = ns.size
    counts = np.zeros(K, np.int64)
    sumsq = np.zeros(K, np.float64)
    idx = np.arange(N, dtype=np.int64)
    acc = np.zeros(N, dtype=np.float64)
    nxt = 0
    while nxt < K and ns[nxt] == 0:
        counts[nxt] = N if thr[nxt] <= 0.0 else 0
        nxt += 1
    for step in range(1, int(ns[K - 1]) + 1):
        acc += table[idx]
        idx = (idx * q) % N
        while nxt < K and ns[nxt] == step:
            sumsq[nxt] = np.dot(acc, acc)
            counts[nxt] = np.count_nonzero(np.abs(acc) >= thr[nxt])
            nxt += 1
    return counts, sumsq


def orbit_stats(table: np.ndarray, q: int, ns, thresholds):
    """Per n in ``ns`` (ascending): #{j : |theta_n(t_j)| >= thr} and sum_j theta_n(t_j)^2."""
    table = np.ascontiguousarray(table, dtype=np.float64)
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    thr = np.ascontiguousarray(thresholds, dtype=np.float64)
    if ns.size == 0:
        return np.zeros(0, np.int64), np.zeros(0)
    if np.any(np.diff(ns) < 0):
        raise ValueError("ns must be ascending")
    if backend() == "numba":
        return _orbit_stats_jit(table, np.int64(q), ns, thr)
    return _orbit_stats_numpy(table, int(q), ns, thr)


# Birkhoff averages along a base-q digit stream ----------------------------------
#
# The orbit of u0 under u -> q u mod 1 is the left shift of its base-q digits.
# W_n holds D consecutive digits as an integer (q^D <= 2^62), so u_n = W_n / q^D
# is accurate to q^-D at every step instead of degrading like q^n * eps.

@njit(cache=True)
def _birkhoff_jit(digits, q, D, m, freqs, a, b, c0):
    W = np.int64(0)
    for i in range(D):
        W = W * q + digits[i]
    top = np.int64(1)
    for i in range(D - 1):
        top *= q
    scale = 1.0 / (float(top) * q)
    total = 0.0
    for n in range(m):
        t = TWO_PI * (float(W) * scale)
        val = c0
        for k in range(freqs.size):
            val += a[k] * np.cos(freqs[k] * t) + b[k] * np.sin(freqs[k] * t)
        total += val
        W = (W % top) * q + digits[n + D]
    return total / m


def _birkhoff_numpy(digits, q, D, m, freqs, a, b, c0):
    powers = np.array([q ** (D - 1 - i) for i in range(D)], dtype=np.int64)
    win = sliding_window_view(digits, D)[:m]
    W = win @ powers
    t = TWO_PI * (W.astype(np.float64) / float(q**D))
    vals = np.full(m, c0)
    for k in range(freqs.size):
        vals += a[k] * np.cos(freqs[k] * t) + b[k] * np.sin(freqs[k] * t)
    return float(vals.sum() / m)


def birkhoff_digits(digits: np.ndarray, q: int, D: int, m: int, freqs, a, b, c0: float) -> float:
    digits = np.ascontiguousarray(digits, dtype=np.int64)
    if digits.size < m + D:
        raise ValueError("digit stream shorter than m + D")
    freqs = np.ascontiguousarray(freqs, dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if backend() == "numba":
        return float(_birkhoff_jit(digits, np.int64(q), np.int64(D), np.int64(m), freqs, a, b, float(c0)))
    return _birkhoff_numpy(digits, int(q), int(D), int(m), freqs, a, b, float(c0))


# level sets from many digit-stream orbits ------------------------------------

@njit(cache=True)
def _level_counts_jit(W0, tail, q, D, ns, thr, freqs, a, b, c0):
    M = W0.size
    K = ns.size
    counts = np.zeros(K, np.int64)
    top = np.int64(1)
    for i in range(D - 1):
        top *= q
    scale = 1.0 / (float(top) * q)
    n_last = ns[K - 1]
    for j in range(M):
        W = W0[j]
        acc = 0.0
        nxt = 0
        while nxt < K and ns[nxt] == 0:
            if thr[nxt] <= 0.0:
                counts[nxt] += 1
            nxt += 1
        for step in range(1, n_last + 1):
            t = TWO_PI * (float(W) * scale)
            val = c0
            for k in range(freqs.size):
                val += a[k] * np.cos(freqs[k] * t) + b[k] * np.sin(freqs[k] * t)
            acc += val
            W = (W % top) * q + tail[j, step - 1]
            while nxt < K and ns[nxt] == step:
                if abs(acc) >= thr[nxt]:
                    counts[nxt] += 1
                nxt += 1
    return counts


def _level_counts_numpy(W0, tail, q, D, ns, thr, freqs, a, b, c0):
    M = W0.size
    K = ns.size
    counts = np.zeros(K, np.int64)
    top = q ** (D - 1)
    scale = 1.0 / float(q**D)
    W = W0.copy()
    acc = np.zeros(M)
    nxt = 0
    while nxt < K and ns[nxt] == 0:
        counts[nxt] = M if thr[nxt] <= 0.0 else 0
        nxt += 1
    for step in range(1, int(ns[K - 1]) + 1):
        t = TWO_PI * (W.astype(np.float64) * scale)
        val = np.full(M, c0)
        for k in range(freqs.size):
            val += a[k] * np.cos(freqs[k] * t) + b[k] * np.sin(freqs[k] * t)
        acc += val
        W = (W % top) * q + tail[:, step - 1]
        while nxt < K and ns[nxt] == step:
            counts[nxt] = np.count_nonzero(np.abs(acc) >= thr[nxt])
            nxt += 1
    return counts


def level_counts(W0, tail, q: int, D: int, ns, thresholds, freqs, a, b, c0: float):
    """#{j : |theta_n(u_j)| >= thr_n} for orbits given by start windows and digit tails."""
    W0 = np.ascontiguousarray(W0, dtype=np.int64)
    tail = np.ascontiguousarray(tail, dtype=np.int64)
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    thr = np.ascontiguousarray(thresholds, dtype=np.float64)
    freqs = np.ascontiguousarray(freqs, dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if ns.size == 0:
        return np.zeros(0, np.int64)
    if tail.shape[0] != W0.size or tail.shape[1] < ns[-1]:
        raise ValueError("digit tails too short")
    if backend() == "numba":
        return _level_counts_jit(W0, tail, np.int64(q), np.int64(D), ns, thr, freqs, a, b, float(c0))
    return _level_counts_numpy(W0, tail, int(q), int(D), ns, thr, freqs, a, b, float(c0))
