"""Numba kernels that reproduce the reference sort bit for bit.

The stream, loop bounds and issue order are identical to :mod:`.core`; the
test suite pins that equivalence. These kernels only accept int64 keys.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .core import SortConfig, check_length, comparator_budget
from .prng import MASK64

_ZERO = np.uint64(0)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)

#: XORed into a trial seed to derive the seed of that trial's input shuffle.
INPUT_SALT = 0xD1B54A32D192ED03


@njit(cache=True)
def _next_u64(state):
    s = state + _GAMMA
    z = (s ^ (s >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return s, z ^ (z >> _S31)


@njit(cache=True)
def _next_int(state, bound):
    b = np.uint64(bound)
    while True:
        state, d = _next_u64(state)
        # 2**64 % b < b, so anything below 2**64 - b is always accepted.
        if d < _ZERO - b:
            return state, np.int64(d % b)
        rem = (_ZERO - b) % b
        if rem == _ZERO or d < _ZERO - rem:
            return state, np.int64(d % b)


@njit(cache=True)
def _shuffle(a, m, state):
    for i in range(m):
        state, r = _next_int(state, m - i)
        j = r + i
        tmp = a[i]
        a[i] = a[j]
        a[j] = tmp
    return state


@njit(cache=True)
def _region_starts(n, o, starts):
    """Fill ``starts`` with the six passes' ``(s, t)`` pairs; return the count."""
    m = 0
    i = 0
    while i < n - o:  # up
        starts[m, 0] = i
        starts[m, 1] = i + o
        m += 1
        i += o
    i = n - o
    while i >= o:  # down
        starts[m, 0] = i - o
        starts[m, 1] = i
        m += 1
        i -= o
    i = 0
    while i < n - 3 * o:  # 3 hops up
        starts[m, 0] = i
        starts[m, 1] = i + 3 * o
        m += 1
        i += o
    i = 0
    while i < n - 2 * o:  # 2 hops up
        starts[m, 0] = i
        starts[m, 1] = i + 2 * o
        m += 1
        i += o
    i = 0
    while i < n:  # odd-even
        starts[m, 0] = i
        starts[m, 1] = i + o
        m += 1
        i += 2 * o
    i = o
    while i < n - o:  # even-odd
        starts[m, 0] = i
        starts[m, 1] = i + o
        m += 1
        i += 2 * o
    return m


@njit(cache=True)
def _sort(a, c, shuffle, seed, lo_out, hi_out, record):
    n = a.shape[0]
    state = np.uint64(seed)
    mate = np.empty(max(n // 2, 1), np.int64)
    # at most 5n region calls per offset (reached at offset 1)
    starts = np.empty((5 * n + 6, 2), np.int64)
    k = 0
    o = n // 2
    while o > 0:
        calls = _region_starts(n, o, starts)
        for r in range(calls):
            s = starts[r, 0]
            t = starts[r, 1]
            for _ in range(c):
                for i in range(o):
                    mate[i] = i
                if shuffle:
                    state = _shuffle(mate, o, state)
                for i in range(o):
                    x = s + i
                    y = t + mate[i]
                    if a[x] > a[y]:
                        tmp = a[x]
                        a[x] = a[y]
                        a[y] = tmp
                    if record:
                        lo_out[k] = x
                        hi_out[k] = y
                    k += 1
        o //= 2
    return k


@njit(cache=True)
def _apply(lo, hi, a):
    for k in range(lo.shape[0]):
        x = lo[k]
        y = hi[k]
        if a[x] > a[y]:
            tmp = a[x]
            a[x] = a[y]
            a[y] = tmp


@njit(cache=True)
def _trial_input(n, seed):
    a = np.arange(n).astype(np.int64)
    _shuffle(a, n, seed ^ np.uint64(INPUT_SALT))
    return a


@njit(cache=True)
def _monte_carlo(n, trials, c, shuffle, base_seed, failed):
    empty = np.empty(0, np.int64)
    failures = 0
    for t in range(trials):
        seed = base_seed + np.uint64(t)
        a = _trial_input(n, seed)
        _sort(a, c, shuffle, seed, empty, empty, False)
        for k in range(n - 1):
            if a[k] > a[k + 1]:
                failures += 1
                failed[t] = True
                break
    return failures


def as_keys(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 1 or arr.dtype != np.int64:
        raise TypeError("JIT backend needs a 1-D int64 array")
    return arr


def sort_array(a: np.ndarray, cfg: SortConfig) -> None:
    """Sort an int64 array in place; same result as the reference path."""
    a = as_keys(a)
    check_length(a.shape[0])
    empty = np.empty(0, np.int64)
    _sort(a, cfg.c_repetitions, cfg.shuffle_enabled, np.uint64(cfg.seed), empty, empty, False)


def sort_and_trace(a: np.ndarray, cfg: SortConfig) -> tuple[np.ndarray, np.ndarray]:
    """Sort ``a`` in place and return the issued pairs as ``(lo, hi)`` arrays."""
    a = as_keys(a)
    n = a.shape[0]
    total = comparator_budget(n, cfg.c_repetitions)
    lo = np.empty(total, np.int64)
    hi = np.empty(total, np.int64)
    k = _sort(a, cfg.c_repetitions, cfg.shuffle_enabled, np.uint64(cfg.seed), lo, hi, True)
    assert k == total, (k, total)
    return lo, hi


def apply_pairs(lo: np.ndarray, hi: np.ndarray, a: np.ndarray) -> None:
    _apply(lo, hi, as_keys(a))


def trial_input(n: int, seed: int) -> np.ndarray:
    return _trial_input(n, np.uint64(seed))


def failed_trials(n: int, trials: int, cfg: SortConfig, base_seed: int) -> np.ndarray:
    """Indices ``t`` whose trial (seed ``base_seed + t``) came out unsorted."""
    check_length(n)
    failed = np.zeros(trials, np.bool_)
    _monte_carlo(
        n, trials, cfg.c_repetitions, cfg.shuffle_enabled, np.uint64(base_seed & MASK64), failed
    )
    return np.flatnonzero(failed)
