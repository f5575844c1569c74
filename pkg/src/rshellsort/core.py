"""Randomized Shellsort built from region compare-exchanges.

This is the reference path: plain Python over any mutable sequence of totally
ordered keys, with every issued compare-exchange routed through a *sink*.
A sink is any callable ``sink(a, i, j)``; the default,
:func:`compare_exchange`, applies the pair to the array. Other sinks record or
count the pairs without changing the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, MutableSequence

from .prng import DEFAULT_SEED, RandomSource, check_seed

#: Default number of region compare-exchange repetitions.
DEFAULT_C = 4

Sink = Callable[[MutableSequence, int, int], None]


class ContractViolation(ValueError):
    """A caller broke an operation's precondition."""


class UnsupportedLengthError(ContractViolation):
    """Array length is not a power of two."""


@dataclass(frozen=True)
class SortConfig:
    """Tunable parameters of one sort run.

    ``shuffle_enabled=False`` gives the deterministic variant: every region
    match is the identity and no randomness is consumed.
    """

    c_repetitions: int = DEFAULT_C
    shuffle_enabled: bool = True
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        c = self.c_repetitions
        if isinstance(c, bool) or not isinstance(c, int) or c < 1:
            raise ContractViolation(f"c_repetitions must be an int >= 1, got {c!r}")
        check_seed(self.seed)

    def with_seed(self, seed: int) -> SortConfig:
        return SortConfig(self.c_repetitions, self.shuffle_enabled, seed)


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def check_length(n: int) -> None:
    """Accept 0, 1 and powers of two; reject everything else."""
    if n > 1 and not is_power_of_two(n):
        raise UnsupportedLengthError(f"length {n} is not a power of 2")


def _check_index(a: MutableSequence, i: int) -> None:
    if not 0 <= i < len(a):
        raise ContractViolation(f"index {i} out of range for length {len(a)}")


def exchange(a: MutableSequence, i: int, j: int) -> None:
    _check_index(a, i)
    _check_index(a, j)
    a[i], a[j] = a[j], a[i]


def compare_exchange(a: MutableSequence, i: int, j: int) -> None:
    """Leave the smaller key at ``min(i, j)`` and the larger at ``max(i, j)``."""
    _check_index(a, i)
    _check_index(a, j)
    if (i < j and a[i] > a[j]) or (i > j and a[i] < a[j]):
        a[i], a[j] = a[j], a[i]


def permute_random(a: MutableSequence, src: RandomSource) -> None:
    """In-place Knuth shuffle: swap position i with a uniform pick from [i, n)."""
    n = len(a)
    for i in range(n):
        j = src.next_int(n - i) + i
        a[i], a[j] = a[j], a[i]


def compare_regions(
    a: MutableSequence,
    s: int,
    t: int,
    offset: int,
    src: RandomSource,
    cfg: SortConfig,
    sink: Sink = compare_exchange,
) -> None:
    """Compare-exchange ``a[s:s+offset]`` against ``a[t:t+offset]``.

    Each of the ``cfg.c_repetitions`` rounds matches the two regions through a
    fresh mate permutation (identity when shuffling is off) and issues
    ``offset`` compare-exchanges ``(s + i, t + mate[i])``.
    """
    n = len(a)
    if offset < 1:
        raise ContractViolation(f"offset must be positive, got {offset}")
    if s < 0 or t < 0 or s + offset > n or t + offset > n:
        raise ContractViolation(
            f"regions [{s}, {s + offset}) and [{t}, {t + offset}) exceed length {n}"
        )
    if s < t + offset and t < s + offset:
        raise ContractViolation(
            f"regions [{s}, {s + offset}) and [{t}, {t + offset}) overlap"
        )
    for _ in range(cfg.c_repetitions):
        mate = list(range(offset))
        if cfg.shuffle_enabled:
            permute_random(mate, src)
        for i in range(offset):
            sink(a, s + i, t + mate[i])


def region_pairs(n: int, offset: int):
    """Yield the ``(s, t)`` region starts of the six passes at ``offset``.

    Loop bounds are transcribed exactly, including the passes that are empty
    when ``n // offset`` is small.
    """
    o = offset
    for i in range(0, n - o, o):  # up
        yield i, i + o
    for i in range(n - o, o - 1, -o):  # down
        yield i - o, i
    for i in range(0, n - 3 * o, o):  # 3 hops up
        yield i, i + 3 * o
    for i in range(0, n - 2 * o, o):  # 2 hops up
        yield i, i + 2 * o
    for i in range(0, n, 2 * o):  # odd-even
        yield i, i + o
    for i in range(o, n - o, 2 * o):  # even-odd
        yield i, i + o


def offsets(n: int):
    o = n // 2
    while o > 0:
        yield o
        o //= 2


def randomized_shellsort(
    a: MutableSequence, cfg: SortConfig | None = None, sink: Sink = compare_exchange
) -> None:
    """Sort ``a`` in place with high probability.

    The result is a permutation of the input but is not guaranteed sorted;
    check sortedness where certainty matters. ``len(a)`` must be 0, 1 or a
    power of two.
    """
    cfg = cfg or SortConfig()
    n = len(a)
    check_length(n)
    src = RandomSource(cfg.seed)
    for o in offsets(n):
        for s, t in region_pairs(n, o):
            compare_regions(a, s, t, o, src, cfg, sink)


def shellsorted(keys, cfg: SortConfig | None = None) -> list:
    """Return a new list holding ``keys`` after a randomized Shellsort run."""
    out = list(keys)
    randomized_shellsort(out, cfg)
    return out


def is_sorted(a) -> bool:
    return all(a[k] <= a[k + 1] for k in range(len(a) - 1))


class RecordingSink:
    """Record every issued pair, optionally applying it too.

    With ``strict=True`` a pair with ``i >= j`` raises instead of being
    recorded, since the algorithm's call sites always present the lower
    region first.
    """

    def __init__(self, apply: bool = True, strict: bool = True) -> None:
        self.apply = apply
        self.strict = strict
        self.pairs: list[tuple[int, int]] = []

    def __call__(self, a: MutableSequence, i: int, j: int) -> None:
        if self.strict and not i < j:
            raise AssertionError(f"compare-exchange issued with i >= j: ({i}, {j})")
        self.pairs.append((i, j))
        if self.apply:
            compare_exchange(a, i, j)


class CountingSink:
    def __init__(self) -> None:
        self.count = 0

    def __call__(self, a: MutableSequence, i: int, j: int) -> None:
        self.count += 1


class AssertingSink:
    """Apply each pair, then check its postcondition at the issued indices.

    ``reversed_pairs`` counts issuances with ``i > j``.
    """

    def __init__(self) -> None:
        self.issued = 0
        self.reversed_pairs = 0

    def __call__(self, a: MutableSequence, i: int, j: int) -> None:
        before = sorted((a[i], a[j]))
        compare_exchange(a, i, j)
        lo, hi = min(i, j), max(i, j)
        if a[lo] > a[hi] or sorted((a[i], a[j])) != before:
            raise AssertionError(f"compare-exchange postcondition failed at ({i}, {j})")
        self.issued += 1
        if i > j:
            self.reversed_pairs += 1


def region_calls(n: int, offset: int) -> int:
    """Number of region compare-exchanges the six passes make at ``offset``."""
    o = offset
    return (
        len(range(0, n - o, o))
        + len(range(n - o, o - 1, -o))
        + len(range(0, n - 3 * o, o))
        + len(range(0, n - 2 * o, o))
        + len(range(0, n, 2 * o))
        + len(range(o, n - o, 2 * o))
    )


def comparator_budget(n: int, c_repetitions: int = DEFAULT_C) -> int:
    """Exact number of compare-exchanges one sort of length ``n`` issues.

    Derived from the loop bounds alone, so it holds for every seed and for
    both shuffle settings.
    """
    check_length(n)
    return sum(region_calls(n, o) * c_repetitions * o for o in offsets(n))
