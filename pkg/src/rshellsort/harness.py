"""Experiment surface: Monte-Carlo failure rates, comparator counts, file sorting."""

from __future__ import annotations

import csv
import io
import logging
import os
import re
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _jit
from .core import (
    ContractViolation,
    SortConfig,
    check_length,
    comparator_budget,
    is_power_of_two,
    is_sorted,
    permute_random,
    randomized_shellsort,
)
from .prng import MASK64, RandomSource

log = logging.getLogger(__name__)

CSV_FIELDS = (
    "n",
    "trials",
    "c",
    "shuffle",
    "failures",
    "comparisons_per_trial",
    "wall_time_s",
    "base_seed",
)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1
#: Padding key; it sorts after every real key (ties with INT64_MAX are harmless).
SENTINEL = INT64_MAX

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_UNSORTED = 2
EXIT_COUNTEREXAMPLE = 3


class ParseError(ContractViolation):
    def __init__(self, path: str, lineno: int, message: str) -> None:
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


@dataclass
class TrialReport:
    n: int
    trials: int
    failures: int
    c_repetitions: int
    shuffle_enabled: bool
    total_comparisons: int
    wall_time: float
    base_seed: int = 0
    failed_seeds: tuple[int, ...] = field(default=(), repr=False)

    @property
    def comparisons_per_trial(self) -> int:
        return self.total_comparisons // self.trials

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    def csv_row(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "c": self.c_repetitions,
            "shuffle": int(self.shuffle_enabled),
            "failures": self.failures,
            "comparisons_per_trial": self.comparisons_per_trial,
            "wall_time_s": f"{self.wall_time:.6f}",
            "base_seed": f"{self.base_seed:#018x}",
        }


def write_csv(reports: Iterable[TrialReport], fh=None, header: bool = True) -> str | None:
    """Write report rows as CSV to ``fh``, or return the text when ``fh`` is None."""
    out = io.StringIO() if fh is None else fh
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    if header:
        writer.writeheader()
    for r in reports:
        writer.writerow(r.csv_row())
    return out.getvalue() if fh is None else None


def trial_seed(base_seed: int, t: int) -> int:
    return (base_seed + t) & MASK64


def trial_input(n: int, seed: int) -> list[int]:
    """The random permutation of ``0..n-1`` a Monte-Carlo trial sorts.

    Drawn from its own stream (``seed ^ INPUT_SALT``) so it is independent
    of the mate permutations the sort draws from ``seed``.
    """
    a = list(range(n))
    permute_random(a, RandomSource(seed ^ _jit.INPUT_SALT))
    return a


def count_comparisons(n: int, cfg: SortConfig | None = None) -> int:
    cfg = cfg or SortConfig()
    return comparator_budget(n, cfg.c_repetitions)


def monte_carlo(
    n: int,
    trials: int,
    cfg: SortConfig | None = None,
    base_seed: int | None = None,
    backend: str = "jit",
) -> TrialReport:
    """Sort ``trials`` fresh random permutations and count unsorted outputs.

    Trial ``t`` uses seed ``base_seed + t`` (mod 2**64) for both its input and
    its sort, so a failing trial replays in isolation. ``base_seed`` defaults
    to ``cfg.seed``.
    """
    cfg = cfg or SortConfig()
    if trials < 1:
        raise ContractViolation(f"trials must be >= 1, got {trials}")
    check_length(n)
    base = cfg.seed if base_seed is None else base_seed
    start = time.perf_counter()
    if backend == "jit":
        failed = [trial_seed(base, int(t)) for t in _jit.failed_trials(n, trials, cfg, base)]
    elif backend == "python":
        failed = []
        for t in range(trials):
            seed = trial_seed(base, t)
            a = trial_input(n, seed)
            randomized_shellsort(a, cfg.with_seed(seed))
            if not is_sorted(a):
                failed.append(seed)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    wall = time.perf_counter() - start
    return TrialReport(
        n=n,
        trials=trials,
        failures=len(failed),
        c_repetitions=cfg.c_repetitions,
        shuffle_enabled=cfg.shuffle_enabled,
        total_comparisons=trials * comparator_budget(n, cfg.c_repetitions),
        wall_time=wall,
        base_seed=base,
        failed_seeds=tuple(failed),
    )


def bench(
    ns: Sequence[int],
    cs: Sequence[int],
    trials: int,
    base_seed: int,
    shuffle: bool = True,
) -> list[TrialReport]:
    return [
        monte_carlo(n, trials, SortConfig(c, shuffle, base_seed), base_seed)
        for n in ns
        for c in cs
    ]


def next_power_of_two(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def sort_keys(keys: Sequence[int], cfg: SortConfig, pad: bool = False) -> np.ndarray:
    """Run one sort over int64 keys, padding with sentinels when ``pad`` is set.

    Returns the (possibly unsorted) output of the run, sentinels removed.
    """
    n = len(keys)
    size = next_power_of_two(n) if pad else n
    if not pad:
        check_length(n)
    arr = np.full(size, SENTINEL, dtype=np.int64)
    arr[:n] = keys
    _jit.sort_array(arr, cfg)
    return arr[:n]


_INT_RE = re.compile(r"[+-]?[0-9]+")


def parse_keys(text: str, path: str = "<input>") -> list[int]:
    """Parse newline-delimited decimal int64 keys; errors name the line."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    keys = []
    for lineno, line in enumerate(lines, start=1):
        token = line.strip()
        if not _INT_RE.fullmatch(token):
            raise ParseError(path, lineno, f"not a decimal integer: {line!r}")
        value = int(token)
        if not INT64_MIN <= value <= INT64_MAX:
            raise ParseError(path, lineno, f"{token} does not fit in a signed 64-bit integer")
        keys.append(value)
    return keys


def sort_file(
    in_path: str | os.PathLike,
    out_path: str | os.PathLike,
    cfg: SortConfig | None = None,
    pad: bool = False,
    retries: int = 0,
) -> int:
    """Sort a key file and return an exit status.

    Output is written only when verified sorted (status 0). If every attempt
    leaves the data unsorted the output file is not touched and the status is
    2. Attempt ``k`` reseeds with ``cfg.seed + k``. Parse, length and I/O
    problems raise.
    """
    cfg = cfg or SortConfig()
    if retries < 0:
        raise ContractViolation(f"retries must be >= 0, got {retries}")
    with open(in_path) as fh:
        keys = parse_keys(fh.read(), str(in_path))
    if not pad and len(keys) > 1 and not is_power_of_two(len(keys)):
        raise ContractViolation(
            f"{in_path}: {len(keys)} keys is not a power of 2 (pass pad=True / --pad)"
        )
    for attempt in range(retries + 1):
        seed = (cfg.seed + attempt) & MASK64
        out = sort_keys(keys, cfg.with_seed(seed), pad)
        if bool(np.all(out[:-1] <= out[1:])):
            with open(out_path, "w") as fh:
                fh.write("".join(f"{v}\n" for v in out.tolist()))
            return EXIT_OK
        log.warning("attempt %d with seed %#018x left the output unsorted", attempt, seed)
    return EXIT_UNSORTED
