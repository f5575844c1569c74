"""Trace recording, comparator networks and 0-1 verification.

For a fixed ``(n, seed, config)`` the sort touches the same index pairs on
every input, so one recorded run *is* a comparator network. This module
captures that network, replays it, and checks it against the 0-1 principle.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, MutableSequence, NamedTuple, Sequence

import numpy as np

from . import _jit
from .core import ContractViolation, RecordingSink, SortConfig, check_length, randomized_shellsort
from .prng import DEFAULT_SEED

#: Largest n verified exhaustively (2**n binary inputs).
EXHAUSTIVE_BOUND = 20

BACKENDS = ("jit", "python")


class Comparator(NamedTuple):
    """Conditional swap that leaves ``min`` at ``lo`` and ``max`` at ``hi``."""

    lo: int
    hi: int


class Network(Sequence[Comparator]):
    """Immutable comparator sequence on ``n`` wires, held as two index arrays."""

    def __init__(self, n: int, lo, hi) -> None:
        lo = np.array(lo, dtype=np.int64).reshape(-1)
        hi = np.array(hi, dtype=np.int64).reshape(-1)
        if lo.shape != hi.shape:
            raise ContractViolation("lo and hi index arrays differ in length")
        if n < 0:
            raise ContractViolation(f"negative wire count {n}")
        bad = np.flatnonzero((lo < 0) | (lo >= hi) | (hi >= n))
        if bad.size:
            k = int(bad[0])
            raise ContractViolation(
                f"comparator {k} = ({lo[k]}, {hi[k]}) violates 0 <= lo < hi < {n}"
            )
        lo.setflags(write=False)
        hi.setflags(write=False)
        self.n = n
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Network:
        pairs = list(pairs)
        if not pairs:
            return cls(n, [], [])
        lo, hi = zip(*pairs)
        return cls(n, lo, hi)

    def __len__(self) -> int:
        return self.lo.shape[0]

    def __getitem__(self, k):
        if isinstance(k, slice):
            return Network(self.n, self.lo[k], self.hi[k])
        return Comparator(int(self.lo[k]), int(self.hi[k]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Network(n={self.n}, comparators={len(self)})"


@dataclass(frozen=True, eq=False)
class Trace:
    """Pairs issued by one run, with the parameters that fully determine them."""

    n: int
    seed: int
    config: SortConfig
    network: Network

    @property
    def pairs(self) -> Network:
        return self.network

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return (self.n, self.seed, self.config) == (other.n, other.seed, other.config) and (
            self.network == other.network
        )

    __hash__ = None


def _check_backend(backend: str) -> None:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; pick one of {BACKENDS}")


def trace_run(keys, cfg: SortConfig, backend: str = "jit") -> tuple[list, Network]:
    """Sort a copy of ``keys`` while recording; return ``(output, network)``.

    The python backend asserts ``lo < hi`` at every issuance; the jit backend
    checks the whole recording afterwards when the network is built.
    """
    _check_backend(backend)
    n = len(keys)
    check_length(n)
    if backend == "python":
        out = list(keys)
        sink = RecordingSink(apply=True, strict=True)
        randomized_shellsort(out, cfg, sink)
        return out, Network.from_pairs(n, sink.pairs)
    arr = np.array(keys, dtype=np.int64)
    lo, hi = _jit.sort_and_trace(arr, cfg)
    return arr.tolist(), Network(n, lo, hi)


def record_trace(
    n: int, cfg: SortConfig | None = None, keys=None, backend: str = "jit"
) -> Trace:
    """Record the pairs a run of length ``n`` issues, over a scratch array.

    ``keys`` sets the scratch contents (zeros by default); it cannot change
    the result.
    """
    cfg = cfg or SortConfig()
    if keys is None:
        keys = [0] * n
    elif len(keys) != n:
        raise ContractViolation(f"scratch array has length {len(keys)}, expected {n}")
    _, net = trace_run(keys, cfg, backend)
    return Trace(n, cfg.seed, cfg, net)


def extract_network(n: int, cfg: SortConfig | None = None, backend: str = "jit") -> Network:
    return record_trace(n, cfg, backend=backend).network


def assert_oblivious(
    n: int,
    cfg: SortConfig | None = None,
    trials: int = 100,
    backend: str = "jit",
    input_seed: int = 0,
) -> bool:
    """True iff ``trials`` distinct random inputs all produce the same trace.

    Inputs mix wide-range keys with heavily duplicated small keys.
    """
    cfg = cfg or SortConfig()
    if trials < 1:
        raise ContractViolation(f"trials must be positive, got {trials}")
    check_length(n)
    rng = np.random.default_rng(input_seed)
    reference = None
    for t in range(trials):
        if t % 2:
            keys = rng.integers(0, 3, n)
        else:
            keys = rng.integers(np.iinfo(np.int64).min, np.iinfo(np.int64).max, n, endpoint=True)
        _, net = trace_run(keys.tolist(), cfg, backend)
        if reference is None:
            reference = net
        elif net != reference:
            return False
    return True


def _as_network(net, n: int | None = None) -> Network:
    if isinstance(net, Network):
        return net
    pairs = [tuple(p) for p in net]
    if n is None:
        n = 1 + max((max(p) for p in pairs), default=-1)
    return Network.from_pairs(n, pairs)


def apply_network(net, a: MutableSequence) -> None:
    """Apply each comparator in order: swap when ``a[lo] > a[hi]``."""
    if isinstance(a, np.ndarray) and a.dtype == np.int64 and isinstance(net, Network):
        if len(net) and int(net.hi.max()) >= a.shape[0]:
            raise ContractViolation(f"network index out of range for length {a.shape[0]}")
        _jit.apply_pairs(net.lo, net.hi, a)
        return
    n = len(a)
    for lo, hi in net:
        if not 0 <= lo < hi < n:
            raise ContractViolation(f"comparator ({lo}, {hi}) out of range for length {n}")
        if a[lo] > a[hi]:
            a[lo], a[hi] = a[hi], a[lo]


@dataclass(frozen=True)
class ZeroOneResult:
    """Outcome of a 0-1 check; truthy iff no failing input was found.

    ``counterexample`` is the lexicographically least failing binary vector
    for an exhaustive check, or the first failing sampled vector otherwise.
    ``upper_bound`` is a one-sided confidence bound on the failure
    probability over uniform binary inputs, only set for sampled checks.
    """

    n: int
    sorts: bool
    counterexample: tuple[int, ...] | None = None
    exhaustive: bool = True
    inputs_checked: int = 0
    failures: int = 0
    upper_bound: float | None = None
    confidence: float | None = None

    def __bool__(self) -> bool:
        return self.sorts


def _binary_planes(n: int, lo_index: int, count: int) -> np.ndarray:
    """Bit-sliced binary inputs ``lo_index .. lo_index+count-1``.

    Input ``k`` has bit ``n-1-p`` of ``k`` at wire ``p``, so numeric order of
    ``k`` is lexicographic order of the vectors. Row ``p`` packs wire ``p``
    over all inputs into uint64 words, input ``k`` at bit ``k % 64``.
    """
    k = np.arange(lo_index, lo_index + count, dtype=np.int64)
    shifts = (n - 1 - np.arange(n, dtype=np.int64))[:, None]
    bits = ((k[None, :] >> shifts) & 1).astype(np.uint8)
    pad = (-count) % 64
    if pad:
        bits = np.pad(bits, ((0, 0), (0, pad)))
    return np.packbits(bits, axis=1, bitorder="little").view("<u8")


def _first_unsorted(net: Network, planes: np.ndarray, count: int) -> int | None:
    planes = planes.copy()
    for lo, hi in zip(net.lo.tolist(), net.hi.tolist()):
        x = planes[lo].copy()
        planes[lo] &= planes[hi]
        planes[hi] |= x
    bad = np.zeros(planes.shape[1], dtype=np.uint64)
    for p in range(net.n - 1):
        bad |= planes[p] & ~planes[p + 1]
    flags = np.unpackbits(bad.view(np.uint8), bitorder="little")[:count]
    hit = np.flatnonzero(flags)
    return int(hit[0]) if hit.size else None


def _vector(k: int, n: int) -> tuple[int, ...]:
    return tuple((k >> (n - 1 - p)) & 1 for p in range(n))


def verify_zero_one(
    net, n: int | None = None, bound: int = EXHAUSTIVE_BOUND, chunk_bits: int = 16
) -> ZeroOneResult:
    """Exhaustively check that ``net`` sorts every binary input of length ``n``.

    Inputs are processed in ascending order in chunks of ``2**chunk_bits``,
    sixty-four per machine word, so the first failing chunk yields the
    lexicographically least counterexample.
    """
    if n is None:
        n = net.n if isinstance(net, Network) else None
    net = _as_network(net, n)
    n = net.n
    if n > bound:
        raise ContractViolation(
            f"n={n} exceeds the exhaustive bound {bound}; use sample_zero_one"
        )
    total = 1 << n
    step = min(total, 1 << chunk_bits)
    for start in range(0, total, step):
        hit = _first_unsorted(net, _binary_planes(n, start, step), step)
        if hit is not None:
            return ZeroOneResult(n, False, _vector(start + hit, n), True, start + hit + 1, 1)
    return ZeroOneResult(n, True, None, True, total, 0)


def sample_zero_one(
    net,
    n: int | None = None,
    samples: int = 100_000,
    seed: int = DEFAULT_SEED,
    confidence: float = 0.95,
) -> ZeroOneResult:
    """Estimate the failure probability of ``net`` on uniform binary inputs.

    Reports the Clopper-Pearson upper bound at ``confidence``.
    """
    from scipy.stats import beta

    if n is None and isinstance(net, Network):
        n = net.n
    net = _as_network(net, n)
    n = net.n
    rng = np.random.default_rng(seed)
    failures = 0
    counterexample = None
    done = 0
    while done < samples:
        m = min(4096, samples - done)
        x0 = rng.integers(0, 2, size=(m, n), dtype=np.int64)
        x = x0.copy()
        for lo, hi in zip(net.lo.tolist(), net.hi.tolist()):
            a = x[:, lo].copy()
            b = x[:, hi]
            x[:, lo] = np.minimum(a, b)
            x[:, hi] = np.maximum(a, b)
        bad = np.flatnonzero(np.any(x[:, :-1] > x[:, 1:], axis=1))
        if bad.size and counterexample is None:
            counterexample = tuple(int(v) for v in x0[bad[0]])
        failures += int(bad.size)
        done += m
    if failures < samples:
        ub = float(beta.ppf(confidence, failures + 1, samples - failures))
    else:
        ub = 1.0
    return ZeroOneResult(
        n, failures == 0, counterexample, False, samples, failures, ub, confidence
    )


def _format_pairs(net: Network) -> str:
    return "".join(f"{lo} {hi}\n" for lo, hi in zip(net.lo.tolist(), net.hi.tolist()))


def write_network(path: str | os.PathLike, net: Network) -> None:
    with open(path, "w") as fh:
        fh.write(f"n {net.n}\n")
        fh.write(_format_pairs(net))


def write_trace(path: str | os.PathLike, trace: Trace) -> None:
    with open(path, "w") as fh:
        fh.write(format_trace(trace))


def format_trace(trace: Trace) -> str:
    cfg = trace.config
    return (
        f"n {trace.n}\n"
        f"seed {trace.seed:#018x} c {cfg.c_repetitions} shuffle {int(cfg.shuffle_enabled)}\n"
        + _format_pairs(trace.network)
    )


class NetworkFormatError(ContractViolation):
    pass


def parse_network(text: str, source: str = "<network>") -> tuple[Network, SortConfig | None]:
    """Parse network or trace text; the config is returned for traces only."""
    lines = text.splitlines()
    if not lines:
        raise NetworkFormatError(f"{source}: empty file, expected 'n <length>' header")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise NetworkFormatError(f"{source}:1: expected 'n <length>', got {lines[0]!r}")
    n = int(head[1])
    cfg = None
    body_start = 1
    if len(lines) > 1 and lines[1].startswith("seed"):
        f = lines[1].split()
        try:
            if len(f) != 6 or f[2] != "c" or f[4] != "shuffle" or f[5] not in ("0", "1"):
                raise ValueError
            cfg = SortConfig(int(f[3]), f[5] == "1", int(f[1], 16))
        except ValueError:
            raise NetworkFormatError(
                f"{source}:2: expected 'seed <hex> c <int> shuffle <0|1>', got {lines[1]!r}"
            ) from None
        body_start = 2
    lo, hi = [], []
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip():
            continue
        f = line.split()
        if len(f) != 2 or not all(x.isdigit() for x in f):
            raise NetworkFormatError(f"{source}:{lineno}: expected 'lo hi', got {line!r}")
        i, j = int(f[0]), int(f[1])
        if not 0 <= i < j < n:
            raise NetworkFormatError(
                f"{source}:{lineno}: comparator ({i}, {j}) violates 0 <= lo < hi < {n}"
            )
        lo.append(i)
        hi.append(j)
    return Network(n, lo, hi), cfg


def read_network(path: str | os.PathLike) -> Network:
    with open(path) as fh:
        return parse_network(fh.read(), str(path))[0]


def read_trace(path: str | os.PathLike) -> Trace:
    with open(path) as fh:
        net, cfg = parse_network(fh.read(), str(path))
    if cfg is None:
        raise NetworkFormatError(f"{path}:2: trace header 'seed <hex> c <int> shuffle <0|1>' missing")
    return Trace(net.n, cfg.seed, cfg, net)
