import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rshellsort.core import ContractViolation, SortConfig, UnsupportedLengthError, randomized_shellsort
from rshellsort.oblivious import (
    Comparator,
    Network,
    NetworkFormatError,
    apply_network,
    assert_oblivious,
    extract_network,
    format_trace,
    parse_network,
    read_network,
    read_trace,
    record_trace,
    sample_zero_one,
    trace_run,
    verify_zero_one,
    write_network,
    write_trace,
)


def brute_force_zero_one(pairs, n):
    """Lexicographically least failing binary vector, or None."""
    for bits in itertools.product((0, 1), repeat=n):
        a = list(bits)
        for lo, hi in pairs:
            if a[lo] > a[hi]:
                a[lo], a[hi] = a[hi], a[lo]
        if any(a[k] > a[k + 1] for k in range(n - 1)):
            return bits
    return None


@pytest.mark.parametrize("backend", ["jit", "python"])
def test_trace_n2(backend):
    tr = record_trace(2, SortConfig(1, True, 11), backend=backend)
    assert list(tr.pairs) == [(0, 1), (0, 1), (0, 1)]
    assert tr.n == 2 and tr.seed == 11


def test_trace_n1_empty():
    assert len(record_trace(1).pairs) == 0
    assert len(extract_network(1)) == 0


def test_trace_n8_length():
    assert len(record_trace(8, SortConfig(seed=3)).pairs) == 272


def test_trace_backends_agree():
    cfg = SortConfig(seed=21)
    assert record_trace(64, cfg, backend="jit") == record_trace(64, cfg, backend="python")


def test_trace_rejects_bad_length():
    with pytest.raises(UnsupportedLengthError):
        record_trace(12)


def test_trace_independent_of_scratch_contents():
    cfg = SortConfig(seed=4)
    a = record_trace(32, cfg, keys=list(range(32)))
    b = record_trace(32, cfg, keys=list(range(32))[::-1])
    assert a == b
    with pytest.raises(ContractViolation):
        record_trace(32, cfg, keys=[0] * 8)


@pytest.mark.parametrize("backend", ["jit", "python"])
def test_assert_oblivious(backend):
    assert assert_oblivious(16, SortConfig(seed=1), trials=100, backend=backend)


def test_seeds_change_trace_when_shuffling():
    a = record_trace(16, SortConfig(seed=1))
    b = record_trace(16, SortConfig(seed=2))
    assert a.network != b.network


def test_seeds_irrelevant_when_deterministic():
    a = record_trace(16, SortConfig(4, False, 1))
    b = record_trace(16, SortConfig(4, False, 2))
    assert a.network == b.network


def test_network_validation():
    with pytest.raises(ContractViolation):
        Network(4, [1], [1])
    with pytest.raises(ContractViolation):
        Network(4, [2], [1])
    with pytest.raises(ContractViolation):
        Network(4, [0], [4])
    net = Network.from_pairs(3, [(0, 1), (1, 2)])
    assert net[1] == Comparator(1, 2) and len(net[:1]) == 1


@pytest.mark.parametrize(
    "net, a, want", [([(0, 1)], [1, 0], [0, 1]), ([], [3, 1, 2], [3, 1, 2])]
)
def test_apply_network_examples(net, a, want):
    apply_network(net, a)
    assert a == want


def test_apply_network_out_of_range():
    with pytest.raises(ContractViolation):
        apply_network([(0, 3)], [1, 2])
    with pytest.raises(ContractViolation):
        apply_network(Network(8, [0], [7]), np.zeros(4, dtype=np.int64))


@pytest.mark.parametrize("n", [8, 32])
def test_replay_equivalence(n):
    cfg = SortConfig(seed=n + 1)
    net = extract_network(n, cfg)
    rng = np.random.default_rng(n)
    for _ in range(10):
        keys = rng.integers(-9, 9, n).tolist()
        direct = list(keys)
        randomized_shellsort(direct, cfg)
        replay = list(keys)
        apply_network(net, replay)
        fast = np.array(keys, dtype=np.int64)
        apply_network(net, fast)
        assert replay == direct == fast.tolist()


def test_reverse_eight_replay():
    cfg = SortConfig(seed=8)
    a = list(range(8))[::-1]
    apply_network(extract_network(8, cfg), a)
    b = list(range(8))[::-1]
    randomized_shellsort(b, cfg)
    assert a == b


def test_zero_one_examples():
    assert verify_zero_one([(0, 1)], 2)
    res = verify_zero_one([], 2)
    assert not res and res.counterexample == (1, 0)


def test_zero_one_rejects_large_n():
    with pytest.raises(ContractViolation):
        verify_zero_one(Network(21, [], []))
    with pytest.raises(ContractViolation):
        verify_zero_one(Network(10, [], []), bound=8)


# Broken networks: prefixes of a real one, and random comparator lists.
def _broken_networks():
    full = extract_network(8, SortConfig(seed=5))
    cases = [(full[:k], 8) for k in (0, 5, 40, 120, 200)]
    rng = np.random.default_rng(0)
    for n in (3, 5, 7, 9):
        for m in (0, n, 3 * n):
            pairs = []
            for _ in range(m):
                i, j = sorted(rng.choice(n, 2, replace=False).tolist())
                pairs.append((i, j))
            cases.append((Network.from_pairs(n, pairs), n))
    return cases


@pytest.mark.parametrize("net, n", _broken_networks())
def test_zero_one_matches_brute_force(net, n):
    want = brute_force_zero_one(list(net), n)
    got = verify_zero_one(net)
    assert bool(got) == (want is None)
    assert got.counterexample == want


def test_zero_one_chunked_matches_unchunked():
    net = extract_network(16, SortConfig(1, True, 1))[:500]
    assert verify_zero_one(net, chunk_bits=6) == verify_zero_one(net, chunk_bits=16)


def test_zero_one_full_network_n16():
    net = extract_network(16, SortConfig(seed=2))
    res = verify_zero_one(net)
    assert res.inputs_checked == 1 << 16
    if not res:
        a = list(res.counterexample)
        apply_network(net, a)
        assert a != sorted(a)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_zero_one_soundness(k, seed):
    n = 1 << k
    net = extract_network(n, SortConfig(seed=seed))
    if verify_zero_one(net):
        rng = np.random.default_rng(seed)
        for _ in range(300):
            a = rng.integers(-1000, 1000, n).tolist()
            apply_network(net, a)
            assert a == sorted(a)


def test_sample_zero_one():
    net = extract_network(32, SortConfig(seed=3))
    res = sample_zero_one(net, samples=5000, seed=1)
    assert res.inputs_checked == 5000 and not res.exhaustive
    if res.failures == 0:
        assert res.upper_bound == pytest.approx(1 - 0.05 ** (1 / 5000), rel=1e-6)
    empty = sample_zero_one(Network(32, [], []), samples=1000, seed=1)
    assert not empty and empty.failures > 990
    a = list(empty.counterexample)
    assert a != sorted(a)


def test_network_file_round_trip(tmp_path):
    net = extract_network(16, SortConfig(seed=9))
    path = tmp_path / "net.txt"
    write_network(path, net)
    text = path.read_text().splitlines()
    assert text[0] == "n 16" and text[1] == f"{net[0].lo} {net[0].hi}"
    assert read_network(path) == net


def test_trace_file_round_trip(tmp_path):
    tr = record_trace(8, SortConfig(2, False, 0xABC))
    path = tmp_path / "trace.txt"
    write_trace(path, tr)
    lines = path.read_text().splitlines()
    assert lines[:2] == ["n 8", "seed 0x0000000000000abc c 2 shuffle 0"]
    assert read_trace(path) == tr
    # a trace file is also a readable network file
    assert read_network(path) == tr.network
    assert format_trace(tr) == path.read_text()


@pytest.mark.parametrize(
    "text, lineno",
    [("", None), ("n x\n", 1), ("n 4\n0 1\n1 1\n", 3), ("n 4\n0 9\n", 2), ("n 4\nseed zz\n", 2)],
)
def test_network_parse_errors(text, lineno):
    with pytest.raises(NetworkFormatError) as exc:
        parse_network(text, "f")
    if lineno:
        assert f"f:{lineno}:" in str(exc.value)


def test_trace_run_output():
    out, net = trace_run([3, 1, 2, 0], SortConfig(seed=1), backend="python")
    # offset 2: 3 region calls x 2 x C, offset 1: 12 x 1 x C
    assert sorted(out) == [0, 1, 2, 3] and len(net) == 3 * 2 * 4 + 12 * 4 == 72
