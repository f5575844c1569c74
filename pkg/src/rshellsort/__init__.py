"""Randomized Shellsort: a data-oblivious sort built from region compare-exchanges."""

from .core import (
    DEFAULT_C,
    AssertingSink,
    ContractViolation,
    CountingSink,
    RecordingSink,
    SortConfig,
    UnsupportedLengthError,
    comparator_budget,
    compare_exchange,
    compare_regions,
    exchange,
    is_sorted,
    permute_random,
    randomized_shellsort,
    shellsorted,
)
from .harness import TrialReport, count_comparisons, monte_carlo, sort_file
from .oblivious import (
    Comparator,
    Network,
    Trace,
    ZeroOneResult,
    apply_network,
    assert_oblivious,
    extract_network,
    record_trace,
    sample_zero_one,
    verify_zero_one,
)
from .prng import DEFAULT_SEED, RandomSource, new_random_source

__version__ = "0.1.0"
