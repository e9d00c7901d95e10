"""
Unit tests for BatchMerger.

Tests tally merging, order independence and duplicate detection.
"""

import numpy as np
import pytest

from qadvantage.batch_merger import BatchMerger
from qadvantage.models import BatchTally


def create_tally(batch_index: int, diagonal: int, off: int = 0):
    """Helper function to create a BatchTally with a simple confusion matrix."""
    counts = np.full((4, 4), off) + np.eye(4, dtype=int) * (diagonal - off)
    shots = int(counts.sum())
    return BatchTally(
        batch_index=batch_index,
        shots=shots,
        counts=counts.tolist(),
        click_counts=[shots // 4] * 4,
    )


def test_merge_single_tally():
    """Test merging a single batch."""
    counts, clicks, shots = BatchMerger().merge([create_tally(0, 5)])
    assert shots == 20
    assert np.array_equal(counts, np.eye(4) * 5)
    assert list(clicks) == [5, 5, 5, 5]


def test_merge_sums_batches():
    """Test confusion matrices and clicks are summed."""
    counts, clicks, shots = BatchMerger().merge([create_tally(0, 5), create_tally(1, 3, off=1)])
    assert shots == 20 + 24
    assert counts[0, 0] == 8
    assert counts[0, 1] == 1
    assert int(clicks.sum()) == shots


def test_merge_is_order_independent():
    """Test the merged totals do not depend on completion order."""
    tallies = [create_tally(i, i + 1, off=i % 2) for i in range(5)]
    merger = BatchMerger()
    forward = merger.merge(tallies)
    backward = merger.merge(list(reversed(tallies)))
    assert np.array_equal(forward[0], backward[0])
    assert np.array_equal(forward[1], backward[1])
    assert forward[2] == backward[2]


def test_merge_rejects_duplicates():
    """Test a repeated batch index is an error."""
    with pytest.raises(ValueError, match="Duplicate"):
        BatchMerger().merge([create_tally(0, 5), create_tally(0, 5)])


def test_merge_rejects_empty_input():
    """Test merging nothing is an error."""
    with pytest.raises(ValueError):
        BatchMerger().merge([])


def test_tally_must_add_up():
    """Test a tally whose counts miss shots is rejected."""
    with pytest.raises(ValueError):
        BatchTally(batch_index=0, shots=10, counts=np.eye(4, dtype=int).tolist(), click_counts=[1, 1, 1, 1])


def test_summary():
    """Test batch bookkeeping."""
    tallies = [create_tally(1, 2), create_tally(0, 5)]
    summary = BatchMerger().summary(tallies)
    assert summary == {'num_batches': 2, 'total_shots': 28, 'batch_sizes': [20, 8]}
