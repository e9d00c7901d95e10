"""
Batch merger for combining Monte Carlo shot batches.

This module provides functionality to merge the tallies of independently
seeded batches into a single result that does not depend on the order in
which batches finished.
"""

from typing import List, Tuple

import numpy as np

from qadvantage.models import BatchTally


class BatchMerger:
    """
    Merge tallies from multiple shot batches.

    Features:
    - Reject duplicated batch indices
    - Sum confusion matrices and click tallies
    - Order independent
    """

    def merge(self, tallies: List[BatchTally]) -> Tuple[np.ndarray, np.ndarray, int]:
        """
        Merge batch tallies into run totals.

        Args:
            tallies: List of BatchTally, in any order

        Returns:
            Tuple of (4x4 confusion counts, 4 click counts, total shots)

        Raises:
            ValueError: If tallies is empty or a batch index repeats
        """
        if not tallies:
            raise ValueError("No batch tallies to merge")

        ordered = sorted(tallies, key=lambda t: t.batch_index)
        indices = [t.batch_index for t in ordered]
        if len(set(indices)) != len(indices):
            raise ValueError(f"Duplicate batch indices in {indices}")

        counts = np.zeros((4, 4), dtype=np.int64)
        clicks = np.zeros(4, dtype=np.int64)
        for tally in ordered:
            counts += np.asarray(tally.counts, dtype=np.int64)
            clicks += np.asarray(tally.click_counts, dtype=np.int64)

        return counts, clicks, sum(t.shots for t in ordered)

    def summary(self, tallies: List[BatchTally]) -> dict:
        """
        Per-run batch bookkeeping.

        Args:
            tallies: List of batch tallies

        Returns:
            Dictionary with batch count and sizes
        """
        return {
            'num_batches': len(tallies),
            'total_shots': sum(t.shots for t in tallies),
            'batch_sizes': [t.shots for t in sorted(tallies, key=lambda t: t.batch_index)],
        }
