"""
Base decoder abstract class.

A decoder turns Bob's raw measurement outcome (one of four) into his estimate
k* of Alice's operation. All decoders precompute a deterministic
outcome -> k* lookup table.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np

from qadvantage.models import EncodingDistribution

N_OUTCOMES = 4


class BaseDecoder(ABC):
    """
    Abstract base class for Bob's estimators.

    Subclasses differ only in how the lookup table is built:
    - Joint: fixed click table of the Bell-disentangling circuit
    - Local: maximum a posteriori over separate measurements of s and p
    """

    def __init__(self, outcome_probabilities: np.ndarray, distribution: EncodingDistribution):
        """
        Initialize decoder.

        Args:
            outcome_probabilities: (4, 4) array, row k-1 holds P(outcome | k)
            distribution: Alice's encoding probabilities (prior over k)
        """
        table = np.asarray(outcome_probabilities, dtype=float)
        if table.shape != (4, N_OUTCOMES):
            raise ValueError(f"Outcome table must have shape (4, 4), got {table.shape}")
        self.outcome_probabilities = table
        self.distribution = distribution
        self.lookup = np.asarray(self._build_lookup(), dtype=int)

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Decoder name (e.g., 'joint_bell', 'local_map').

        Returns:
            String identifier for this decoder
        """
        pass

    @abstractmethod
    def _build_lookup(self) -> np.ndarray:
        """
        Map every outcome index to a 0-based estimate k* - 1.

        Returns:
            Integer array of length 4
        """
        pass

    def estimate(self, outcomes: np.ndarray) -> np.ndarray:
        """
        Estimates for an array of outcome indices.

        Args:
            outcomes: Integer outcome indices in 0..3

        Returns:
            0-based k* estimates
        """
        return self.lookup[np.asarray(outcomes, dtype=int)]

    def describe(self) -> Dict[str, Any]:
        """
        Decoder metadata for reports.

        Returns:
            Dictionary with name and lookup table (1-based k*)
        """
        return {
            'decoder': self.name,
            'lookup': [int(k) + 1 for k in self.lookup],
        }
