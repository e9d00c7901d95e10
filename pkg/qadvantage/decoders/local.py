"""
Local decoder - separate projective measurements on polarization and path.
"""

import numpy as np

from qadvantage.decoders.base import BaseDecoder

# Posteriors closer than this are ties
TIE_DECIMALS = 12


class LocalDecoder(BaseDecoder):
    """
    Maximum a posteriori decoder over the four joint +- outcomes.

    Outcome index is 2*[s gave -] + [p gave -]. For each outcome the k with
    the largest p_k P(outcome | k) wins; ties go to the lowest k.
    """

    @property
    def name(self) -> str:
        """Decoder identifier."""
        return "local_map"

    def _build_lookup(self) -> np.ndarray:
        prior = np.asarray(self.distribution.probabilities)
        posterior = np.round(prior[:, None] * self.outcome_probabilities, TIE_DECIMALS)
        # argmax returns the first maximum
        return np.argmax(posterior, axis=0)
