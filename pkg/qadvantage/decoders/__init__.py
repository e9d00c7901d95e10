"""
Decoders for Bob's estimate of Alice's encoding.

This package contains one implementation per decoding strategy.
"""

import numpy as np

from qadvantage.decoders.base import BaseDecoder
from qadvantage.decoders.joint import CLICK_TABLE, JointDecoder
from qadvantage.decoders.local import LocalDecoder
from qadvantage.errors import InvalidConfigError
from qadvantage.models import EncodingDistribution


class DecoderFactory:
    """
    Factory for creating decoder instances.

    Maps strategy names to their implementation classes.
    """

    _DECODER_MAP = {
        'joint': JointDecoder,
        'local': LocalDecoder,
    }

    @classmethod
    def create(
        cls,
        strategy: str,
        outcome_probabilities: np.ndarray,
        distribution: EncodingDistribution
    ) -> BaseDecoder:
        """
        Create a decoder instance.

        Args:
            strategy: 'joint' or 'local'
            outcome_probabilities: (4, 4) array of P(outcome | k)
            distribution: Encoding prior

        Returns:
            Initialized decoder

        Raises:
            InvalidConfigError: If the strategy is not recognized
        """
        decoder_class = cls._DECODER_MAP.get(strategy)

        if decoder_class is None:
            raise InvalidConfigError(
                f"Unknown strategy: {strategy}. "
                f"Available: {list(cls._DECODER_MAP.keys())}"
            )

        return decoder_class(outcome_probabilities, distribution)

    @classmethod
    def available_strategies(cls) -> list[str]:
        """Names accepted by create()."""
        return list(cls._DECODER_MAP.keys())


__all__ = [
    'BaseDecoder',
    'JointDecoder',
    'LocalDecoder',
    'DecoderFactory',
    'CLICK_TABLE',
]
