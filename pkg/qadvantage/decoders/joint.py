"""
Joint decoder - Bell measurement through the CNOT + Hadamard circuit.

This is the decoder that reaches the Holevo information on Bell inputs.
"""

import numpy as np

from qadvantage.decoders.base import BaseDecoder
from qadvantage.decoders.local import TIE_DECIMALS

# Detector index i = 2*pol + path -> (b1, b2) = (path, pol)
CLICK_TABLE = {
    0: (0, 0),
    1: (1, 0),
    2: (0, 1),
    3: (1, 1),
}


class JointDecoder(BaseDecoder):
    """
    Joint decoder - click table refined by the prior.

    Each click reads out (b1, b2) through CLICK_TABLE unless another k has a
    strictly larger posterior p_k P(click | k), in which case that k wins
    (lowest k among equals). On Bell inputs the two rules coincide; with a
    single-member ensemble the decoder always answers that member.
    """

    @property
    def name(self) -> str:
        """Decoder identifier."""
        return "joint_bell"

    def _build_lookup(self) -> np.ndarray:
        prior = np.asarray(self.distribution.probabilities)
        posterior = np.round(prior[:, None] * self.outcome_probabilities, TIE_DECIMALS)

        lookup = []
        for click, (b1, b2) in sorted(CLICK_TABLE.items()):
            table_k = 2 * b1 + b2
            column = posterior[:, click]
            if column[table_k] >= column.max():
                lookup.append(table_k)
            else:
                lookup.append(int(np.argmax(column)))
        return np.array(lookup)
