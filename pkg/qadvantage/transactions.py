"""
Finite-shot simulation of encode/decode transactions.

Alice draws k from her distribution and applies U_k to polarization; Bob
either runs the joint CNOT + Hadamard circuit and reads one of four
detectors, or measures polarization and path separately. Shots run in
independently seeded batches whose tallies are merged at the end.
"""

import concurrent.futures
from typing import List, Sequence

import numpy as np

from qadvantage.batch_merger import BatchMerger
from qadvantage.decoders import BaseDecoder, DecoderFactory
from qadvantage.errors import InvalidConfigError
from qadvantage.models import (
    BatchTally,
    EstimationStats,
    MeasurementDirection,
    TransactionConfig,
)
from qadvantage.protocol import encoded_states
from qadvantage.qcore import (
    CNOT,
    HADAMARD,
    IDENTITY_2,
    DensityMatrix,
    apply_unitary,
    bloch_projector,
)
from qadvantage.statistics import TransactionAnalyzer
from qadvantage.xstate import prepared_state

# Outcome probabilities below this are treated as impossible when sampling
SAMPLING_FLOOR = 1e-15

DECODE_UNITARY = np.kron(HADAMARD, IDENTITY_2) @ CNOT


def decode_circuit(rho: DensityMatrix) -> DensityMatrix:
    """CNOT with polarization as control, then Hadamard on polarization."""
    return apply_unitary(rho, DECODE_UNITARY)


def detector_probabilities(rho_out: DensityMatrix) -> np.ndarray:
    """
    Click probabilities of D_h0, D_h1, D_v0, D_v1.

    Args:
        rho_out: State reaching the detectors

    Returns:
        Diagonal of rho_out, non-negative, in basis order
    """
    return np.clip(np.real(np.diag(rho_out.entries)), 0.0, None)


def local_outcome_probabilities(
    rho: DensityMatrix,
    m_s: MeasurementDirection,
    m_p: MeasurementDirection
) -> np.ndarray:
    """
    Joint distribution of separate +- measurements on s and p.

    Returns:
        Probabilities indexed by 2*[s gave -] + [p gave -]
    """
    probabilities = []
    for outcome_s in (1, -1):
        for outcome_p in (1, -1):
            projector = np.kron(bloch_projector(m_s, outcome_s), bloch_projector(m_p, outcome_p))
            probabilities.append(np.trace(projector @ rho.entries).real)
    return np.clip(np.array(probabilities), 0.0, None)


def outcome_table(states: Sequence[DensityMatrix], config: TransactionConfig) -> np.ndarray:
    """(4, 4) array whose row k-1 is P(outcome | k) under the configured strategy."""
    if config.strategy == 'joint':
        rows = [detector_probabilities(decode_circuit(state)) for state in states]
    elif config.strategy == 'local':
        rows = [local_outcome_probabilities(state, config.m_s, config.m_p) for state in states]
    else:
        raise InvalidConfigError(f"Unknown strategy: {config.strategy}")
    return np.array(rows)


def _sampling_cdf(table: np.ndarray) -> np.ndarray:
    """Row-wise cumulative distributions that end at exactly 1."""
    cleaned = np.where(table < SAMPLING_FLOOR, 0.0, table)
    cleaned = cleaned / cleaned.sum(axis=1, keepdims=True)
    cdf = np.cumsum(cleaned, axis=1)
    cdf[:, -1] = 1.0
    return cdf


class TransactionRunner:
    """
    Runs a TransactionConfig batch by batch.

    Every batch owns a generator spawned from the run seed, so the result is
    identical for any number of workers.

    Example:
        >>> runner = TransactionRunner(config)
        >>> stats = runner.run()
    """

    def __init__(self, config: TransactionConfig):
        """
        Initialize runner.

        Args:
            config: Validated transaction configuration
        """
        self.config = config
        self.states = encoded_states(prepared_state(config.R))
        self.table = outcome_table(self.states, config)
        self.decoder: BaseDecoder = DecoderFactory.create(config.strategy, self.table, config.distribution)
        self.merger = BatchMerger()
        self.analyzer = TransactionAnalyzer()
        self._prior = np.asarray(config.distribution.probabilities, dtype=float)
        self._cdf = _sampling_cdf(self.table)

    def batch_sizes(self) -> List[int]:
        """Shots per batch; only the last batch may be short."""
        full, rest = divmod(self.config.shots, self.config.batch_size)
        return [self.config.batch_size] * full + ([rest] if rest else [])

    def run_batch(self, batch_index: int, seed: np.random.SeedSequence, shots: int) -> BatchTally:
        """
        Simulate one batch.

        Args:
            batch_index: Position of the batch in the run
            seed: Spawned seed sequence of this batch
            shots: Number of transactions

        Returns:
            BatchTally with confusion and click counts
        """
        rng = np.random.default_rng(seed)
        k = rng.choice(4, size=shots, p=self._prior / self._prior.sum())
        draws = rng.random(shots)
        outcomes = np.minimum((draws[:, None] >= self._cdf[k]).sum(axis=1), 3)
        estimates = self.decoder.estimate(outcomes)

        counts = np.zeros((4, 4), dtype=np.int64)
        np.add.at(counts, (k, estimates), 1)
        clicks = np.bincount(outcomes, minlength=4)

        return BatchTally(
            batch_index=batch_index,
            shots=shots,
            counts=counts.tolist(),
            click_counts=clicks.tolist(),
        )

    def run(self) -> EstimationStats:
        """
        Simulate all shots and summarize them.

        Returns:
            EstimationStats of the whole run
        """
        sizes = self.batch_sizes()
        seeds = np.random.SeedSequence(self.config.seed).spawn(len(sizes))
        jobs = list(zip(range(len(sizes)), seeds, sizes))

        if self.config.workers > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=self.config.workers) as executor:
                futures = [executor.submit(self.run_batch, *job) for job in jobs]
                tallies = [future.result() for future in concurrent.futures.as_completed(futures)]
        else:
            tallies = [self.run_batch(*job) for job in jobs]

        counts, clicks, _ = self.merger.merge(tallies)
        return self.analyzer.summarize(counts, clicks, self.config.strategy, self.decoder.name)

    def expected_clicks(self) -> np.ndarray:
        """Predicted raw outcome distribution sum_k p_k P(outcome | k)."""
        return self._prior @ self.table


def run_transactions(config: TransactionConfig) -> EstimationStats:
    """
    Monte Carlo of the encode/decode loop.

    Args:
        config: Validated transaction configuration

    Returns:
        EstimationStats, bit-identical for identical configs

    Raises:
        InvalidConfigError: If the strategy is unknown
    """
    return TransactionRunner(config).run()
