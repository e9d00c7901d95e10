"""
Statistical analysis of Monte Carlo transactions.

Turns merged tallies into EstimationStats and checks them against the
information-theoretic predictions: plug-in mutual information with a
bootstrap interval, click-frequency convergence and a binomial test of b2
accuracy against the best constant guess.
"""

import math
from typing import Any, Dict, Tuple

import numpy as np
from scipy import stats

from qadvantage.models import EncodingDistribution, EstimationStats, Strategy


def empirical_mutual_information(counts: np.ndarray) -> float:
    """
    Plug-in I(K; K*) of a confusion matrix, no bias correction.

    Args:
        counts: 4x4 tallies counts[k-1][k*-1]

    Returns:
        Mutual information in bits, clipped to [0, 2]
    """
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        return 0.0
    joint = counts / total
    value = (
        stats.entropy(joint.sum(axis=1), base=2)
        + stats.entropy(joint.sum(axis=0), base=2)
        - stats.entropy(joint.ravel(), base=2)
    )
    return float(min(max(value, 0.0), 2.0))


class TransactionAnalyzer:
    """
    Summarizes and tests finite-shot decoding runs.

    Uses binomial tests to decide whether a bit is decoded better than the
    best constant guess or only by chance.
    """

    def __init__(self, significance_level: float = 0.05):
        """
        Initialize analyzer.

        Args:
            significance_level: p-value threshold for significance (default 0.05)
        """
        self.significance_level = significance_level

    def summarize(
        self,
        counts: np.ndarray,
        clicks: np.ndarray,
        strategy: Strategy,
        decoder_name: str
    ) -> EstimationStats:
        """
        Build EstimationStats from merged tallies.

        Args:
            counts: 4x4 confusion counts
            clicks: Raw outcome tallies
            strategy: 'joint' or 'local'
            decoder_name: Decoder label

        Returns:
            EstimationStats
        """
        counts = np.asarray(counts, dtype=np.int64)
        shots = int(counts.sum())
        k = np.arange(4)
        b1_match = (k[:, None] // 2) == (k[None, :] // 2)
        b2_match = (k[:, None] % 2) == (k[None, :] % 2)

        return EstimationStats(
            shots=shots,
            strategy=strategy,
            decoder=decoder_name,
            success_rate=float(np.trace(counts)) / shots,
            per_bit_accuracy=(
                float(counts[b1_match].sum()) / shots,
                float(counts[b2_match].sum()) / shots,
            ),
            empirical_mutual_info=empirical_mutual_information(counts),
            counts=counts.tolist(),
            click_counts=[int(c) for c in clicks],
        )

    def bootstrap_confidence_interval(
        self,
        counts: np.ndarray,
        n_bootstrap: int = 1000,
        confidence_level: float = 0.95,
        seed: int = 0
    ) -> Tuple[float, float]:
        """
        Bootstrap confidence interval of the plug-in mutual information.

        Resamples the whole confusion matrix from a multinomial with the
        observed frequencies.

        Args:
            counts: 4x4 confusion counts
            n_bootstrap: Number of bootstrap iterations
            confidence_level: Confidence level (default 0.95 for 95% CI)
            seed: Seed of the resampling generator

        Returns:
            Tuple of (lower_bound, upper_bound)
        """
        counts = np.asarray(counts, dtype=np.int64)
        shots = int(counts.sum())
        if shots < 2:
            return (0.0, 0.0)

        rng = np.random.default_rng(seed)
        frequencies = counts.ravel() / shots
        samples = [
            empirical_mutual_information(rng.multinomial(shots, frequencies).reshape(4, 4))
            for _ in range(n_bootstrap)
        ]

        alpha = 1 - confidence_level
        lower = float(np.percentile(samples, (alpha / 2) * 100))
        upper = float(np.percentile(samples, (1 - alpha / 2) * 100))
        return lower, upper

    def click_deviation(self, clicks: np.ndarray, expected: np.ndarray) -> Dict[str, float]:
        """
        Largest gap between observed and predicted outcome frequencies.

        Args:
            clicks: Raw outcome tallies
            expected: Predicted outcome probabilities

        Returns:
            Dictionary with max deviation and the 4/sqrt(shots) band
        """
        clicks = np.asarray(clicks, dtype=float)
        shots = clicks.sum()
        deviation = float(np.max(np.abs(clicks / shots - np.asarray(expected, dtype=float))))
        bound = 4.0 / math.sqrt(shots)
        return {
            'max_deviation': deviation,
            'bound': bound,
            'within_bound': deviation <= bound,
        }

    def bit_guess_test(self, estimation: EstimationStats, distribution: EncodingDistribution) -> Dict[str, Any]:
        """
        Compare b2 accuracy with the best constant guess of b2.

        Args:
            estimation: Monte Carlo result
            distribution: Encoding probabilities

        Returns:
            Dictionary with accuracy, baseline, z-score, p-value and interpretation
        """
        p1, p2, p3, p4 = distribution.probabilities
        baseline = max(p1 + p3, p2 + p4)
        accuracy = estimation.per_bit_accuracy[1]
        n = estimation.shots
        successes = int(round(accuracy * n))

        spread = math.sqrt(baseline * (1 - baseline) / n)
        if spread > 0:
            z_score = (accuracy - baseline) / spread
        else:
            z_score = 0.0 if abs(accuracy - baseline) < 1e-12 else math.copysign(math.inf, accuracy - baseline)
        p_value = float(stats.binomtest(successes, n, min(max(baseline, 0.0), 1.0)).pvalue)

        return {
            'accuracy': accuracy,
            'baseline': baseline,
            'z_score': float(z_score),
            'p_value': p_value,
            'within_3_sigma': abs(z_score) <= 3.0,
            'is_significant': p_value < self.significance_level,
            'interpretation': self._interpret(accuracy, baseline, p_value),
        }

    def _interpret(self, accuracy: float, baseline: float, p_value: float) -> str:
        """Human-readable verdict of the b2 test."""
        if p_value >= self.significance_level:
            return (
                f"b2 accuracy {accuracy:.4f} is indistinguishable from the constant guess "
                f"{baseline:.4f} (p={p_value:.3f})."
            )
        better = "above" if accuracy > baseline else "below"
        return f"b2 accuracy {accuracy:.4f} is significantly {better} the constant guess {baseline:.4f} (p={p_value:.3g})."
