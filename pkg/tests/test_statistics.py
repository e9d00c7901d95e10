"""
Unit tests for TransactionAnalyzer.

Tests empirical mutual information, summaries, bootstrap intervals and the
b2 constant-guess test.
"""

import numpy as np
import pytest

from qadvantage.models import EncodingDistribution
from qadvantage.protocol import uniform_distribution
from qadvantage.statistics import TransactionAnalyzer, empirical_mutual_information


@pytest.fixture
def analyzer():
    """Analyzer with the default 5% significance level."""
    return TransactionAnalyzer()


def test_mutual_information_of_perfect_decoding():
    """Test a uniform diagonal confusion matrix carries two bits."""
    assert empirical_mutual_information(np.eye(4) * 25) == pytest.approx(2.0, abs=1e-12)


def test_mutual_information_of_independent_guesses():
    """Test a product confusion matrix carries nothing."""
    assert empirical_mutual_information(np.ones((4, 4))) == pytest.approx(0.0, abs=1e-12)


def test_mutual_information_of_empty_matrix():
    """Test no shots means no information."""
    assert empirical_mutual_information(np.zeros((4, 4))) == 0.0


def test_summarize_bit_accuracies(analyzer):
    """Test per-bit accuracies when only b2 is always wrong."""
    counts = np.zeros((4, 4), dtype=int)
    # k*-1 = (k-1) xor 1 flips b2 and keeps b1
    for k in range(4):
        counts[k, k ^ 1] = 10
    stats = analyzer.summarize(counts, [10, 10, 10, 10], 'local', 'local_map')

    assert stats.shots == 40
    assert stats.success_rate == 0.0
    assert stats.per_bit_accuracy == (1.0, 0.0)
    assert stats.decoder == 'local_map'


def test_bootstrap_interval_brackets_estimate(analyzer):
    """Test the interval contains the plug-in value and is reproducible."""
    counts = np.array([[30, 5, 3, 2], [4, 28, 6, 2], [3, 5, 25, 7], [2, 3, 6, 29]])
    value = empirical_mutual_information(counts)

    lower, upper = analyzer.bootstrap_confidence_interval(counts, n_bootstrap=300, seed=1)
    assert lower <= value <= upper
    assert (lower, upper) == analyzer.bootstrap_confidence_interval(counts, n_bootstrap=300, seed=1)


def test_bootstrap_interval_of_perfect_decoding(analyzer):
    """Test a diagonal matrix resamples to a narrow interval below two bits."""
    lower, upper = analyzer.bootstrap_confidence_interval(np.eye(4, dtype=int) * 50, n_bootstrap=200)
    assert 1.9 < lower <= upper <= 2.0


def test_click_deviation(analyzer):
    """Test the max deviation and the 4/sqrt(shots) band."""
    result = analyzer.click_deviation([30, 20, 25, 25], [0.25, 0.25, 0.25, 0.25])
    assert result['max_deviation'] == pytest.approx(0.05)
    assert result['bound'] == pytest.approx(0.4)
    assert result['within_bound']


def test_bit_guess_test_at_baseline(analyzer):
    """Test b2 accuracy equal to the constant guess is not significant."""
    counts = np.zeros((4, 4), dtype=int)
    for k in range(4):
        counts[k, k & 2] = 250
    stats = analyzer.summarize(counts, [250] * 4, 'local', 'local_map')

    result = analyzer.bit_guess_test(stats, uniform_distribution())
    assert result['baseline'] == pytest.approx(0.5)
    assert result['accuracy'] == pytest.approx(0.5)
    assert result['z_score'] == pytest.approx(0.0)
    assert result['within_3_sigma']
    assert not result['is_significant']
    assert "indistinguishable" in result['interpretation']


def test_bit_guess_test_detects_real_information(analyzer):
    """Test perfect b2 decoding is far above the constant guess."""
    stats = analyzer.summarize(np.eye(4, dtype=int) * 250, [250] * 4, 'joint', 'joint_bell')
    result = analyzer.bit_guess_test(stats, EncodingDistribution(p1=0.3, p2=0.2, p3=0.3, p4=0.2))
    assert result['baseline'] == pytest.approx(0.6)
    assert not result['within_3_sigma']
    assert result['is_significant']
    assert "significantly above" in result['interpretation']
