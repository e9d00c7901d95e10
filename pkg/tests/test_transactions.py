"""
Unit tests for the Monte Carlo transactions.

Tests the decoding circuit, detector probabilities, reproducibility and the
finite-shot convergence properties.
"""

import numpy as np
import pytest

from qadvantage.decoders import CLICK_TABLE
from qadvantage.models import EncodingDistribution, MeasurementDirection, TransactionConfig
from qadvantage.protocol import accessible_info, encoded_states, holevo, uniform_distribution
from qadvantage.qcore import DensityMatrix, bell_state, maximally_mixed
from qadvantage.statistics import TransactionAnalyzer
from qadvantage.transactions import (
    TransactionRunner,
    decode_circuit,
    detector_probabilities,
    local_outcome_probabilities,
    run_transactions,
)
from qadvantage.xstate import prepared_state


def make_config(**overrides) -> TransactionConfig:
    """Uniform encoding of the prepared state with small defaults."""
    fields = dict(R=1.0, distribution=uniform_distribution(), shots=2000, seed=7, strategy='joint')
    fields.update(overrides)
    return TransactionConfig(**fields)


def test_decode_circuit_disentangles_bell_state():
    """Test |psi+> -> |h0>."""
    out = decode_circuit(bell_state())
    assert np.allclose(out.entries, np.diag([1, 0, 0, 0]), atol=1e-12)


def test_decode_circuit_keeps_maximally_mixed_state():
    """Test 1/4 is invariant."""
    assert np.allclose(decode_circuit(maximally_mixed()).entries, np.eye(4) / 4, atol=1e-15)


def test_each_bell_encoding_fires_its_own_detector():
    """Test the click of every encoding reads back its bits."""
    for k, state in enumerate(encoded_states(bell_state())):
        probabilities = detector_probabilities(decode_circuit(state))
        click = int(np.argmax(probabilities))
        assert probabilities[click] == pytest.approx(1.0, abs=1e-12)
        b1, b2 = CLICK_TABLE[click]
        assert 2 * b1 + b2 == k


def test_detector_probabilities_of_prepared_state():
    """Test R |h0> + T (|h1> + |v1>)/2 at R = 1/3."""
    probabilities = detector_probabilities(decode_circuit(prepared_state(1 / 3)))
    assert probabilities == pytest.approx([1 / 3, 1 / 3, 0.0, 1 / 3], abs=1e-12)
    assert probabilities.sum() == pytest.approx(1.0, abs=1e-12)


def test_local_outcomes_of_bell_state():
    """Test z outcomes on s and p agree on |psi+>."""
    z = MeasurementDirection(theta=0.0)
    probabilities = local_outcome_probabilities(bell_state(), z, z)
    assert probabilities == pytest.approx([0.5, 0.0, 0.0, 0.5], abs=1e-12)


def test_local_outcomes_of_product_state():
    """Test a product state factorizes."""
    rho = DensityMatrix(np.diag([0, 1, 0, 0]).astype(complex))
    z = MeasurementDirection(theta=0.0)
    assert local_outcome_probabilities(rho, z, z) == pytest.approx([0.0, 1.0, 0.0, 0.0], abs=1e-12)


def test_superdense_limit_is_perfect():
    """Test R = 1 with joint decoding recovers every k."""
    stats = run_transactions(make_config(shots=10_000))
    assert stats.success_rate == 1.0
    assert stats.per_bit_accuracy == (1.0, 1.0)
    assert stats.empirical_mutual_info == pytest.approx(2.0, abs=1e-3)


@pytest.mark.parametrize("strategy", ['joint', 'local'])
def test_single_member_ensemble_always_decoded(strategy):
    """Test d = (1, 0, 0, 0) gives success rate 1."""
    config = make_config(
        R=1 / 3,
        distribution=EncodingDistribution(p1=1.0, p2=0.0, p3=0.0, p4=0.0),
        strategy=strategy,
    )
    assert run_transactions(config).success_rate == 1.0


def test_runs_are_reproducible():
    """Test identical configs give identical stats."""
    config = make_config(R=0.6, strategy='local', shots=5000)
    assert run_transactions(config) == run_transactions(config)


def test_result_independent_of_worker_count():
    """Test concurrent batches merge to the same stats."""
    serial = run_transactions(make_config(R=0.4, shots=5000, batch_size=700, workers=1))
    parallel = run_transactions(make_config(R=0.4, shots=5000, batch_size=700, workers=4))
    assert serial == parallel


def test_different_seeds_differ():
    """Test the seed drives the sampling."""
    first = run_transactions(make_config(R=0.4, seed=1))
    second = run_transactions(make_config(R=0.4, seed=2))
    assert first.counts != second.counts


def test_batch_sizes():
    """Test only the last batch is short."""
    runner = TransactionRunner(make_config(shots=2500, batch_size=1000))
    assert runner.batch_sizes() == [1000, 1000, 500]


def test_confusion_rows_match_drawn_counts():
    """Test row sums of the confusion matrix are the draws of each k."""
    stats = run_transactions(make_config(R=0.5, shots=4000))
    assert sum(stats.drawn_counts) == 4000
    assert all(count > 0 for count in stats.drawn_counts)


def test_click_frequencies_converge():
    """Test observed clicks lie within 4/sqrt(shots) of the prediction."""
    runner = TransactionRunner(make_config(R=1 / 3, shots=100_000, seed=1))
    stats = runner.run()
    deviation = TransactionAnalyzer().click_deviation(stats.click_counts, runner.expected_clicks())
    assert deviation['bound'] == pytest.approx(0.012649, abs=1e-6)
    assert deviation['within_bound']


def test_joint_information_below_holevo():
    """Test empirical I(K; K*) <= I_q + 0.02 with joint decoding."""
    config = make_config(R=1 / 3, shots=100_000, seed=1)
    stats = run_transactions(config)
    assert stats.empirical_mutual_info <= holevo(prepared_state(1 / 3), config.distribution) + 0.02


def test_local_information_below_accessible_information():
    """Test empirical I(K; K*) <= I_c + 0.02 with local decoding."""
    config = make_config(R=1 / 3, shots=100_000, seed=1, strategy='local')
    stats = run_transactions(config)
    i_c, _ = accessible_info(prepared_state(1 / 3), config.distribution)
    assert stats.empirical_mutual_info <= i_c + 0.02


def test_local_decoding_cannot_see_b2():
    """Test local b2 accuracy is at the constant-guess level for the Bell state."""
    stats = run_transactions(make_config(strategy='local', shots=20_000, seed=3))
    assert stats.per_bit_accuracy[0] == 1.0
    # The decoder always answers b2 = 0, so b2 accuracy is the share of k with b2 = 0
    b2_zero = stats.drawn_counts[0] + stats.drawn_counts[2]
    assert stats.per_bit_accuracy[1] == pytest.approx(b2_zero / stats.shots)


def test_joint_beats_local_on_b1():
    """Test b1 accuracy of joint decoding is at least that of local decoding."""
    joint = run_transactions(make_config(R=0.7, shots=20_000, seed=5))
    local = run_transactions(make_config(R=0.7, shots=20_000, seed=5, strategy='local'))
    assert joint.per_bit_accuracy[0] >= local.per_bit_accuracy[0] - 0.03


def test_invalid_strategy_rejected():
    """Test the config only accepts known strategies."""
    with pytest.raises(ValueError):
        make_config(strategy='adaptive')
