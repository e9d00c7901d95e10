"""
Unit tests for the dense-coding protocol.

Tests Pauli encoding, Holevo and accessible information, the quantum
advantage and the discord-consumption bound.
"""

import math

import numpy as np
import pytest

from qadvantage.correlations import correlation_report
from qadvantage.errors import ConventionViolatedError, HolevoBoundError, OutOfRangeError
from qadvantage.models import BitPair, EncodingDistribution, MeasurementDirection, XStateParams
from qadvantage.protocol import (
    _advantage_report,
    accessible_info,
    advantage,
    audit_optimal_encoding,
    encode_ensemble,
    encode_one,
    encoded_states,
    holevo,
    holevo_ensemble,
    pauli_unitary,
    post_encoding_correlations,
    prepared_advantage,
    quasi_optimal_distribution,
    uniform_distribution,
)
from qadvantage.qcore import SIGMA_X, SIGMA_Z, bell_state
from qadvantage.xstate import assemble, canonicalize, prepared_state, random_xstate_params


@pytest.fixture
def uniform():
    """All four Pauli operations equally likely."""
    return uniform_distribution()


def random_distributions(seed: int, n: int):
    """Seeded (R, distribution) pairs."""
    rng = np.random.default_rng(seed)
    return [
        (float(rng.uniform()), EncodingDistribution.from_probabilities(rng.dirichlet(np.ones(4))))
        for _ in range(n)
    ]


def test_pauli_unitaries():
    """Test k = 1..4 map to 1, Z, X and XZ."""
    assert np.allclose(pauli_unitary(BitPair(b1=0, b2=0)).entries, np.eye(2))
    assert np.allclose(pauli_unitary(BitPair(b1=0, b2=1)).entries, SIGMA_Z)
    assert np.allclose(pauli_unitary(BitPair(b1=1, b2=0)).entries, SIGMA_X)
    assert np.allclose(pauli_unitary(BitPair(b1=1, b2=1)).entries, SIGMA_X @ SIGMA_Z)


def test_encoded_bell_states_are_orthogonal():
    """Test the four encodings of |psi+> are the four Bell states."""
    states = encoded_states(bell_state())
    overlaps = np.array([[np.trace(a.entries @ b.entries).real for b in states] for a in states])
    assert np.allclose(overlaps, np.eye(4), atol=1e-12)
    assert np.allclose(encode_one(bell_state(), BitPair(b1=0, b2=0)).entries, bell_state().entries)


def test_uniform_encoding_gives_maximally_mixed_state(uniform):
    """Test the uniform ensemble average is 1/4 for any prepared state."""
    for r in (0.0, 0.3, 1.0):
        average = encode_ensemble(prepared_state(r), uniform)
        assert np.allclose(average.entries, np.eye(4) / 4, atol=1e-12)


def test_holevo_of_bell_state(uniform):
    """Test dense coding reaches two bits."""
    assert holevo(bell_state(), uniform) == pytest.approx(2.0, abs=1e-12)


def test_holevo_matches_member_by_member_form():
    """Test S(rho~) - S(rho) against S(rho~) - sum p_k S(rho_k)."""
    for r, distribution in random_distributions(1, 10):
        rho = prepared_state(r)
        assert holevo(rho, distribution) == pytest.approx(holevo_ensemble(rho, distribution), abs=1e-10)


def test_accessible_information_of_bell_state(uniform):
    """Test local decoding of a Bell pair yields one bit."""
    value, _ = accessible_info(bell_state(), uniform)
    assert value == pytest.approx(1.0, abs=1e-9)
    value, _ = accessible_info(bell_state(), uniform, measured='p')
    assert value == pytest.approx(1.0, abs=1e-9)


def test_single_member_ensemble_carries_no_information():
    """Test I_q = I_c = 0 when Alice always applies the identity."""
    report = advantage(prepared_state(0.7), EncodingDistribution(p1=1.0, p2=0.0, p3=0.0, p4=0.0))
    assert report.i_q == pytest.approx(0.0, abs=1e-12)
    assert report.i_c == pytest.approx(0.0, abs=1e-12)
    assert report.delta_d == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("r", [0.0, 0.25, 1 / 3, 0.8, 1.0])
def test_uniform_encoding_consumes_all_discord(r, uniform):
    """Test dI = D, I_q = I and I_c = J for the uniform encoding."""
    rho = prepared_state(r)
    before = correlation_report(rho)
    report = advantage(rho, uniform)

    assert report.delta_i == pytest.approx(before.discord, abs=1e-9)
    assert report.i_q == pytest.approx(before.mutual_information, abs=1e-9)
    assert report.i_c == pytest.approx(before.classical_information, abs=1e-9)
    assert report.d_after == pytest.approx(0.0, abs=1e-12)
    assert report.mutual_information_removed == pytest.approx(report.i_q, abs=1e-12)


def test_superdense_limit(uniform):
    """Test dI = 1 for the Bell state."""
    report = prepared_advantage(1.0, uniform, search='full')
    assert report.i_q == pytest.approx(2.0, abs=1e-12)
    assert report.delta_i == pytest.approx(1.0, abs=1e-9)


def test_one_pauli_encoding_at_balanced_splitter():
    """Test p1 = p2 = 1/2 at R = 1/2: I_c = 1 - h(1/4) and dI = 3(2 - log2 3)/4."""
    report = prepared_advantage(0.5, quasi_optimal_distribution(0.5), search='full')
    assert report.i_q == pytest.approx(0.5, abs=1e-12)
    assert report.i_c == pytest.approx(0.188722, abs=1e-6)
    assert report.delta_i == pytest.approx(3 * (2 - math.log2(3)) / 4, abs=1e-9)
    assert report.delta_i == pytest.approx(report.delta_d, abs=1e-9)


def test_one_pauli_encoding_maximum_off_balance():
    """Test the p1 = 1/2 cut peaks at R = 3/5 with dI = log2 5 - 2."""
    distribution = quasi_optimal_distribution(0.5)
    peak = prepared_advantage(0.6, distribution).delta_i
    assert peak == pytest.approx(math.log2(5) - 2, abs=1e-9)
    for r in (0.5, 0.55, 0.65, 0.7):
        assert prepared_advantage(r, distribution).delta_i < peak


def test_prepared_advantage_matches_state_based_advantage():
    """Test the closed-form fast path against the general one."""
    for r, distribution in random_distributions(2, 8):
        fast = prepared_advantage(r, distribution, search='axes')
        general = advantage(prepared_state(r), distribution, search='axes')
        assert fast.i_q == pytest.approx(general.i_q, abs=1e-10)
        assert fast.i_c == pytest.approx(general.i_c, abs=1e-10)
        assert fast.d_after == pytest.approx(general.d_after, abs=1e-10)


def random_encoded_states(seed: int, n: int):
    """Seeded (symmetric X-state, distribution) pairs."""
    rng = np.random.default_rng(seed)
    return [
        (assemble(random_xstate_params(rng)), EncodingDistribution.from_probabilities(rng.dirichlet(np.ones(4))))
        for _ in range(n)
    ]


@pytest.mark.slow
def test_full_search_agrees_with_axes():
    """Test the optimal local measurement of symmetric X-states lies on a Pauli axis."""
    for rho, distribution in random_encoded_states(3, 200):
        axes, _ = accessible_info(rho, distribution, search='axes')
        full, _ = accessible_info(rho, distribution, search='full')
        assert full >= axes - 1e-12
        assert full <= axes + 1e-6


def test_accessible_information_independent_of_measured_qubit():
    """Test I_c is the same whether Bob measures s or p first."""
    for rho, distribution in random_encoded_states(5, 200):
        on_s, _ = accessible_info(rho, distribution, measured='s', search='axes')
        on_p, _ = accessible_info(rho, distribution, measured='p', search='axes')
        assert on_s == pytest.approx(on_p, abs=1e-9)



def test_accessible_information_above_holevo_is_rejected():
    """Test I_c may exceed I_q by rounding only."""
    state = XStateParams(a=0.3, w=0.1, z=0.15)
    direction = MeasurementDirection(theta=0.0)

    report = _advantage_report(state, state, 1e-12, direction)
    assert report.i_c == 0.0
    assert report.delta_i == 0.0
    with pytest.raises(HolevoBoundError, match="exceeds the Holevo quantity"):
        _advantage_report(state, state, 0.1, direction)

def test_discord_consumption_bound():
    """Test dD - J(rho~) <= dI <= dD on random encodings."""
    for r, distribution in random_distributions(4, 50):
        report = prepared_advantage(r, distribution)
        assert report.lower_slack >= -1e-9
        assert report.upper_slack >= -1e-9
        assert report.satisfies_bound


def test_unknown_search_mode_rejected(uniform):
    """Test search must be 'full' or 'axes'."""
    with pytest.raises(ValueError):
        accessible_info(bell_state(), uniform, search='grid')


def test_quasi_optimal_encoding_leaves_no_discord():
    """Test p1 = p2, p3 = p4 consumes all discord."""
    rng = np.random.default_rng(5)
    for _ in range(20):
        r, p1 = float(rng.uniform()), float(rng.uniform(0, 0.5))
        distribution = quasi_optimal_distribution(p1)
        assert post_encoding_correlations(distribution, r).discord == pytest.approx(0.0, abs=1e-9)
        average = encode_ensemble(prepared_state(r), distribution)
        assert correlation_report(average).discord == pytest.approx(0.0, abs=1e-9)


def test_post_encoding_correlations_match_state():
    """Test the closed form against canonicalize(encode_ensemble(...))."""
    distribution = EncodingDistribution(p1=0.5, p2=0.1, p3=0.3, p4=0.1)
    r = 0.7
    closed = post_encoding_correlations(distribution, r)
    direct = correlation_report(encode_ensemble(prepared_state(r), distribution))
    assert closed.concurrence == pytest.approx(direct.concurrence, abs=1e-12)
    assert closed.discord == pytest.approx(direct.discord, abs=1e-9)
    assert (closed.u, closed.v) == pytest.approx((direct.diagnostics.u, direct.diagnostics.v), abs=1e-12)


def test_post_encoding_identity_encoding_keeps_prepared_values():
    """Test d = (1, 0, 0, 0) reproduces v = |2R - 1| and C = R - T."""
    closed = post_encoding_correlations(EncodingDistribution(p1=1.0, p2=0.0, p3=0.0, p4=0.0), 0.8)
    assert closed.v == pytest.approx(0.6, abs=1e-12)
    assert closed.concurrence == pytest.approx(0.6, abs=1e-12)


def test_post_encoding_convention():
    """Test ConventionViolatedError for p1 < p2."""
    with pytest.raises(ConventionViolatedError):
        post_encoding_correlations(EncodingDistribution(p1=0.1, p2=0.4, p3=0.25, p4=0.25), 0.5)


def test_quasi_optimal_distribution_domain():
    """Test p1 must lie in [0, 1/2]."""
    assert quasi_optimal_distribution(0.25) == uniform_distribution()
    with pytest.raises(OutOfRangeError):
        quasi_optimal_distribution(0.6)


def test_optimal_encoding_audit():
    """Test the stated optimality condition against I(rho~) = 0."""
    uniform_audit = audit_optimal_encoding(uniform_distribution(), 0.7)
    assert uniform_audit.stated_condition and uniform_audit.consumes_all
    assert not uniform_audit.disagrees

    balanced = audit_optimal_encoding(EncodingDistribution(p1=1.0, p2=0.0, p3=0.0, p4=0.0), 0.5)
    assert balanced.stated_condition
    assert balanced.mutual_information_after == pytest.approx(0.5, abs=1e-12)
    assert balanced.disagrees


def test_averaged_state_parameters():
    """Test canonicalize(rho~) for an asymmetric encoding."""
    distribution = EncodingDistribution(p1=0.4, p2=0.1, p3=0.3, p4=0.2)
    r = 0.6
    params = canonicalize(encode_ensemble(prepared_state(r), distribution))
    assert params.a == pytest.approx(0.5 * (0.5 * r + 0.5 * (1 - r)), abs=1e-12)
    assert params.w == pytest.approx(0.5 * 0.3 * r, abs=1e-12)
    assert params.z == pytest.approx(0.5 * 0.1 * r, abs=1e-12)
