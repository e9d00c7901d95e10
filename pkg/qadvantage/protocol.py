"""
Pauli encoding of two classical bits on the polarization qubit, Holevo and
locally accessible information, and the quantum advantage of joint decoding.

Alice applies U_k = X^b1 Z^b2 to qubit s with probability p_k; Bob holds the
averaged state rho~ = sum_k p_k rho_k.
"""

from typing import List, Literal, Tuple

import numpy as np

from qadvantage.bloch_search import BlochSearch, axis_candidates
from qadvantage.errors import ConventionViolatedError, HolevoBoundError, OutOfRangeError
from qadvantage.models import (
    AdvantageReport,
    BitPair,
    EncodingDistribution,
    MeasurementDirection,
    OptimalEncodingAudit,
    PostEncodingCorrelations,
    XStateParams,
)
from qadvantage.correlations import (
    classical_information_closed,
    discord_closed,
    mutual_information_closed,
    xstate_entropy,
)
from qadvantage.qcore import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Z,
    DensityMatrix,
    LocalUnitary,
    apply_local,
    average_conditional_entropies,
    von_neumann_entropy,
)
from qadvantage.xstate import canonicalize, concurrence

Search = Literal['full', 'axes']

# Grid of the accessible-information search
ACCESSIBLE_GRID = (91, 180)

# Largest numerical excess of I_c over I_q absorbed before it counts as a bug
HOLEVO_TOLERANCE = 1e-9

_IDENTITY = LocalUnitary(IDENTITY_2)


def pauli_unitary(bits: BitPair) -> LocalUnitary:
    """X^b1 Z^b2: identity, Z, X, XZ for k = 1..4."""
    unitary = IDENTITY_2
    if bits.b1:
        unitary = unitary @ SIGMA_X
    if bits.b2:
        unitary = unitary @ SIGMA_Z
    return LocalUnitary(unitary)


_ENCODING_UNITARIES = [
    np.kron(pauli_unitary(BitPair.from_index(k)).entries, IDENTITY_2) for k in range(1, 5)
]


def encode_one(rho: DensityMatrix, bits: BitPair) -> DensityMatrix:
    """(U_k x 1) rho (U_k x 1)^H."""
    return apply_local(rho, pauli_unitary(bits), _IDENTITY)


def encoded_states(rho: DensityMatrix) -> List[DensityMatrix]:
    """rho_1..rho_4 in k order."""
    return [encode_one(rho, BitPair.from_index(k)) for k in range(1, 5)]


def encode_ensemble(rho: DensityMatrix, distribution: EncodingDistribution) -> DensityMatrix:
    """
    Averaged post-encoding state rho~ = sum_k p_k rho_k.

    Args:
        rho: Shared state before encoding
        distribution: Probabilities of the four Pauli operations

    Returns:
        DensityMatrix rho~
    """
    average = sum(
        p * state.entries
        for p, state in zip(distribution.probabilities, encoded_states(rho))
    )
    return DensityMatrix(average)


def holevo(rho: DensityMatrix, distribution: EncodingDistribution) -> float:
    """I_q = S(rho~) - S(rho); every rho_k shares the spectrum of rho."""
    value = von_neumann_entropy(encode_ensemble(rho, distribution)) - von_neumann_entropy(rho)
    return min(max(value, 0.0), 2.0)


def holevo_ensemble(rho: DensityMatrix, distribution: EncodingDistribution) -> float:
    """S(rho~) - sum_k p_k S(rho_k), evaluated member by member."""
    members = sum(
        p * von_neumann_entropy(state)
        for p, state in zip(distribution.probabilities, encoded_states(rho))
        if p > 0
    )
    return von_neumann_entropy(encode_ensemble(rho, distribution)) - members


def _encoded_arrays(entries: np.ndarray) -> List[np.ndarray]:
    """rho_1..rho_4 as plain arrays, without re-validation."""
    return [unitary @ entries @ unitary.conj().T for unitary in _ENCODING_UNITARIES]


def _accessible_objective(entries: np.ndarray, distribution: EncodingDistribution, measured: str):
    """Vectorized I_c(n) = H(rho~, n) - sum_k p_k H(rho_k, n)."""
    weighted = [
        (p, state)
        for p, state in zip(distribution.probabilities, _encoded_arrays(entries))
        if p > 0
    ]
    average = sum(p * entries for p, entries in weighted)

    def objective(vectors: np.ndarray) -> np.ndarray:
        value = average_conditional_entropies(average, vectors, measured)
        for p, entries in weighted:
            value = value - p * average_conditional_entropies(entries, vectors, measured)
        return value

    return objective


def accessible_info(
    rho: DensityMatrix,
    distribution: EncodingDistribution,
    measured: Literal['s', 'p'] = 's',
    search: Search = 'full'
) -> Tuple[float, MeasurementDirection]:
    """
    Information Bob gets about K from a local projective measurement.

    The three Pauli axes are evaluated exactly; search='full' adds a 91x180
    angle grid with bounded refinement.

    Args:
        rho: Shared state before encoding
        distribution: Encoding probabilities
        measured: Qubit Bob measures first
        search: 'full' or 'axes'

    Returns:
        Tuple of (I_c in bits, maximizing direction)
    """
    objective = _accessible_objective(rho.entries, distribution, measured)
    return _maximize(objective, search)


def _maximize(objective, search: Search) -> Tuple[float, MeasurementDirection]:
    candidates = axis_candidates()

    if search == 'axes':
        values = objective(np.array([c.bloch_vector for c in candidates]))
        best = int(np.argmax(values))
        value, direction = float(values[best]), candidates[best]
    elif search == 'full':
        n_theta, n_phi = ACCESSIBLE_GRID
        value, direction = BlochSearch(n_theta=n_theta, n_phi=n_phi).maximize(objective, candidates)
    else:
        raise ValueError(f"search must be 'full' or 'axes', got {search!r}")

    return max(value, 0.0), direction


def advantage(
    rho: DensityMatrix,
    distribution: EncodingDistribution,
    measured: Literal['s', 'p'] = 's',
    search: Search = 'full'
) -> AdvantageReport:
    """
    Quantum advantage of joint over local decoding and the discord it consumes.

    rho must be a symmetric X-state; the averaged state then is one too, and
    both discords come from the closed forms.

    Args:
        rho: Shared state before encoding
        distribution: Encoding probabilities
        measured: Qubit measured by the local strategy
        search: Accessible-information search mode

    Returns:
        AdvantageReport
    """
    before = canonicalize(rho)
    after = canonicalize(encode_ensemble(rho, distribution))
    i_c, direction = accessible_info(rho, distribution, measured=measured, search=search)
    return _advantage_report(before, after, i_c, direction)


def prepared_advantage(
    r: float,
    distribution: EncodingDistribution,
    measured: Literal['s', 'p'] = 's',
    search: Search = 'axes'
) -> AdvantageReport:
    """
    advantage() for the prepared state, assembled from closed forms.

    Skips state validation, which makes it suitable for large grids.
    """
    if not 0.0 <= r <= 1.0:
        raise OutOfRangeError(f"Reflection coefficient must lie in [0, 1], got {r!r}")
    before = XStateParams(a=r / 2, w=r / 2, z=0.0)
    entries = np.zeros((4, 4), dtype=complex)
    entries[0, 0] = entries[3, 3] = entries[0, 3] = entries[3, 0] = r / 2
    entries[1, 1] = entries[2, 2] = (1.0 - r) / 2
    objective = _accessible_objective(entries, distribution, measured)
    i_c, direction = _maximize(objective, search)
    return _advantage_report(before, averaged_prepared_params(distribution, r), i_c, direction)


def _advantage_report(
    before: XStateParams,
    after: XStateParams,
    i_c: float,
    direction: MeasurementDirection
) -> AdvantageReport:
    i_q = min(max(xstate_entropy(after) - xstate_entropy(before), 0.0), 2.0)
    if i_c > i_q + HOLEVO_TOLERANCE:
        raise HolevoBoundError(f"Accessible information {i_c:.12g} exceeds the Holevo quantity {i_q:.12g}")
    i_c = min(i_c, i_q)
    delta_i = i_q - i_c

    d_before, _ = discord_closed(before)
    d_after, _ = discord_closed(after)
    delta_d = d_before - d_after
    j_after = classical_information_closed(after)

    return AdvantageReport(
        i_q=i_q,
        i_c=i_c,
        delta_i=delta_i,
        d_before=d_before,
        d_after=d_after,
        delta_d=delta_d,
        j_after=j_after,
        lower_slack=delta_i - (delta_d - j_after),
        upper_slack=delta_d - delta_i,
        mutual_information_removed=mutual_information_closed(before) - mutual_information_closed(after),
        optimal_local_measurement=direction,
        measurement_axis=direction.axis_label,
    )


def averaged_prepared_params(distribution: EncodingDistribution, r: float) -> XStateParams:
    """Canonical parameters of rho~ for the prepared state (coherence signs dropped)."""
    p1, p2, p3, p4 = distribution.probabilities
    t = 1.0 - r
    return XStateParams(
        a=min(max(0.5 * ((p1 + p2) * r + (p3 + p4) * t), 0.0), 0.5),
        w=0.5 * abs(p1 - p2) * r,
        z=0.5 * abs(p3 - p4) * r,
    )


def post_encoding_correlations(distribution: EncodingDistribution, r: float) -> PostEncodingCorrelations:
    """
    Concurrence, discord and branch criteria of rho~ for the prepared state.

    C = max[0, (2p1 - 1)R - (p1 + p2)T, (2p3 - 1)R - (p3 + p4)T],
    u = (2(p1 + p3) - 1)R and v = |4a - 1| of the averaged state.

    Raises:
        ConventionViolatedError: If p1 < p2 or p3 < p4
    """
    p1, p2, p3, p4 = distribution.probabilities
    if p1 < p2 or p3 < p4:
        raise ConventionViolatedError(
            f"Positive coherences need p1 >= p2 and p3 >= p4, got {distribution.probabilities}"
        )
    if not 0.0 <= r <= 1.0:
        raise OutOfRangeError(f"Reflection coefficient must lie in [0, 1], got {r!r}")

    params = averaged_prepared_params(distribution, r)
    discord, diagnostics = discord_closed(params)
    return PostEncodingCorrelations(
        concurrence=concurrence(params),
        discord=discord,
        u=diagnostics.u,
        v=diagnostics.v,
    )


def quasi_optimal_distribution(p1: float) -> EncodingDistribution:
    """p1 = p2 in [0, 1/2], p3 = p4 = (1 - 2 p1)/2."""
    if not 0.0 <= p1 <= 0.5:
        raise OutOfRangeError(f"Quasi-optimal p1 must lie in [0, 1/2], got {p1!r}")
    rest = 0.5 - p1
    return EncodingDistribution(p1=p1, p2=p1, p3=rest, p4=rest)


def uniform_distribution() -> EncodingDistribution:
    """All four operations with probability 1/4."""
    return EncodingDistribution(p1=0.25, p2=0.25, p3=0.25, p4=0.25)


def audit_optimal_encoding(distribution: EncodingDistribution, r: float) -> OptimalEncodingAudit:
    """
    Compare 'uniform or R = T' with a direct I(rho~) = 0 test.

    The two disagree for instance at R = T with p1 != p2, where rho~ keeps
    coherences.
    """
    uniform = all(abs(p - 0.25) <= 1e-12 for p in distribution.probabilities)
    balanced = abs(r - (1.0 - r)) <= 1e-12
    information = mutual_information_closed(averaged_prepared_params(distribution, r))
    return OptimalEncodingAudit(
        stated_condition=uniform or balanced,
        mutual_information_after=information,
        consumes_all=information <= 1e-9,
    )
