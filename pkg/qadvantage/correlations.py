"""
Mutual information, classical correlation and quantum discord.

Closed forms hold for symmetric X-states: the optimal local measurement is
either sigma_Z or sigma_X, selected by comparing u = 2(w + z) with
v = |4a - 1|. discord_brute searches all projective measurements and serves as
an independent oracle.
"""

from typing import Literal, Tuple, Union

from qadvantage.bloch_search import BlochSearch, axis_candidates
from qadvantage.errors import InvalidParamsError
from qadvantage.models import (
    PARAM_TOLERANCE,
    ApparatusParams,
    Branch,
    CorrelationReport,
    DiscordDiagnostics,
    MeasurementDirection,
    XStateParams,
)
from qadvantage.qcore import (
    DensityMatrix,
    average_conditional_entropies,
    binary_entropy,
    partial_trace,
    spectrum_entropy,
    von_neumann_entropy,
)
from qadvantage.xstate import (
    as_xstate_params,
    canonicalize,
    concurrence,
    entanglement_of_formation,
)

Side = Literal['s', 'p']

_OTHER: dict = {'s': 'p', 'p': 's'}


def mutual_information(rho: DensityMatrix) -> float:
    """I = S(rho_s) + S(rho_p) - S(rho_sp)."""
    total = (
        von_neumann_entropy(partial_trace(rho, 's'))
        + von_neumann_entropy(partial_trace(rho, 'p'))
        - von_neumann_entropy(rho)
    )
    return min(max(total, 0.0), 2.0)


def avg_conditional_entropy(
    rho: DensityMatrix,
    direction: MeasurementDirection,
    measured: Side = 's'
) -> float:
    """
    Outcome-averaged entropy of the unmeasured qubit.

    Args:
        rho: Two-qubit state
        direction: Projective measurement axis
        measured: Qubit that is measured

    Returns:
        sum_+- p_+- S(rho_other|+-) in bits
    """
    return float(average_conditional_entropies(rho.entries, direction.bloch_vector, measured)[0])


def branch_criteria(params: XStateParams) -> Tuple[float, float]:
    """(u, v) = (2(w + z), |4a - 1|), clipped to [0, 1]."""
    u = min(max(2.0 * (params.w + params.z), 0.0), 1.0)
    v = min(abs(4.0 * params.a - 1.0), 1.0)
    return u, v


def classify_branch(u: float, v: float) -> Branch:
    """Z when u < v, X when u > v, degenerate within 1e-12."""
    if abs(u - v) <= PARAM_TOLERANCE:
        return 'degenerate'
    return 'Z' if u < v else 'X'


def xstate_entropy(params: XStateParams) -> float:
    """S(rho) from the eigenvalues a +- w and b +- z."""
    a, b, w, z = params.a, params.b, params.w, params.z
    return spectrum_entropy([max(a + w, 0.0), max(a - w, 0.0), max(b + z, 0.0), max(b - z, 0.0)])


def _axis_conditional_entropies(params: XStateParams) -> Tuple[float, float]:
    """Average conditional entropies for sigma_Z and sigma_X measurements."""
    u, v = branch_criteria(params)
    return binary_entropy(0.5 * (1.0 + v)), binary_entropy(0.5 * (1.0 + u))


def discord_closed(params: XStateParams) -> Tuple[float, DiscordDiagnostics]:
    """
    Quantum discord of a symmetric X-state.

    D = 1 - S(rho) + min(S_Z, S_X); the degenerate branch uses S_Z, which
    equals S_X there.

    Args:
        params: Canonical X-state parameters

    Returns:
        Tuple of (discord in bits, branch diagnostics)
    """
    if not isinstance(params, XStateParams):
        raise InvalidParamsError(f"Expected XStateParams, got {type(params).__name__}")

    u, v = branch_criteria(params)
    branch = classify_branch(u, v)
    entropy_z, entropy_x = _axis_conditional_entropies(params)
    conditional = entropy_x if branch == 'X' else entropy_z

    discord = max(0.0, 1.0 - xstate_entropy(params) + conditional)
    return discord, DiscordDiagnostics(u=u, v=v, branch=branch)


def classical_information_closed(params: XStateParams) -> float:
    """J = 1 - min(S_Z, S_X); the marginals are maximally mixed."""
    if not isinstance(params, XStateParams):
        raise InvalidParamsError(f"Expected XStateParams, got {type(params).__name__}")
    return max(0.0, 1.0 - min(_axis_conditional_entropies(params)))


def mutual_information_closed(params: XStateParams) -> float:
    """I = 2 - S(rho)."""
    return min(max(2.0 - xstate_entropy(params), 0.0), 2.0)


def discord_brute(
    rho: DensityMatrix,
    n_theta: int = 181,
    n_phi: int = 360,
    measured: Side = 's'
) -> Tuple[float, MeasurementDirection]:
    """
    Discord by direct minimization over projective measurements.

    Works for any two-qubit state. The three Pauli axes are always among the
    evaluated candidates.

    Args:
        rho: Two-qubit state
        n_theta: Polar grid resolution
        n_phi: Azimuthal grid resolution
        measured: Qubit that is measured

    Returns:
        Tuple of (discord in bits, minimizing direction)
    """
    search = BlochSearch(n_theta=n_theta, n_phi=n_phi)
    entries = rho.entries
    minimum, direction = search.minimize(
        lambda vectors: average_conditional_entropies(entries, vectors, measured),
        candidates=axis_candidates(),
    )
    unmeasured = von_neumann_entropy(partial_trace(rho, _OTHER[measured]))
    return unmeasured - von_neumann_entropy(rho) + minimum, direction


def optimal_measurement_region(params: Union[ApparatusParams, XStateParams]) -> Branch:
    """
    Which local measurement minimizes the conditional entropy.

    For the source parameterization u = kappa_h R + kappa_v T and v = |2R - 1|.
    """
    return classify_branch(*branch_criteria(as_xstate_params(params)))


def correlations_from_params(params: XStateParams) -> CorrelationReport:
    """CorrelationReport built from closed forms only."""
    discord, diagnostics = discord_closed(params)
    c = concurrence(params)
    return CorrelationReport(
        entropy_s=1.0,
        entropy_p=1.0,
        entropy_sp=xstate_entropy(params),
        mutual_information=mutual_information_closed(params),
        classical_information=classical_information_closed(params),
        discord=discord,
        concurrence=c,
        entanglement=entanglement_of_formation(c),
        diagnostics=diagnostics,
    )


def correlation_report(rho: DensityMatrix) -> CorrelationReport:
    """
    All correlation measures of a symmetric X-state.

    Entropies come from the spectrum of rho itself; J and D from the closed
    forms of its canonical parameters.

    Raises:
        NotXStateError: If rho is not an X-state
        NotSymmetricError: If its diagonal is not (a, b, b, a)
    """
    params = canonicalize(rho)
    entropy_s = von_neumann_entropy(partial_trace(rho, 's'))
    entropy_p = von_neumann_entropy(partial_trace(rho, 'p'))
    entropy_sp = von_neumann_entropy(rho)
    discord, diagnostics = discord_closed(params)
    c = concurrence(params)
    return CorrelationReport(
        entropy_s=entropy_s,
        entropy_p=entropy_p,
        entropy_sp=entropy_sp,
        mutual_information=max(0.0, entropy_s + entropy_p - entropy_sp),
        classical_information=classical_information_closed(params),
        discord=discord,
        concurrence=c,
        entanglement=entanglement_of_formation(c),
        diagnostics=diagnostics,
    )
