"""
Symmetric two-qubit X-states and the optical source that prepares them.

A symmetric X-state in the {|h0>, |h1>, |v0>, |v1>} basis reads

    [[a, 0, 0, w],
     [0, b, z, 0],
     [0, z, b, 0],
     [w, 0, 0, a]]      with b = 1/2 - a.

The source mixes a reflected |h0>/|v1> pair and a transmitted |h1>/|v0> pair
whose coherence survives only by the factors kappa_h and kappa_v.
"""

import math
from typing import Tuple, Union

import numpy as np

from qadvantage.errors import (
    InvalidParamsError,
    InvalidTimeError,
    NotSymmetricError,
    NotXStateError,
    OutOfRangeError,
)
from qadvantage.models import ApparatusParams, XStateParams
from qadvantage.qcore import (
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    LocalUnitary,
    binary_entropy,
    bell_state,
)

# Entries outside the X pattern must vanish to this absolute level
X_SHAPE_TOLERANCE = 1e-12

_X_MASK = np.array([
    [1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
], dtype=bool)


def assemble(params: XStateParams) -> DensityMatrix:
    """
    Density matrix of canonical (real, non-negative) X-state parameters.

    Args:
        params: Validated (a, w, z)

    Returns:
        DensityMatrix with diagonal (a, b, b, a) and coherences w, z
    """
    a, b, w, z = params.a, params.b, params.w, params.z
    return DensityMatrix(np.array([
        [a, 0, 0, w],
        [0, b, z, 0],
        [0, z, b, 0],
        [w, 0, 0, a],
    ], dtype=complex))


def apparatus_state(params: ApparatusParams) -> DensityMatrix:
    """
    State emitted by the interferometric source.

    Corner coherences are -+ i R kappa_h / 2 and inner coherences
    -+ i T kappa_v / 2, upper triangle negative.
    """
    r, t = params.R, params.T
    outer = 1j * r * params.kappa_h
    inner = 1j * t * params.kappa_v
    return DensityMatrix(0.5 * np.array([
        [r, 0, 0, -outer],
        [0, t, -inner, 0],
        [0, inner, t, 0],
        [outer, 0, 0, r],
    ], dtype=complex))


def canonical_params(params: ApparatusParams) -> XStateParams:
    """(R/2, R kappa_h/2, T kappa_v/2): the source state after phase alignment."""
    return XStateParams(
        a=params.R / 2,
        w=params.R * params.kappa_h / 2,
        z=params.T * params.kappa_v / 2,
    )


def _check_symmetric_x(rho: DensityMatrix) -> np.ndarray:
    entries = rho.entries
    stray = np.max(np.abs(entries[~_X_MASK]))
    if stray >= X_SHAPE_TOLERANCE:
        raise NotXStateError(f"Entry of magnitude {stray:.3e} lies outside the X pattern")
    diagonal = np.real(np.diag(entries))
    if abs(diagonal[0] - diagonal[3]) > X_SHAPE_TOLERANCE or abs(diagonal[1] - diagonal[2]) > X_SHAPE_TOLERANCE:
        raise NotSymmetricError(f"Diagonal {tuple(np.round(diagonal, 12))} is not of the form (a, b, b, a)")
    return entries


def is_symmetric_x_state(rho: DensityMatrix) -> bool:
    """True when canonicalize would accept rho."""
    try:
        _check_symmetric_x(rho)
    except (NotXStateError, NotSymmetricError):
        return False
    return True


def canonicalize(rho: DensityMatrix) -> XStateParams:
    """
    Canonical parameters of a symmetric X-state with complex coherences.

    Local sigma_Z phases rotate both coherences onto the positive real axis
    without changing any correlation measure, so only their magnitudes are
    kept.

    Args:
        rho: Symmetric X-state

    Returns:
        XStateParams (a, |rho_03|, |rho_12|)

    Raises:
        NotXStateError: If any entry off the X pattern exceeds 1e-12
        NotSymmetricError: If the diagonal is not (a, b, b, a)
    """
    entries = _check_symmetric_x(rho)
    a = min(max(float(entries[0, 0].real), 0.0), 0.5)
    return XStateParams(a=a, w=float(abs(entries[3, 0])), z=float(abs(entries[2, 1])))


def phase_alignment(rho: DensityMatrix) -> Tuple[LocalUnitary, LocalUnitary]:
    """
    Local unitaries exp(i phi_s Z/2) x exp(i phi_p Z/2) that make both
    coherences of a symmetric X-state real and non-negative.

    For the source state this is exp(i pi/4 Z) on polarization and the
    identity on path.
    """
    entries = _check_symmetric_x(rho)
    outer, inner = entries[3, 0], entries[2, 1]
    alpha = float(np.angle(outer))
    beta = float(np.angle(inner))
    # A vanishing coherence has no phase to fix; reuse the other one
    if abs(inner) < X_SHAPE_TOLERANCE:
        beta = alpha
    if abs(outer) < X_SHAPE_TOLERANCE:
        alpha = beta
    phi_s = 0.5 * (alpha + beta)
    phi_p = 0.5 * (alpha - beta)
    return _z_rotation(phi_s), _z_rotation(phi_p)


def _z_rotation(angle: float) -> LocalUnitary:
    """exp(i angle Z / 2)."""
    return LocalUnitary(np.diag(np.exp(0.5j * angle * np.diag(SIGMA_Z).real)))


def kappa_from_delay(tau: float, tau_c: float) -> float:
    """
    Coherence factor exp(-tau / tau_c) left after a path delay.

    Raises:
        InvalidTimeError: If tau < 0 or tau_c <= 0
    """
    if tau < 0:
        raise InvalidTimeError(f"Delay must be non-negative, got {tau!r}")
    if tau_c <= 0:
        raise InvalidTimeError(f"Coherence time must be positive, got {tau_c!r}")
    return math.exp(-tau / tau_c)


def concurrence(params: XStateParams) -> float:
    """C = 2 max(0, w - b, z - a)."""
    return min(1.0, 2.0 * max(0.0, params.w - params.b, params.z - params.a))


def wootters_concurrence(rho: DensityMatrix) -> float:
    """
    Spin-flip concurrence of an arbitrary two-qubit state.

    max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of the
    eigenvalues of rho (Y x Y) rho* (Y x Y).
    """
    flip = np.kron(SIGMA_Y, SIGMA_Y)
    product = rho.entries @ flip @ rho.entries.conj() @ flip
    eigenvalues = np.clip(np.real(np.linalg.eigvals(product)), 0.0, None)
    roots = np.sort(np.sqrt(eigenvalues))[::-1]
    return float(min(1.0, max(0.0, roots[0] - roots[1] - roots[2] - roots[3])))


def entanglement_of_formation(c: float) -> float:
    """
    E(C) = h((1 + sqrt(1 - C^2)) / 2).

    Raises:
        OutOfRangeError: If C is outside [0, 1]
    """
    if not 0.0 <= c <= 1.0:
        raise OutOfRangeError(f"Concurrence must lie in [0, 1], got {c!r}")
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)))


def _check_reflection(r: float) -> None:
    if not 0.0 <= r <= 1.0:
        raise InvalidParamsError(f"Reflection coefficient must lie in [0, 1], got {r!r}")


def prepared_state(r: float) -> DensityMatrix:
    """Real-coherence source state with kappa_h = 1 and kappa_v = 0."""
    _check_reflection(r)
    return assemble(XStateParams(a=r / 2, w=r / 2, z=0.0))


def werner_state(q: float) -> DensityMatrix:
    """(1 - q) 1/4 + q |psi+><psi+|, q in [0, 1]."""
    if not 0.0 <= q <= 1.0:
        raise OutOfRangeError(f"Werner weight must lie in [0, 1], got {q!r}")
    return DensityMatrix((1 - q) * np.eye(4, dtype=complex) / 4 + q * bell_state().entries)


def werner_like_state(q: float) -> DensityMatrix:
    """
    (1 + q) 1/4 - q |phi-><phi-| with |phi-> = (|h0> - |v1>)/sqrt(2), q in [0, 1/3].

    Canonical parameters (a, w, z) = ((1 - q)/4, q/2, 0).
    """
    if not 0.0 <= q <= 1.0 / 3.0 + 1e-15:
        raise OutOfRangeError(f"Werner-like weight must lie in [0, 1/3], got {q!r}")
    return assemble(XStateParams(a=(1 - q) / 4, w=q / 2, z=0.0))


def _check_kappa(kappa: float) -> None:
    if not 0.0 <= kappa <= 1.0:
        raise OutOfRangeError(f"Coherence factor must lie in [0, 1], got {kappa!r}")


def separable_boundary(kappa_h: float) -> float:
    """R at which kappa_h R = T, so concurrence vanishes for R below it."""
    _check_kappa(kappa_h)
    return 1.0 / (1.0 + kappa_h)


def werner_boundary(kappa_h: float) -> float:
    """R = 1/(2 - kappa_h)."""
    _check_kappa(kappa_h)
    return 1.0 / (2.0 - kappa_h)


def werner_like_boundary(kappa_h: float) -> float:
    """R = 1/(2 + kappa_h)."""
    _check_kappa(kappa_h)
    return 1.0 / (2.0 + kappa_h)


def random_xstate_params(rng: np.random.Generator) -> XStateParams:
    """Uniform a in [0, 1/2], then w in [0, a] and z in [0, b]."""
    a = float(rng.uniform(0.0, 0.5))
    return XStateParams(a=a, w=float(rng.uniform(0.0, a)), z=float(rng.uniform(0.0, 0.5 - a)))


XStateLike = Union[XStateParams, ApparatusParams]


def as_xstate_params(params: XStateLike) -> XStateParams:
    """Canonical parameters of either parameterization."""
    if isinstance(params, ApparatusParams):
        return canonical_params(params)
    if isinstance(params, XStateParams):
        return params
    raise InvalidParamsError(f"Expected XStateParams or ApparatusParams, got {type(params).__name__}")
