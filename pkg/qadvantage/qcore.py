"""
Fixed-size matrix algebra and entropy primitives for one and two qubits.

Basis convention for two-qubit operators: {|h0>, |h1>, |v0>, |v1>}, i.e.
polarization (qubit s) is the first tensor factor and path (qubit p) the
second. All entropies are in bits.
"""

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence, Tuple, Union

import numpy as np

from qadvantage.errors import (
    DegenerateOutcomeError,
    InvalidStateError,
    NonHermitianError,
    NonUnitaryError,
    OutOfRangeError,
)
from qadvantage.models import MeasurementDirection

HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
UNITARY_TOLERANCE = 1e-12
OUTCOME_TOLERANCE = 1e-12

JACOBI_TOLERANCE = 1e-13
JACOBI_MAX_SWEEPS = 100

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
# Polarization controls path: |v0> <-> |v1>
CNOT = np.array([
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
], dtype=complex)

Z_AXIS = MeasurementDirection(theta=0.0, phi=0.0)
X_AXIS = MeasurementDirection(theta=math.pi / 2, phi=0.0)
Y_AXIS = MeasurementDirection(theta=math.pi / 2, phi=math.pi / 2)
PAULI_AXES = {'X': X_AXIS, 'Y': Y_AXIS, 'Z': Z_AXIS}


def _check_hermitian(matrix: np.ndarray) -> None:
    deviation = np.max(np.abs(matrix - matrix.conj().T))
    if deviation > HERMITIAN_TOLERANCE:
        raise NonHermitianError(f"Matrix is not Hermitian (max |M - M^H| = {deviation:.3e})")


@dataclass(frozen=True, eq=False)
class _Operator:
    """Immutable complex matrix of a fixed dimension."""

    entries: np.ndarray
    dimension: int = field(init=False, default=0, repr=False)

    def __post_init__(self) -> None:
        array = np.array(self.entries, dtype=complex)
        if array.shape != (self.dimension, self.dimension):
            raise ValueError(
                f"{type(self).__name__} needs a {self.dimension}x{self.dimension} matrix, "
                f"got shape {array.shape}"
            )
        array.setflags(write=False)
        object.__setattr__(self, 'entries', array)
        self._validate()

    def _validate(self) -> None:
        pass

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True, eq=False)
class _State(_Operator):
    """Hermitian, unit-trace, positive semidefinite operator."""

    def _validate(self) -> None:
        _check_hermitian(self.entries)
        trace = np.trace(self.entries).real
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise InvalidStateError(f"State trace must be 1, got {trace!r}")
        smallest = hermitian_eigenvalues(self.entries)[-1]
        if smallest < -PSD_TOLERANCE:
            raise InvalidStateError(f"State is not positive semidefinite (eigenvalue {smallest:.3e})")

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return hermitian_eigenvalues(self.entries)


@dataclass(frozen=True, eq=False)
class DensityMatrix(_State):
    """Two-qubit state of polarization (s) and path (p)."""

    dimension: int = field(init=False, default=4, repr=False)


@dataclass(frozen=True, eq=False)
class QubitState(_State):
    """One-qubit state."""

    dimension: int = field(init=False, default=2, repr=False)

    @property
    def bloch_vector(self) -> np.ndarray:
        """(x, y, z) with rho = (1 + r.sigma) / 2."""
        return np.array([np.trace(self.entries @ pauli).real for pauli in PAULIS])


@dataclass(frozen=True, eq=False)
class LocalUnitary(_Operator):
    """One-qubit unitary."""

    dimension: int = field(init=False, default=2, repr=False)

    def _validate(self) -> None:
        deviation = np.max(np.abs(self.entries @ self.entries.conj().T - IDENTITY_2))
        if deviation > UNITARY_TOLERANCE:
            raise NonUnitaryError(f"Operator is not unitary (max |UU^H - 1| = {deviation:.3e})")

    @property
    def dagger(self) -> np.ndarray:
        """Conjugate transpose."""
        return self.entries.conj().T


AnyState = Union[DensityMatrix, QubitState]
MatrixLike = Union[np.ndarray, DensityMatrix, QubitState]


def bell_state() -> DensityMatrix:
    """|psi+><psi+| with |psi+> = (|h0> + |v1>)/sqrt(2)."""
    vector = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return DensityMatrix(np.outer(vector, vector.conj()))


def maximally_mixed() -> DensityMatrix:
    """1/4."""
    return DensityMatrix(np.eye(4, dtype=complex) / 4)


def _jacobi_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Cyclic complex Jacobi rotations until the off-diagonal norm vanishes."""
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    off_diagonal = ~np.eye(n, dtype=bool)

    for _ in range(JACOBI_MAX_SWEEPS):
        if np.sqrt(np.sum(np.abs(a[off_diagonal]) ** 2)) < JACOBI_TOLERANCE:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude == 0.0:
                    continue
                theta = 0.5 * math.atan2(2.0 * magnitude, a[p, p].real - a[q, q].real)
                c, s = math.cos(theta), math.sin(theta)
                phase = np.conj(apq / magnitude)
                rotation = np.eye(n, dtype=complex)
                rotation[p, p] = c
                rotation[p, q] = -s
                rotation[q, p] = s * phase
                rotation[q, q] = c * phase
                a = rotation.conj().T @ a @ rotation

    return np.real(np.diag(a))


def hermitian_eigenvalues(matrix: MatrixLike) -> np.ndarray:
    """
    Eigenvalues of a 2x2 or 4x4 Hermitian matrix.

    2x2 inputs use the closed quadratic form; 4x4 inputs use cyclic Jacobi
    rotations.

    Args:
        matrix: Hermitian matrix or state

    Returns:
        Real eigenvalues sorted in descending order

    Raises:
        NonHermitianError: If the input is not Hermitian within 1e-12
    """
    array = np.asarray(matrix, dtype=complex)
    _check_hermitian(array)

    if array.shape == (2, 2):
        mean = 0.5 * (array[0, 0].real + array[1, 1].real)
        radius = math.hypot(0.5 * (array[0, 0].real - array[1, 1].real), abs(array[0, 1]))
        return np.array([mean + radius, mean - radius])
    if array.shape == (4, 4):
        return np.sort(_jacobi_eigenvalues(array))[::-1]
    raise ValueError(f"Only 2x2 and 4x4 matrices are supported, got shape {array.shape}")


def spectrum_entropy(eigenvalues: Sequence[float]) -> float:
    """-sum(l log2 l) with 0 log 0 := 0; values in [-1e-10, 0) count as 0."""
    values = np.asarray(eigenvalues, dtype=float)
    if np.any(values < -PSD_TOLERANCE):
        raise InvalidStateError(f"Negative eigenvalue {values.min():.3e} in spectrum")
    positive = values[values > 0.0]
    return float(max(0.0, -np.sum(positive * np.log2(positive))))


def von_neumann_entropy(state: AnyState) -> float:
    """
    Von Neumann entropy in bits.

    Args:
        state: DensityMatrix or QubitState

    Returns:
        S in [0, 2] for two qubits, [0, 1] for one qubit
    """
    if not isinstance(state, (DensityMatrix, QubitState)):
        raise InvalidStateError(f"Expected a DensityMatrix or QubitState, got {type(state).__name__}")
    return spectrum_entropy(state.eigenvalues)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x)."""
    if not -PSD_TOLERANCE <= x <= 1.0 + PSD_TOLERANCE:
        raise OutOfRangeError(f"Probability must lie in [0, 1], got {x!r}")
    x = min(max(x, 0.0), 1.0)
    return spectrum_entropy((x, 1.0 - x))


def partial_trace(rho: DensityMatrix, keep: Literal['s', 'p']) -> QubitState:
    """
    Reduced state of one qubit.

    Args:
        rho: Two-qubit state
        keep: 's' (polarization) or 'p' (path)

    Returns:
        QubitState of the kept qubit
    """
    tensor = rho.entries.reshape(2, 2, 2, 2)
    if keep == 's':
        reduced = np.einsum('ijkj->ik', tensor)
    elif keep == 'p':
        reduced = np.einsum('ijil->jl', tensor)
    else:
        raise ValueError(f"keep must be 's' or 'p', got {keep!r}")
    return QubitState(reduced)


def apply_local(rho: DensityMatrix, u_s: LocalUnitary, u_p: LocalUnitary) -> DensityMatrix:
    """(U_s x U_p) rho (U_s x U_p)^H."""
    if not isinstance(u_s, LocalUnitary) or not isinstance(u_p, LocalUnitary):
        raise NonUnitaryError("apply_local needs LocalUnitary factors")
    unitary = np.kron(u_s.entries, u_p.entries)
    return DensityMatrix(unitary @ rho.entries @ unitary.conj().T)


def apply_unitary(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    """U rho U^H for a two-qubit unitary."""
    return DensityMatrix(unitary @ rho.entries @ unitary.conj().T)


def bloch_projector(direction: MeasurementDirection, outcome: int) -> np.ndarray:
    """Pi_+- = (1 +- n.sigma)/2."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome}")
    n = direction.bloch_vector
    return 0.5 * (IDENTITY_2 + outcome * sum(c * pauli for c, pauli in zip(n, PAULIS)))


def conditional_state(
    rho: DensityMatrix,
    direction: MeasurementDirection,
    outcome: int,
    measured: Literal['s', 'p'] = 's'
) -> Tuple[float, QubitState]:
    """
    Post-measurement state of the unmeasured qubit.

    Args:
        rho: Two-qubit state
        direction: Measurement axis on the measured qubit
        outcome: +1 or -1
        measured: Which qubit is measured ('s' by default)

    Returns:
        Tuple of (outcome probability, conditional state)

    Raises:
        DegenerateOutcomeError: If the outcome probability is below 1e-12
    """
    projector = bloch_projector(direction, outcome)
    if measured == 's':
        operator = np.kron(projector, IDENTITY_2)
        other = 'p'
    elif measured == 'p':
        operator = np.kron(IDENTITY_2, projector)
        other = 's'
    else:
        raise ValueError(f"measured must be 's' or 'p', got {measured!r}")

    branch = operator @ rho.entries @ operator
    tensor = branch.reshape(2, 2, 2, 2)
    reduced = np.einsum('ijkj->ik', tensor) if other == 's' else np.einsum('ijil->jl', tensor)
    probability = float(np.trace(reduced).real)
    if probability < OUTCOME_TOLERANCE:
        raise DegenerateOutcomeError(
            f"Outcome {outcome:+d} along theta={direction.theta:.6f}, phi={direction.phi:.6f} "
            f"has probability {probability:.3e}"
        )
    return probability, QubitState(reduced / probability)


def _conditioning_blocks(rho: np.ndarray, measured: Literal['s', 'p']) -> np.ndarray:
    """[M_0, M_x, M_y, M_z] with M_i = Tr_measured((sigma_i on measured) rho)."""
    tensor = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    blocks = []
    for sigma in (IDENTITY_2,) + PAULIS:
        if measured == 's':
            blocks.append(np.einsum('ki,ijkl->jl', sigma, tensor))
        elif measured == 'p':
            blocks.append(np.einsum('lj,ijkl->ik', sigma, tensor))
        else:
            raise ValueError(f"measured must be 's' or 'p', got {measured!r}")
    return np.array(blocks)


def average_conditional_entropies(
    rho: MatrixLike,
    vectors: np.ndarray,
    measured: Literal['s', 'p'] = 's'
) -> np.ndarray:
    """
    sum_+- p_+- S(rho_|+-) for many measurement directions at once.

    Outcomes with probability below 1e-12 contribute zero.

    Args:
        rho: Two-qubit state
        vectors: (N, 3) array of unit Bloch vectors
        measured: Which qubit is measured

    Returns:
        (N,) array of average conditional entropies in bits
    """
    blocks = _conditioning_blocks(np.asarray(rho), measured)
    vectors = np.atleast_2d(vectors)
    correlated = np.einsum('ni,ijk->njk', vectors, blocks[1:])

    total = np.zeros(len(vectors))
    for sign in (1.0, -1.0):
        branch = 0.5 * (blocks[0][None, :, :] + sign * correlated)
        alpha = branch[:, 0, 0].real
        delta = branch[:, 1, 1].real
        mean = 0.5 * (alpha + delta)
        radius = np.hypot(0.5 * (alpha - delta), np.abs(branch[:, 0, 1]))
        probability = alpha + delta
        for eigenvalue in (mean + radius, mean - radius):
            safe = np.where(eigenvalue > 0.0, eigenvalue, 1.0)
            total -= np.where(eigenvalue > 0.0, eigenvalue * np.log2(safe), 0.0)
        safe = np.where(probability > OUTCOME_TOLERANCE, probability, 1.0)
        total += np.where(probability > OUTCOME_TOLERANCE, probability * np.log2(safe), 0.0)
    return np.maximum(total, 0.0)
