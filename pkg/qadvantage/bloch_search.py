"""
Global search over projective-measurement directions on the Bloch sphere.

The objective is evaluated on a uniform (theta, phi) grid plus any explicit
candidates, and the best point is then polished by alternating bounded scalar
minimizations along each angle.
"""

import math
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from qadvantage.models import MeasurementDirection
from qadvantage.qcore import PAULI_AXES

# Objective over an (N, 3) array of unit Bloch vectors
VectorObjective = Callable[[np.ndarray], np.ndarray]

ANGLE_TOLERANCE = 1e-6
REFINEMENT_ROUNDS = 4
# Smaller gains are rounding noise and must not move an exact candidate
IMPROVEMENT_THRESHOLD = 1e-14


def angles_to_vectors(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Unit Bloch vectors for broadcastable angle arrays, shape (..., 3)."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    sin_theta = np.sin(theta)
    return np.stack([sin_theta * np.cos(phi), sin_theta * np.sin(phi), np.cos(theta)], axis=-1)


def sphere_grid(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Uniform angle grid with theta end points included and phi periodic.

    Returns:
        Tuple of (angles array of shape (N, 2), vectors array of shape (N, 3))
    """
    if n_theta < 2 or n_phi < 1:
        raise ValueError(f"Grid needs n_theta >= 2 and n_phi >= 1, got {n_theta}x{n_phi}")
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.arange(n_phi) * (2 * math.pi / n_phi)
    theta_mesh, phi_mesh = np.meshgrid(thetas, phis, indexing='ij')
    angles = np.column_stack([theta_mesh.ravel(), phi_mesh.ravel()])
    return angles, angles_to_vectors(angles[:, 0], angles[:, 1])


class BlochSearch:
    """
    Grid-plus-refinement optimizer for a function of a measurement direction.

    Example:
        >>> search = BlochSearch(n_theta=181, n_phi=360)
        >>> value, direction = search.minimize(objective)
    """

    def __init__(
        self,
        n_theta: int = 181,
        n_phi: int = 360,
        xatol: float = ANGLE_TOLERANCE,
        refine: bool = True
    ):
        """
        Initialize search.

        Args:
            n_theta: Polar grid points over [0, pi]
            n_phi: Azimuthal grid points over [0, 2 pi)
            xatol: Angle tolerance of the bounded refinement (radians)
            refine: Whether to polish the best grid point
        """
        self.n_theta = n_theta
        self.n_phi = n_phi
        self.xatol = xatol
        self.refine = refine
        self._angles, self._vectors = sphere_grid(n_theta, n_phi)
        self._theta_step = math.pi / (n_theta - 1)
        self._phi_step = 2 * math.pi / n_phi

    def minimize(
        self,
        objective: VectorObjective,
        candidates: Iterable[MeasurementDirection] = ()
    ) -> Tuple[float, MeasurementDirection]:
        """
        Smallest objective value over the sphere.

        Args:
            objective: Vectorized function of unit Bloch vectors
            candidates: Directions evaluated exactly in addition to the grid

        Returns:
            Tuple of (minimum value, minimizing direction)
        """
        candidates = list(candidates)
        angles = self._angles
        vectors = self._vectors
        if candidates:
            angles = np.vstack([[[c.theta, c.phi] for c in candidates], angles])
            vectors = np.vstack([[c.bloch_vector for c in candidates], vectors])

        values = objective(vectors)
        best = int(np.argmin(values))
        best_value = float(values[best])
        theta, phi = (float(x) for x in angles[best])

        if self.refine:
            best_value, theta, phi = self._polish(objective, best_value, theta, phi)

        return best_value, MeasurementDirection.from_angles(theta, phi)

    def maximize(
        self,
        objective: VectorObjective,
        candidates: Iterable[MeasurementDirection] = ()
    ) -> Tuple[float, MeasurementDirection]:
        """Largest objective value over the sphere."""
        value, direction = self.minimize(lambda v: -objective(v), candidates)
        return -value, direction

    def _polish(
        self,
        objective: VectorObjective,
        value: float,
        theta: float,
        phi: float
    ) -> Tuple[float, float, float]:
        """Alternate bounded line searches in theta and phi, keeping only improvements."""

        def at(t: float, p: float) -> float:
            return float(objective(angles_to_vectors(np.array([t]), np.array([p])))[0])

        for _ in range(REFINEMENT_ROUNDS):
            start = value

            low = max(0.0, theta - self._theta_step)
            high = min(math.pi, theta + self._theta_step)
            result = minimize_scalar(
                lambda t: at(t, phi), bounds=(low, high), method='bounded',
                options={'xatol': self.xatol}
            )
            if result.fun < value - IMPROVEMENT_THRESHOLD:
                value, theta = float(result.fun), float(result.x)

            # phi is meaningless at the poles
            if 0.0 < theta < math.pi:
                result = minimize_scalar(
                    lambda p: at(theta, p),
                    bounds=(phi - self._phi_step, phi + self._phi_step), method='bounded',
                    options={'xatol': self.xatol}
                )
                if result.fun < value - IMPROVEMENT_THRESHOLD:
                    value, phi = float(result.fun), float(result.x)

            if start - value <= IMPROVEMENT_THRESHOLD:
                break

        return value, theta, phi


def axis_candidates(labels: Optional[Iterable[str]] = None) -> list[MeasurementDirection]:
    """Pauli-axis directions, x, y and z by default."""
    labels = list(labels) if labels is not None else ['X', 'Y', 'Z']
    return [PAULI_AXES[label] for label in labels]
