"""
Exception hierarchy for the quantum advantage toolkit.

Every error is a ValueError so callers (and the CLI) can treat bad input
uniformly; the subclasses name the exact invariant that failed.
"""


class QuantumAdvantageError(ValueError):
    """Base class for all domain errors raised by qadvantage."""


class NonHermitianError(QuantumAdvantageError):
    """Matrix is not Hermitian within tolerance."""


class InvalidStateError(QuantumAdvantageError):
    """Matrix violates unit trace or positivity."""


class OutOfRangeError(QuantumAdvantageError):
    """Scalar argument outside its admissible interval."""


class NonUnitaryError(QuantumAdvantageError):
    """Operator is not unitary within tolerance."""


class DegenerateOutcomeError(QuantumAdvantageError):
    """Measurement outcome has (numerically) zero probability."""


class InvalidParamsError(QuantumAdvantageError):
    """State parameters do not describe a valid density matrix."""


class NotXStateError(QuantumAdvantageError):
    """Matrix has support outside the diagonal and anti-diagonal."""


class NotSymmetricError(QuantumAdvantageError):
    """X-state diagonal is not of the form (a, b, b, a)."""


class InvalidTimeError(QuantumAdvantageError):
    """Delay or coherence time outside its domain."""


class ConventionViolatedError(QuantumAdvantageError):
    """Encoding distribution breaks the positive-coherence convention."""


class InvalidConfigError(QuantumAdvantageError):
    """Monte Carlo or sweep configuration is unusable."""


class HolevoBoundError(QuantumAdvantageError):
    """Locally accessible information exceeds the Holevo quantity."""
