"""
Pydantic models for state parameters, encodings and reports.

These models provide runtime validation for every value that crosses a module
boundary; matrix-valued types live in qadvantage.qcore.
"""

import math
from datetime import datetime
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from qadvantage.errors import InvalidConfigError, InvalidParamsError

# Absolute slack allowed when checking parameter inequalities built from floats
PARAM_TOLERANCE = 1e-12

Branch = Literal['Z', 'X', 'degenerate']
Qubit = Literal['s', 'p']
Strategy = Literal['joint', 'local']

# Legal domain of every sweepable parameter
PARAMETER_DOMAINS: Dict[str, Tuple[float, float]] = {
    'R': (0.0, 1.0),
    'kappa_h': (0.0, 1.0),
    'kappa_v': (0.0, 1.0),
    'p1': (0.0, 0.5),
}


class MeasurementDirection(BaseModel):
    """Bloch-sphere direction n̂ of a rank-1 projective measurement."""

    theta: float = Field(..., ge=0.0, le=math.pi, description="Polar angle (radians)")
    phi: float = Field(0.0, ge=0.0, lt=2 * math.pi, description="Azimuthal angle (radians)")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> 'MeasurementDirection':
        """
        Build a direction, folding arbitrary angles into the canonical ranges.

        theta is reduced mod 2 pi; a polar angle past pi is reflected back to
        2 pi - theta with the azimuth turned by pi, so the Bloch vector is kept.
        """
        theta = float(theta) % (2 * math.pi)
        phi = float(phi)
        if theta > math.pi:
            theta = 2 * math.pi - theta
            phi += math.pi
        phi %= 2 * math.pi
        if phi >= 2 * math.pi:
            phi = 0.0
        return cls(theta=theta, phi=phi)

    @property
    def bloch_vector(self) -> np.ndarray:
        """Unit vector (x, y, z)."""
        return np.array([
            math.sin(self.theta) * math.cos(self.phi),
            math.sin(self.theta) * math.sin(self.phi),
            math.cos(self.theta),
        ])

    @property
    def axis_label(self) -> Optional[str]:
        """'X', 'Y' or 'Z' when the direction is (anti)parallel to a Pauli axis."""
        vector = self.bloch_vector
        for label, index in (('X', 0), ('Y', 1), ('Z', 2)):
            if abs(abs(vector[index]) - 1.0) < 1e-9:
                return label
        return None


class XStateParams(BaseModel):
    """
    Canonical symmetric X-state parameters (a, w, z) with b = 1/2 - a.

    Direct construction reports a bad triple as pydantic's ValidationError
    (still a ValueError); from_values raises InvalidParamsError instead.
    """

    a: float = Field(..., ge=0.0, le=0.5, description="Diagonal weight of |h0>, |v1>")
    w: float = Field(..., ge=0.0, description="Outer coherence |h0> <-> |v1>")
    z: float = Field(..., ge=0.0, description="Inner coherence |h1> <-> |v0>")

    @classmethod
    def from_values(cls, a: float, w: float, z: float) -> 'XStateParams':
        """Validate (a, w, z), raising InvalidParamsError for a non-state."""
        try:
            return cls(a=a, w=w, z=z)
        except ValidationError as e:
            messages = '; '.join(error['msg'] for error in e.errors())
            raise InvalidParamsError(f"Invalid X-state parameters (a={a}, w={w}, z={z}): {messages}") from e

    @property
    def b(self) -> float:
        """Diagonal weight of |h1>, |v0>."""
        return 0.5 - self.a

    @model_validator(mode='after')
    def check_positivity(self) -> 'XStateParams':
        """w <= a and z <= b are exactly the PSD conditions of the family."""
        if self.w > self.a + PARAM_TOLERANCE:
            raise InvalidParamsError(f"Outer coherence w={self.w} exceeds a={self.a}")
        if self.z > self.b + PARAM_TOLERANCE:
            raise InvalidParamsError(f"Inner coherence z={self.z} exceeds b={self.b}")
        return self


class ApparatusParams(BaseModel):
    """Optical knobs of the X-state source."""

    R: float = Field(..., ge=0.0, le=1.0, description="Beam-splitter reflection coefficient")
    kappa_h: float = Field(..., ge=0.0, le=1.0, description="Horizontal coherence factor")
    kappa_v: float = Field(0.0, ge=0.0, le=1.0, description="Vertical coherence factor")

    @property
    def T(self) -> float:
        """Transmission coefficient."""
        return 1.0 - self.R


class DiscordDiagnostics(BaseModel):
    """Branch criteria of the closed-form discord."""

    u: float = Field(..., ge=0.0, le=1.0, description="2(w + z)")
    v: float = Field(..., ge=0.0, le=1.0, description="|4a - 1|")
    branch: Branch

    @model_validator(mode='after')
    def check_branch(self) -> 'DiscordDiagnostics':
        """Branch must agree with the sign of u - v."""
        if abs(self.u - self.v) <= PARAM_TOLERANCE:
            expected = 'degenerate'
        else:
            expected = 'Z' if self.u < self.v else 'X'
        if self.branch != expected:
            raise ValueError(f"Branch {self.branch} inconsistent with u={self.u}, v={self.v}")
        return self


class CorrelationReport(BaseModel):
    """All correlation measures of one symmetric X-state (bits)."""

    entropy_s: float = Field(..., description="S(rho_s)")
    entropy_p: float = Field(..., description="S(rho_p)")
    entropy_sp: float = Field(..., description="S(rho_sp)")
    mutual_information: float = Field(..., ge=-1e-9, description="I")
    classical_information: float = Field(..., ge=-1e-9, description="J")
    discord: float = Field(..., ge=-1e-9, description="D")
    concurrence: float = Field(..., ge=0.0, le=1.0, description="C")
    entanglement: float = Field(..., ge=0.0, le=1.0, description="Entanglement of formation E")
    diagnostics: DiscordDiagnostics

    @model_validator(mode='after')
    def check_decomposition(self) -> 'CorrelationReport':
        """I = J + D."""
        gap = self.mutual_information - self.classical_information - self.discord
        if abs(gap) > 1e-9:
            raise ValueError(f"I - J - D = {gap:.3e} violates the mutual information split")
        return self


class BitPair(BaseModel):
    """Alice's two classical bits; k = 1..4 <-> (0,0), (0,1), (1,0), (1,1)."""

    b1: int = Field(..., ge=0, le=1)
    b2: int = Field(..., ge=0, le=1)

    @property
    def index(self) -> int:
        """1-based k."""
        return 1 + 2 * self.b1 + self.b2

    @classmethod
    def from_index(cls, k: int) -> 'BitPair':
        """Inverse of index."""
        if k not in (1, 2, 3, 4):
            raise ValueError(f"k must be 1..4, got {k}")
        return cls(b1=(k - 1) // 2, b2=(k - 1) % 2)


class EncodingDistribution(BaseModel):
    """Probabilities of Alice's four Pauli operations."""

    p1: float = Field(..., ge=0.0, le=1.0, description="Identity")
    p2: float = Field(..., ge=0.0, le=1.0, description="sigma_Z")
    p3: float = Field(..., ge=0.0, le=1.0, description="sigma_X")
    p4: float = Field(..., ge=0.0, le=1.0, description="sigma_X sigma_Z")

    @model_validator(mode='after')
    def check_normalised(self) -> 'EncodingDistribution':
        """Probabilities sum to one."""
        total = self.p1 + self.p2 + self.p3 + self.p4
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Encoding probabilities must sum to 1, got {total!r}")
        return self

    @property
    def probabilities(self) -> Tuple[float, float, float, float]:
        """(p1, p2, p3, p4)."""
        return (self.p1, self.p2, self.p3, self.p4)

    @classmethod
    def from_probabilities(cls, values: Sequence[float]) -> 'EncodingDistribution':
        """Build from a length-4 sequence."""
        if len(values) != 4:
            raise ValueError(f"Need four probabilities, got {len(values)}")
        p1, p2, p3, p4 = (float(v) for v in values)
        return cls(p1=p1, p2=p2, p3=p3, p4=p4)


class AdvantageReport(BaseModel):
    """Holevo vs locally accessible information for one encoding (bits)."""

    i_q: float = Field(..., description="Holevo information S(rho~) - S(rho)")
    i_c: float = Field(..., description="Locally accessible information")
    delta_i: float = Field(..., description="Quantum advantage I_q - I_c")
    d_before: float = Field(..., description="Discord of the shared state")
    d_after: float = Field(..., description="Discord of the averaged post-encoding state")
    delta_d: float = Field(..., description="Discord consumption")
    j_after: float = Field(..., description="Classical information of the averaged state")
    lower_slack: float = Field(..., description="delta_I - (delta_D - J_after)")
    upper_slack: float = Field(..., description="delta_D - delta_I")
    mutual_information_removed: float = Field(..., description="I(rho) - I(rho~)")
    optimal_local_measurement: MeasurementDirection
    measurement_axis: Optional[str] = Field(
        None,
        description="Pauli axis of the I_c-optimal measurement, if it is one"
    )

    @model_validator(mode='after')
    def check_advantage(self) -> 'AdvantageReport':
        """delta_I is exactly I_q - I_c."""
        if abs(self.delta_i - (self.i_q - self.i_c)) > 1e-12:
            raise ValueError("delta_i must equal i_q - i_c")
        return self

    @property
    def satisfies_bound(self) -> bool:
        """Discord-consumption sandwich holds to 1e-9."""
        return self.lower_slack >= -1e-9 and self.upper_slack >= -1e-9


class PostEncodingCorrelations(BaseModel):
    """Closed-form correlations of the averaged prepared state."""

    concurrence: float = Field(..., ge=0.0, le=1.0)
    discord: float = Field(..., ge=-1e-9)
    u: float = Field(..., ge=0.0, le=1.0)
    v: float = Field(..., ge=0.0, le=1.0)


class OptimalEncodingAudit(BaseModel):
    """Stated optimal-encoding condition versus the direct I(rho~) = 0 test."""

    stated_condition: bool = Field(..., description="p_k all 1/4, or R = T")
    mutual_information_after: float
    consumes_all: bool = Field(..., description="I(rho~) = 0 within 1e-9")

    @property
    def disagrees(self) -> bool:
        """True when the stated condition and the direct test differ."""
        return self.stated_condition != self.consumes_all


class TransactionConfig(BaseModel):
    """Monte Carlo configuration for a sequence of encode/decode transactions."""

    R: float = Field(..., ge=0.0, le=1.0, description="Reflection coefficient of the prepared state")
    distribution: EncodingDistribution
    shots: int = Field(..., ge=1, description="Number of transactions")
    seed: int = Field(0, ge=0, le=2**64 - 1, description="64-bit seed")
    strategy: Strategy = 'joint'
    m_s: MeasurementDirection = Field(default_factory=lambda: MeasurementDirection(theta=0.0))
    m_p: MeasurementDirection = Field(default_factory=lambda: MeasurementDirection(theta=0.0))
    batch_size: int = Field(10_000, ge=1, description="Shots per independent generator stream")
    workers: int = Field(1, ge=1, description="Concurrent batch workers")

    @property
    def n_batches(self) -> int:
        """Number of shot batches (last one may be short)."""
        return -(-self.shots // self.batch_size)


class BatchTally(BaseModel):
    """Tallies of one independently seeded shot batch."""

    batch_index: int = Field(..., ge=0)
    shots: int = Field(..., ge=1)
    counts: List[List[int]] = Field(..., description="4x4 confusion counts of this batch")
    click_counts: List[int] = Field(..., description="Raw outcome tally of this batch")

    @model_validator(mode='after')
    def check_totals(self) -> 'BatchTally':
        """Tallies add up to the batch size."""
        if sum(map(sum, self.counts)) != self.shots or sum(self.click_counts) != self.shots:
            raise ValueError(f"Batch {self.batch_index} tallies do not add up to {self.shots} shots")
        return self


class EstimationStats(BaseModel):
    """Empirical outcome of a Monte Carlo run."""

    shots: int = Field(..., ge=1)
    strategy: Strategy
    decoder: str = Field(..., description="Decoder label")
    success_rate: float = Field(..., ge=0.0, le=1.0)
    per_bit_accuracy: Tuple[float, float] = Field(..., description="(b1, b2) accuracy")
    empirical_mutual_info: float = Field(..., ge=0.0, le=2.0 + 1e-9, description="I(K; K*) plug-in")
    counts: List[List[int]] = Field(..., description="4x4 confusion matrix counts[k-1][k*-1]")
    click_counts: List[int] = Field(..., description="Tally of the four raw detector outcomes")

    @field_validator('per_bit_accuracy')
    @classmethod
    def validate_rates(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        """Rates are fractions."""
        if not all(0.0 <= rate <= 1.0 for rate in v):
            raise ValueError(f"Bit accuracies must lie in [0, 1], got {v}")
        return v

    @model_validator(mode='after')
    def check_counts(self) -> 'EstimationStats':
        """Confusion matrix is 4x4 and accounts for every shot."""
        if len(self.counts) != 4 or any(len(row) != 4 for row in self.counts):
            raise ValueError("Confusion matrix must be 4x4")
        if sum(map(sum, self.counts)) != self.shots or sum(self.click_counts) != self.shots:
            raise ValueError("Counts must account for every shot")
        return self

    @property
    def drawn_counts(self) -> List[int]:
        """How often each k was drawn (confusion row sums)."""
        return [sum(row) for row in self.counts]


class AxisSpec(BaseModel):
    """One swept parameter."""

    name: str
    start: float
    stop: float
    points: int = Field(..., ge=2)

    @model_validator(mode='after')
    def check_domain(self) -> 'AxisSpec':
        """Range must lie in the parameter's legal domain."""
        if self.name not in PARAMETER_DOMAINS:
            raise InvalidConfigError(
                f"Unknown sweep parameter '{self.name}'. Available: {list(PARAMETER_DOMAINS)}"
            )
        low, high = PARAMETER_DOMAINS[self.name]
        for value in (self.start, self.stop):
            if not low <= value <= high:
                raise InvalidConfigError(
                    f"{self.name} range [{self.start}, {self.stop}] leaves [{low}, {high}]"
                )
        return self

    def values(self) -> np.ndarray:
        """Evenly spaced grid including both end points."""
        return np.linspace(self.start, self.stop, self.points)


class SweepSpec(BaseModel):
    """Two-dimensional parameter sweep."""

    axis1: AxisSpec
    axis2: AxisSpec
    fixed: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode='after')
    def check_fixed(self) -> 'SweepSpec':
        """Fixed bindings are legal and do not shadow the axes."""
        if self.axis1.name == self.axis2.name:
            raise InvalidConfigError("Sweep axes must be distinct parameters")
        for name, value in self.fixed.items():
            if name in (self.axis1.name, self.axis2.name):
                raise InvalidConfigError(f"'{name}' is both swept and fixed")
            if name not in PARAMETER_DOMAINS:
                raise InvalidConfigError(f"Unknown fixed parameter '{name}'")
            low, high = PARAMETER_DOMAINS[name]
            if not low <= value <= high:
                raise InvalidConfigError(f"Fixed {name}={value} leaves [{low}, {high}]")
        return self


class PrepSweepRow(BaseModel):
    """One grid point of the pre-encoding sweep."""

    R: float
    kappa_h: float
    C: float
    E: float
    D: float
    I: float
    J: float
    branch: Branch


class AdvantageSweepRow(BaseModel):
    """One grid point of the quasi-optimal advantage sweep."""

    R: float
    p1: float
    Iq: float
    Ic: float
    dI: float
    dD: float
    J_after: float
    branch: str = Field(..., description="Axis of the I_c-optimal measurement")
    lower_slack: float
    upper_slack: float


class CutRow(BaseModel):
    """One R value of a fixed-p1 cut."""

    R: float
    C: float
    D: float
    dI: float


class CheckResult(BaseModel):
    """Outcome of one verification check."""

    name: str
    passed: bool
    measured: float = Field(..., description="Worst observed deviation or the checked value")
    tolerance: float
    detail: str = ''


class RunLogEntry(BaseModel):
    """Log entry for a single CLI run."""

    timestamp: datetime = Field(default_factory=datetime.now)
    run_id: str
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    summary: Dict[str, Any] = Field(default_factory=dict)
    output: Optional[str] = None
