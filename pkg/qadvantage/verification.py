"""
Verification suite for the correlation and advantage calculations.

Each check reproduces one known extremum, identity or oracle agreement and
returns a CheckResult with the worst observed deviation and its tolerance.
All sampling is seeded, so two runs produce identical reports.
"""

import math
from typing import Callable, Dict, List, Optional

import numpy as np
from rich.console import Console

from qadvantage.correlations import correlation_report, discord_brute, discord_closed
from qadvantage.models import (
    ApparatusParams,
    CheckResult,
    EncodingDistribution,
    TransactionConfig,
)
from qadvantage.protocol import (
    advantage,
    encode_ensemble,
    holevo,
    post_encoding_correlations,
    prepared_advantage,
    quasi_optimal_distribution,
    uniform_distribution,
)
from qadvantage.statistics import TransactionAnalyzer
from qadvantage.sweeps import (
    SweepRunner,
    default_prep_spec,
    locate_cut_maximum,
    locate_unentangled_discord_maximum,
)
from qadvantage.transactions import run_transactions
from qadvantage.xstate import (
    apparatus_state,
    assemble,
    concurrence,
    prepared_state,
    random_xstate_params,
    wootters_concurrence,
)

ONE_PAULI_ADVANTAGE = 3.0 * (2.0 - math.log2(3.0)) / 4.0
DEFAULT_SEED = 20240607


class VerificationSuite:
    """
    Runs the acceptance checks.

    Sample sizes default to the full suite and can be reduced for quick runs.

    Example:
        >>> suite = VerificationSuite()
        >>> results = suite.run()
        >>> suite.all_passed(results)
    """

    def __init__(
        self,
        seed: int = DEFAULT_SEED,
        grid_points: int = 201,
        identity_points: int = 50,
        bound_samples: int = 1000,
        oracle_samples: int = 200,
        consumption_samples: int = 100,
        joint_shots: int = 10_000,
        local_shots: int = 100_000,
        vanishing_points: int = 101,
        console: Optional[Console] = None
    ):
        """
        Initialize verification suite.

        Args:
            seed: Root seed of every sampled check
            grid_points: Points per axis of the source-state sweep
            identity_points: R values of the optimal-encoding identity
            bound_samples: Random (R, distribution) pairs for the discord bound
            oracle_samples: Random X-states for the oracle comparisons
            consumption_samples: Random quasi-optimal encodings
            joint_shots: Shots of the joint superdense run
            local_shots: Shots of the local superdense run
            vanishing_points: Points along each vanishing line
            console: Console for sweep progress (silent by default)
        """
        self.seed = seed
        self.grid_points = grid_points
        self.identity_points = identity_points
        self.bound_samples = bound_samples
        self.oracle_samples = oracle_samples
        self.consumption_samples = consumption_samples
        self.joint_shots = joint_shots
        self.local_shots = local_shots
        self.vanishing_points = vanishing_points
        self.sweeps = SweepRunner(console=console or Console(stderr=True, quiet=True), search='full')

    def _rng(self, stream: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])

    @property
    def checks(self) -> Dict[str, Callable[[], List[CheckResult]]]:
        """Check groups in report order."""
        return {
            'bell_extremum': self.check_bell_extremum,
            'discord_without_entanglement': self.check_discord_without_entanglement,
            'optimal_encoding_identity': self.check_optimal_encoding_identity,
            'one_pauli_encoding': self.check_one_pauli_encoding,
            'consumption_bound': self.check_consumption_bound,
            'oracles': self.check_oracles,
            'quasi_optimal_consumption': self.check_quasi_optimal_consumption,
            'superdense_limit': self.check_superdense_limit,
            'vanishing_cases': self.check_vanishing_cases,
        }

    def run(self, only: Optional[List[str]] = None) -> List[CheckResult]:
        """
        Run all (or the named) check groups.

        Raises:
            KeyError: If a requested group does not exist
        """
        names = only or list(self.checks)
        results: List[CheckResult] = []
        for name in names:
            if name not in self.checks:
                raise KeyError(f"Unknown check '{name}'. Available: {list(self.checks)}")
            results.extend(self.checks[name]())
        return results

    @staticmethod
    def all_passed(results: List[CheckResult]) -> bool:
        """True when every check passed."""
        return all(r.passed for r in results)

    def check_bell_extremum(self) -> List[CheckResult]:
        """C = E = D = 1 and I = 2 at R = kappa_h = 1."""
        report = correlation_report(apparatus_state(ApparatusParams(R=1.0, kappa_h=1.0, kappa_v=0.0)))
        deviation = max(
            abs(report.concurrence - 1.0),
            abs(report.entanglement - 1.0),
            abs(report.discord - 1.0),
            abs(report.mutual_information - 2.0),
        )
        return [_result('bell_extremum', deviation, 1e-9, f"C={report.concurrence:.9g} D={report.discord:.9g}")]

    def check_discord_without_entanglement(self) -> List[CheckResult]:
        """D = 1/3 with C = 0 at (1/3, 1), and the grid finds it."""
        report = correlation_report(apparatus_state(ApparatusParams(R=1.0 / 3.0, kappa_h=1.0)))
        exact = CheckResult(
            name='discord_without_entanglement.value',
            passed=report.concurrence == 0.0 and abs(report.discord - 1.0 / 3.0) <= 1e-9,
            measured=abs(report.discord - 1.0 / 3.0),
            tolerance=1e-9,
            detail=f"C={report.concurrence:.9g} D={report.discord:.9g}",
        )

        frame = self.sweeps.sweep_prep(default_prep_spec((self.grid_points, self.grid_points)))
        located = locate_unentangled_discord_maximum(frame)
        distance = max(abs(located['R'] - 1.0 / 3.0), abs(located['kappa_h'] - 1.0))
        localized = _result(
            'discord_without_entanglement.location',
            distance,
            1e-3,
            f"grid ({located['grid_R']:.6g}, {located['grid_kappa_h']:.6g}) -> "
            f"refined ({located['R']:.9g}, {located['kappa_h']:.9g}), D={located['D']:.9g}",
        )
        return [exact, localized]

    def check_optimal_encoding_identity(self) -> List[CheckResult]:
        """Uniform encoding: dI = D, I_q = I, I_c = J and rho~ = 1/4."""
        uniform = uniform_distribution()
        worst = {'advantage': 0.0, 'information': 0.0, 'ensemble': 0.0}
        for r in np.linspace(0.0, 1.0, self.identity_points):
            rho = prepared_state(float(r))
            before = correlation_report(rho)
            report = advantage(rho, uniform, search='full')
            worst['advantage'] = max(
                worst['advantage'],
                abs(report.delta_i - before.discord),
                abs(report.i_c - before.classical_information),
            )
            worst['information'] = max(
                worst['information'],
                abs(report.i_q - before.mutual_information),
                abs(report.mutual_information_removed - report.i_q),
            )
            average = encode_ensemble(rho, uniform).entries
            worst['ensemble'] = max(worst['ensemble'], float(np.max(np.abs(average - np.eye(4) / 4))))
        return [
            _result('optimal_encoding_identity.advantage', worst['advantage'], 1e-9),
            _result('optimal_encoding_identity.information', worst['information'], 1e-9),
            _result('optimal_encoding_identity.ensemble', worst['ensemble'], 1e-12),
        ]

    def check_one_pauli_encoding(self) -> List[CheckResult]:
        """p1 = p2 = 1/2 at R = 1/2: dI = dD = 3(2 - log2 3)/4."""
        distribution = quasi_optimal_distribution(0.5)
        report = prepared_advantage(0.5, distribution, search='full')
        deviation = max(
            abs(report.delta_i - ONE_PAULI_ADVANTAGE),
            abs(report.delta_i - report.delta_d),
        )

        cut = self.sweeps.cut(0.5, np.linspace(0.0, 1.0, self.grid_points))
        located = locate_cut_maximum(cut, 0.5, search='full')
        return [_result(
            'one_pauli_encoding',
            deviation,
            1e-6,
            f"dI(R=1/2)={report.delta_i:.9g}; cut maximum dI={located['dI']:.9g} at R={located['R']:.6g}",
        )]

    def check_consumption_bound(self) -> List[CheckResult]:
        """dD - J(rho~) <= dI <= dD on random prepared states and encodings."""
        rng = self._rng(1)
        worst = math.inf
        for _ in range(self.bound_samples):
            r = float(rng.uniform(0.0, 1.0))
            distribution = EncodingDistribution.from_probabilities(rng.dirichlet(np.ones(4)))
            report = prepared_advantage(r, distribution, search='axes')
            worst = min(worst, report.lower_slack, report.upper_slack)
        return [CheckResult(
            name='consumption_bound',
            passed=worst >= -1e-9,
            measured=worst,
            tolerance=1e-9,
            detail=f"smallest slack over {self.bound_samples} samples",
        )]

    def check_oracles(self) -> List[CheckResult]:
        """Closed forms against brute-force discord and Wootters concurrence."""
        rng = self._rng(2)
        worst_discord = 0.0
        worst_concurrence = 0.0
        for _ in range(self.oracle_samples):
            params = random_xstate_params(rng)
            rho = assemble(params)
            closed, _ = discord_closed(params)
            brute, _ = discord_brute(rho)
            worst_discord = max(worst_discord, abs(closed - brute))
            worst_concurrence = max(worst_concurrence, abs(concurrence(params) - wootters_concurrence(rho)))
        return [
            _result('discord_oracle', worst_discord, 2e-4),
            _result('wootters_oracle', worst_concurrence, 1e-9),
        ]

    def check_quasi_optimal_consumption(self) -> List[CheckResult]:
        """p1 = p2, p3 = p4 leaves no discord."""
        rng = self._rng(3)
        worst = 0.0
        for _ in range(self.consumption_samples):
            r = float(rng.uniform(0.0, 1.0))
            distribution = quasi_optimal_distribution(float(rng.uniform(0.0, 0.5)))
            from_state = correlation_report(encode_ensemble(prepared_state(r), distribution)).discord
            from_params = post_encoding_correlations(distribution, r).discord
            worst = max(worst, abs(from_state), abs(from_params))
        return [_result('quasi_optimal_consumption', worst, 1e-9)]

    def check_superdense_limit(self) -> List[CheckResult]:
        """Bell input: perfect joint decoding, Holevo 2, local b2 at chance."""
        uniform = uniform_distribution()
        joint = run_transactions(TransactionConfig(
            R=1.0, distribution=uniform, shots=self.joint_shots, seed=self.seed, strategy='joint'
        ))
        local = run_transactions(TransactionConfig(
            R=1.0, distribution=uniform, shots=self.local_shots, seed=self.seed, strategy='local'
        ))
        guess = TransactionAnalyzer().bit_guess_test(local, uniform)
        return [
            CheckResult(
                name='superdense_limit.joint',
                passed=joint.success_rate == 1.0,
                measured=1.0 - joint.success_rate,
                tolerance=0.0,
                detail=f"{joint.shots} shots",
            ),
            _result('superdense_limit.holevo', abs(holevo(prepared_state(1.0), uniform) - 2.0), 1e-12),
            CheckResult(
                name='superdense_limit.local_b2',
                passed=guess['within_3_sigma'],
                measured=abs(guess['z_score']),
                tolerance=3.0,
                detail=f"b2 accuracy {guess['accuracy']:.6f} vs {guess['baseline']:.6f}",
            ),
        ]

    def check_vanishing_cases(self) -> List[CheckResult]:
        """D = 0 along R = 0 and along kappa_h = kappa_v = 0."""
        grid = np.linspace(0.0, 1.0, self.vanishing_points)
        worst = 0.0
        for value in grid:
            for params in (
                ApparatusParams(R=0.0, kappa_h=float(value)),
                ApparatusParams(R=float(value), kappa_h=0.0, kappa_v=0.0),
            ):
                worst = max(worst, abs(correlation_report(apparatus_state(params)).discord))
        return [_result('vanishing_cases', worst, 1e-12)]


def _result(name: str, deviation: float, tolerance: float, detail: str = '') -> CheckResult:
    return CheckResult(
        name=name,
        passed=bool(deviation <= tolerance),
        measured=float(deviation),
        tolerance=tolerance,
        detail=detail,
    )
