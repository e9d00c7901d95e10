"""
Parameter sweeps over the source and encoding parameters.

Grids are evaluated row-major over (axis1, axis2) and returned as pandas
DataFrames with a fixed column order; extremum localization refines the best
grid point with bounded line searches along each axis.
"""

import io
import json
import math
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
import yaml
from rich.console import Console
from rich.progress import track
from scipy.optimize import minimize_scalar

from qadvantage.correlations import correlations_from_params
from qadvantage.errors import InvalidConfigError
from qadvantage.models import (
    PARAMETER_DOMAINS,
    AdvantageSweepRow,
    ApparatusParams,
    AxisSpec,
    CutRow,
    PrepSweepRow,
    SweepSpec,
)
from qadvantage.protocol import Search, prepared_advantage, quasi_optimal_distribution
from qadvantage.xstate import (
    canonical_params,
    concurrence,
    separable_boundary,
    werner_boundary,
    werner_like_boundary,
)

PREP_COLUMNS = ['R', 'kappa_h', 'C', 'E', 'D', 'I', 'J', 'branch']
ADVANTAGE_COLUMNS = ['R', 'p1', 'Iq', 'Ic', 'dI', 'dD', 'J_after', 'branch', 'lower_slack', 'upper_slack']
CUT_COLUMNS = ['R', 'C', 'D', 'dI']
FLOAT_FORMAT = '%.9g'
DEFAULT_POINTS = 201

PREP_PARAMETERS = {'R', 'kappa_h', 'kappa_v'}
ADVANTAGE_PARAMETERS = {'R', 'p1'}


def parse_grid(grid: str) -> Tuple[int, int]:
    """
    Parse an 'NxM' grid size.

    Raises:
        InvalidConfigError: If the string is malformed or a size is below 2
    """
    try:
        n, m = (int(part) for part in grid.lower().split('x'))
    except ValueError:
        raise InvalidConfigError(f"Grid must look like NxM, got '{grid}'")
    if n < 2 or m < 2:
        raise InvalidConfigError(f"Grid sizes must be at least 2, got {grid}")
    return n, m


def default_prep_spec(grid: Tuple[int, int] = (DEFAULT_POINTS, DEFAULT_POINTS), kappa_v: float = 0.0) -> SweepSpec:
    """R x kappa_h over [0, 1]^2 with kappa_v fixed."""
    return SweepSpec(
        axis1=AxisSpec(name='R', start=0.0, stop=1.0, points=grid[0]),
        axis2=AxisSpec(name='kappa_h', start=0.0, stop=1.0, points=grid[1]),
        fixed={'kappa_v': kappa_v},
    )


def default_advantage_spec(grid: Tuple[int, int] = (DEFAULT_POINTS, DEFAULT_POINTS)) -> SweepSpec:
    """R over [0, 1] x p1 over [0, 1/2] for the quasi-optimal family."""
    return SweepSpec(
        axis1=AxisSpec(name='R', start=0.0, stop=1.0, points=grid[0]),
        axis2=AxisSpec(name='p1', start=0.0, stop=0.5, points=grid[1]),
    )


def load_spec(path: str, grid: Optional[Tuple[int, int]] = None) -> SweepSpec:
    """
    Load a SweepSpec from YAML; an explicit grid overrides the file's point counts.

    Raises:
        InvalidConfigError: If the file is missing or malformed
    """
    config_path = Path(path)
    if not config_path.exists():
        raise InvalidConfigError(f"Config file not found: {config_path}")
    with open(config_path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict) or 'axis1' not in data or 'axis2' not in data:
        raise InvalidConfigError(f"{config_path} must define axis1 and axis2")
    if grid is not None:
        data['axis1'] = {**data['axis1'], 'points': grid[0]}
        data['axis2'] = {**data['axis2'], 'points': grid[1]}
    return SweepSpec(**data)


def _check_parameters(spec: SweepSpec, allowed: set, required: Iterable[str]) -> None:
    names = {spec.axis1.name, spec.axis2.name, *spec.fixed}
    unknown = names - allowed
    if unknown:
        raise InvalidConfigError(f"Parameters {sorted(unknown)} cannot be swept here. Available: {sorted(allowed)}")
    missing = set(required) - names
    if missing:
        raise InvalidConfigError(f"Sweep leaves {sorted(missing)} unbound")


def _grid_points(spec: SweepSpec) -> List[Dict[str, float]]:
    """Row-major parameter bindings."""
    points = []
    for first in spec.axis1.values():
        for second in spec.axis2.values():
            points.append({**spec.fixed, spec.axis1.name: float(first), spec.axis2.name: float(second)})
    return points


def prep_row(r: float, kappa_h: float, kappa_v: float = 0.0) -> PrepSweepRow:
    """Correlations of the source state at one grid point."""
    report = correlations_from_params(canonical_params(ApparatusParams(R=r, kappa_h=kappa_h, kappa_v=kappa_v)))
    return PrepSweepRow(
        R=r,
        kappa_h=kappa_h,
        C=report.concurrence,
        E=report.entanglement,
        D=report.discord,
        I=report.mutual_information,
        J=report.classical_information,
        branch=report.diagnostics.branch,
    )


def advantage_row(r: float, p1: float, search: Search = 'axes') -> AdvantageSweepRow:
    """Quantum advantage of the quasi-optimal encoding at one grid point."""
    report = prepared_advantage(r, quasi_optimal_distribution(p1), search=search)
    return AdvantageSweepRow(
        R=r,
        p1=p1,
        Iq=report.i_q,
        Ic=report.i_c,
        dI=report.delta_i,
        dD=report.delta_d,
        J_after=report.j_after,
        branch=report.measurement_axis or 'other',
        lower_slack=report.lower_slack,
        upper_slack=report.upper_slack,
    )


def cut_row(r: float, p1: float, search: Search = 'axes') -> CutRow:
    """Pre-encoding C and D next to the quasi-optimal advantage."""
    report = correlations_from_params(canonical_params(ApparatusParams(R=r, kappa_h=1.0)))
    advantage = prepared_advantage(r, quasi_optimal_distribution(p1), search=search)
    return CutRow(R=r, C=report.concurrence, D=report.discord, dI=advantage.delta_i)


class SweepRunner:
    """
    Evaluates sweep grids and cuts.

    Progress goes to the given console; the returned frames carry the data.
    """

    def __init__(self, console: Optional[Console] = None, search: Search = 'axes'):
        """
        Initialize sweep runner.

        Args:
            console: Rich console for progress output (stderr by default)
            search: Accessible-information search mode for advantage grids
        """
        self.console = console or Console(stderr=True)
        self.search = search

    def _evaluate(self, points: List[Dict[str, float]], row: Callable, description: str) -> List:
        return [
            row(point)
            for point in track(points, description=description, console=self.console, transient=True)
        ]

    def sweep_prep(self, spec: SweepSpec) -> pd.DataFrame:
        """
        Correlations of the source state over an (R, kappa_h) grid.

        Args:
            spec: Sweep over R, kappa_h (and optionally kappa_v)

        Returns:
            DataFrame with PREP_COLUMNS
        """
        _check_parameters(spec, PREP_PARAMETERS, ('R', 'kappa_h'))
        rows = self._evaluate(
            _grid_points(spec),
            lambda p: prep_row(p['R'], p['kappa_h'], p.get('kappa_v', 0.0)),
            "Sweeping source state",
        )
        return pd.DataFrame([r.model_dump() for r in rows], columns=PREP_COLUMNS)

    def sweep_advantage(self, spec: SweepSpec) -> pd.DataFrame:
        """
        Quantum advantage of the quasi-optimal family over an (R, p1) grid.

        Args:
            spec: Sweep over R and p1

        Returns:
            DataFrame with ADVANTAGE_COLUMNS
        """
        _check_parameters(spec, ADVANTAGE_PARAMETERS, ('R', 'p1'))
        rows = self._evaluate(
            _grid_points(spec),
            lambda p: advantage_row(p['R'], p['p1'], search=self.search),
            "Sweeping encodings",
        )
        return pd.DataFrame([r.model_dump() for r in rows], columns=ADVANTAGE_COLUMNS)

    def cut(self, p1: float, r_values: np.ndarray) -> pd.DataFrame:
        """
        Fixed-p1 cut through the advantage landscape.

        Args:
            p1: Quasi-optimal parameter in [0, 1/2]
            r_values: Reflection coefficients

        Returns:
            DataFrame with CUT_COLUMNS
        """
        low, high = PARAMETER_DOMAINS['p1']
        if not low <= p1 <= high:
            raise InvalidConfigError(f"p1={p1} leaves [{low}, {high}]")
        rows = self._evaluate(
            [{'R': float(r)} for r in r_values],
            lambda p: cut_row(p['R'], p1, search=self.search),
            f"Cut at p1={p1:g}",
        )
        return pd.DataFrame([r.model_dump() for r in rows], columns=CUT_COLUMNS)


def prep_boundaries(kappa_values: np.ndarray) -> pd.DataFrame:
    """Separability and Werner lines in the (R, kappa_h) plane."""
    return pd.DataFrame({
        'kappa_h': kappa_values,
        'R_separable': [separable_boundary(k) for k in kappa_values],
        'R_werner': [werner_boundary(k) for k in kappa_values],
        'R_werner_like': [werner_like_boundary(k) for k in kappa_values],
    })


def branch_switch_boundary(frame: pd.DataFrame, along: str = 'R', across: str = 'p1') -> pd.DataFrame:
    """
    Points where the optimal local measurement changes between neighbours.

    For every value of `across`, consecutive grid values of `along` whose
    branch labels differ yield one boundary point at their midpoint.
    """
    points = []
    for value, group in frame.groupby(across, sort=True):
        ordered = group.sort_values(along)
        positions = ordered[along].to_numpy()
        labels = ordered['branch'].to_numpy()
        for i in np.flatnonzero(labels[1:] != labels[:-1]):
            points.append({
                across: value,
                along: 0.5 * (positions[i] + positions[i + 1]),
                'from_branch': labels[i],
                'to_branch': labels[i + 1],
            })
    return pd.DataFrame(points, columns=[across, along, 'from_branch', 'to_branch'])


def unentangled_rows(frame: pd.DataFrame, kappa_h: float = 1.0) -> pd.Series:
    """Rows whose source state at (R, kappa_h) has zero concurrence."""
    return frame['R'].map(
        lambda r: concurrence(canonical_params(ApparatusParams(R=float(r), kappa_h=kappa_h))) <= 0.0
    )


def grid_extremum(frame: pd.DataFrame, column: str, mask: Optional[pd.Series] = None) -> pd.Series:
    """Row with the largest value of column (first one on ties)."""
    subset = frame if mask is None else frame[mask]
    if subset.empty:
        raise InvalidConfigError(f"No rows left to locate the maximum of {column}")
    return subset.loc[subset[column].idxmax()]


def refine_extremum(
    objective: Callable[[Dict[str, float]], float],
    start: Dict[str, float],
    steps: Dict[str, float],
    rounds: int = 4,
    xatol: float = 1e-9
) -> Tuple[Dict[str, float], float]:
    """
    Maximize objective near a grid point by bounded line searches per axis.

    Each search stays within one grid step of the current point and inside
    the parameter's domain.

    Args:
        objective: Function of a parameter binding
        start: Grid point to start from
        steps: Grid spacing per refined parameter
        rounds: Maximum number of sweeps over the parameters
        xatol: Line-search tolerance

    Returns:
        Tuple of (refined point, objective value)
    """
    point = dict(start)
    best = objective(point)
    for _ in range(rounds):
        previous = best
        for name, step in steps.items():
            low_domain, high_domain = PARAMETER_DOMAINS[name]
            low = max(low_domain, point[name] - step)
            high = min(high_domain, point[name] + step)
            if high <= low:
                continue
            result = minimize_scalar(
                lambda x: -objective({**point, name: float(x)}),
                bounds=(low, high), method='bounded', options={'xatol': xatol}
            )
            if -result.fun > best:
                best = float(-result.fun)
                point[name] = float(result.x)
            # Bounded search never evaluates the end points themselves
            for edge in (low, high):
                value = objective({**point, name: edge})
                if value > best:
                    best, point[name] = value, edge
        if best - previous <= 1e-15:
            break
    return point, best


def locate_unentangled_discord_maximum(frame: pd.DataFrame, kappa_v: float = 0.0) -> Dict[str, float]:
    """
    Largest discord among separable source states, refined off the grid.

    Outside the separable region the objective is penalized by the
    concurrence so the refinement stays on C = 0.
    """
    best_row = grid_extremum(frame, 'D', frame['C'] <= 0.0)
    steps = {
        'R': _spacing(frame['R']),
        'kappa_h': _spacing(frame['kappa_h']),
    }

    def objective(point: Dict[str, float]) -> float:
        row = prep_row(point['R'], point['kappa_h'], kappa_v)
        return row.D - 10.0 * row.C

    point, value = refine_extremum(objective, {'R': float(best_row['R']), 'kappa_h': float(best_row['kappa_h'])}, steps)
    return {
        'grid_R': float(best_row['R']),
        'grid_kappa_h': float(best_row['kappa_h']),
        'grid_D': float(best_row['D']),
        'R': point['R'],
        'kappa_h': point['kappa_h'],
        'D': value,
    }


def locate_cut_maximum(frame: pd.DataFrame, p1: float, search: Search = 'axes') -> Dict[str, float]:
    """Argmax of dI along a cut, refined between neighbouring grid points."""
    best_row = grid_extremum(frame, 'dI')
    point, value = refine_extremum(
        lambda p: cut_row(p['R'], p1, search=search).dI,
        {'R': float(best_row['R'])},
        {'R': _spacing(frame['R'])},
    )
    return {'grid_R': float(best_row['R']), 'grid_dI': float(best_row['dI']), 'R': point['R'], 'dI': value}


def _spacing(values: pd.Series) -> float:
    unique = np.unique(values.to_numpy())
    return float(np.min(np.diff(unique))) if len(unique) > 1 else 0.0


def render_table(frame: pd.DataFrame, fmt: str = 'csv') -> str:
    """
    Serialize a frame as CSV (9 significant digits) or JSON records.

    Raises:
        InvalidConfigError: If fmt is neither 'csv' nor 'json'
    """
    if fmt == 'csv':
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        return buffer.getvalue()
    if fmt == 'json':
        records = [
            {key: _json_value(value) for key, value in record.items()}
            for record in frame.to_dict(orient='records')
        ]
        return json.dumps(records, indent=2) + '\n'
    raise InvalidConfigError(f"Unknown format '{fmt}'. Available: ['csv', 'json']")


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        return float(FLOAT_FORMAT % value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def companion_path(out: str, suffix: str) -> Path:
    """results.csv + 'boundaries' -> results_boundaries.csv."""
    path = Path(out)
    return path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}")
