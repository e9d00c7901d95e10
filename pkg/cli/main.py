"""
CLI interface for the X-state quantum advantage toolkit.

Commands:
- report: Correlations of one symmetric X-state
- sweep-prep: Source-state correlations over an (R, kappa_h) grid
- sweep-advantage: Quantum advantage over an (R, p1) grid
- cut: Fixed-p1 cut through the advantage landscape
- mc: Monte Carlo of encode/decode transactions
- verify: Acceptance checks

Tables and progress go to stderr; JSON and CSV go to stdout or --out.
"""

import functools
import json
import sys
from pathlib import Path
from typing import Optional, Tuple

import click
import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from qadvantage.correlations import correlation_report, optimal_measurement_region
from qadvantage.errors import InvalidConfigError
from qadvantage.models import (
    ApparatusParams,
    EncodingDistribution,
    MeasurementDirection,
    TransactionConfig,
    XStateParams,
)
from qadvantage.protocol import accessible_info, holevo, quasi_optimal_distribution, uniform_distribution
from qadvantage.run_logger import RunLogger
from qadvantage.statistics import TransactionAnalyzer
from qadvantage.sweeps import (
    SweepRunner,
    branch_switch_boundary,
    companion_path,
    default_advantage_spec,
    default_prep_spec,
    grid_extremum,
    load_spec,
    locate_cut_maximum,
    parse_grid,
    prep_boundaries,
    render_table,
    unentangled_rows,
)
from qadvantage.transactions import TransactionRunner
from qadvantage.verification import VerificationSuite
from qadvantage.xstate import apparatus_state, assemble, prepared_state

console = Console(stderr=True)


def handles_input_errors(command):
    """Report invalid input on the console and exit with status 2."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ValueError as e:
            console.print(f"[bold red]Error:[/bold red] {escape(str(e))}")
            sys.exit(2)
    return wrapper


def _emit(text: str, out: Optional[str]) -> None:
    """Write machine output to --out or stdout."""
    if out:
        Path(out).write_text(text, encoding='utf-8')
        console.print(f"[green]Saved to:[/green] {out}")
    else:
        click.echo(text, nl=False)


def _log(ctx: click.Context, summary: dict, out: Optional[str] = None) -> None:
    logger: Optional[RunLogger] = ctx.obj.get('logger') if ctx.obj else None
    if logger is not None:
        logger.log_run(ctx.command.name, dict(ctx.params), summary=summary, output=out)


def _distribution(
    p1: Optional[float],
    p2: Optional[float],
    p3: Optional[float],
    p4: Optional[float],
    uniform: bool
) -> EncodingDistribution:
    """--uniform, --p1 alone (quasi-optimal family) or all four probabilities."""
    given = [p for p in (p1, p2, p3, p4) if p is not None]
    if uniform:
        if given:
            raise InvalidConfigError("--uniform cannot be combined with --p1..--p4")
        return uniform_distribution()
    if not given:
        return uniform_distribution()
    if p1 is not None and len(given) == 1:
        return quasi_optimal_distribution(p1)
    if len(given) != 4:
        raise InvalidConfigError("Give --p1 alone (quasi-optimal family) or all of --p1 --p2 --p3 --p4")
    return EncodingDistribution(p1=p1, p2=p2, p3=p3, p4=p4)


def _direction(angles: Optional[Tuple[float, float]]) -> MeasurementDirection:
    if angles is None:
        return MeasurementDirection(theta=0.0)
    return MeasurementDirection.from_angles(*angles)


def _grid(grid: Optional[str]) -> Optional[Tuple[int, int]]:
    return parse_grid(grid) if grid else None


format_option = click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default='csv',
                             help='Table format (default: csv)')
out_option = click.option('--out', '-o', type=click.Path(dir_okay=False), help='Output file (default: stdout)')


@click.group()
@click.option('--log-dir', type=click.Path(file_okay=False),
              help='Append a JSON line per run to <log-dir>/<run-id>_runs.jsonl')
@click.option('--run-id', default='qadvantage', help='Run log identifier')
@click.pass_context
def cli(ctx: click.Context, log_dir: Optional[str], run_id: str):
    """Correlations, discord and quantum advantage of symmetric X-states."""
    ctx.ensure_object(dict)
    if log_dir:
        ctx.obj['logger'] = RunLogger(log_dir, run_id)


@cli.command()
@click.option('--R', 'r', type=float, help='Reflection coefficient')
@click.option('--kh', type=float, help='Horizontal coherence factor')
@click.option('--kv', type=float, help='Vertical coherence factor (default: 0)')
@click.option('--a', 'a', type=float, help='Canonical diagonal weight')
@click.option('--w', 'w', type=float, help='Canonical outer coherence')
@click.option('--z', 'z', type=float, help='Canonical inner coherence')
@out_option
@click.pass_context
@handles_input_errors
def report(ctx, r, kh, kv, a, w, z, out):
    """
    Correlation report of one state, as JSON.

    Example:
        qadvantage report --R 1 --kh 1 --kv 0
        qadvantage report --a 0.25 --w 0 --z 0
    """
    apparatus = r is not None or kh is not None or kv is not None
    canonical = a is not None or w is not None or z is not None
    if apparatus == canonical:
        raise InvalidConfigError("Give either --R/--kh[/--kv] or --a/--w/--z")

    if apparatus:
        if r is None or kh is None:
            raise InvalidConfigError("--R and --kh are both required")
        params = ApparatusParams(R=r, kappa_h=kh, kappa_v=kv or 0.0)
        rho = apparatus_state(params)
    else:
        if a is None or w is None or z is None:
            raise InvalidConfigError("--a, --w and --z are all required")
        params = XStateParams.from_values(a, w, z)
        rho = assemble(params)

    result = correlation_report(rho)
    branch = optimal_measurement_region(params)

    table = Table(title="Correlations")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("Concurrence C", f"{result.concurrence:.9g}")
    table.add_row("Entanglement E", f"{result.entanglement:.9g}")
    table.add_row("Mutual information I", f"{result.mutual_information:.9g}")
    table.add_row("Classical correlation J", f"{result.classical_information:.9g}")
    table.add_row("Discord D", f"{result.discord:.9g}")
    table.add_row("Optimal measurement", branch)
    console.print(table)

    payload = {
        'params': params.model_dump(),
        'report': result.model_dump(),
        'optimal_measurement': branch,
    }
    _emit(json.dumps(payload, indent=2) + '\n', out)
    _log(ctx, {'discord': result.discord, 'concurrence': result.concurrence}, out)


@cli.command('sweep-prep')
@click.option('--grid', help='Grid size NxM over (R, kappa_h) (default: 201x201)')
@click.option('--kv', type=float, default=0.0, show_default=True, help='Fixed vertical coherence factor')
@click.option('--config', '-c', type=click.Path(exists=True, dir_okay=False), help='Sweep config YAML')
@format_option
@out_option
@click.pass_context
@handles_input_errors
def sweep_prep(ctx, grid, kv, config, fmt, out):
    """
    Source-state correlations over R and kappa_h.

    With --out, the separability and Werner lines are written next to the
    table as <out>_boundaries in the same format.

    Example:
        qadvantage sweep-prep --grid 201x201 --out prep.csv
    """
    size = _grid(grid)
    if config:
        spec = load_spec(config, size)
    else:
        spec = default_prep_spec(size or (201, 201), kappa_v=kv)

    frame = SweepRunner(console=console).sweep_prep(spec)
    best = grid_extremum(frame, 'D')
    summary = {'rows': len(frame), 'max_D': float(best['D'])}
    console.print(f"[bold]Max D:[/bold] {best['D']:.9g} at R={best['R']:.6g}, kappa_h={best['kappa_h']:.6g}")
    unentangled = frame['C'] <= 0.0
    if unentangled.any():
        separable = grid_extremum(frame, 'D', unentangled)
        summary['max_D_separable'] = float(separable['D'])
        console.print(
            f"[bold]Max D with C=0:[/bold] {separable['D']:.9g} "
            f"at R={separable['R']:.6g}, kappa_h={separable['kappa_h']:.6g}"
        )

    _emit(render_table(frame, fmt), out)
    if out:
        kappas = np.unique(frame['kappa_h'].to_numpy())
        boundaries = companion_path(out, 'boundaries')
        boundaries.write_text(render_table(prep_boundaries(kappas), fmt), encoding='utf-8')
        console.print(f"[green]Boundaries saved to:[/green] {boundaries}")
    _log(ctx, summary, out)


@cli.command('sweep-advantage')
@click.option('--grid', help='Grid size NxM over (R, p1) (default: 201x201)')
@click.option('--config', '-c', type=click.Path(exists=True, dir_okay=False), help='Sweep config YAML')
@click.option('--full-search/--axes-search', default=False,
              help='Search all local measurements instead of the Pauli axes')
@format_option
@out_option
@click.pass_context
@handles_input_errors
def sweep_advantage(ctx, grid, config, full_search, fmt, out):
    """
    Quantum advantage of the quasi-optimal encoding over R and p1.

    With --out, the branch-switch boundary is written as <out>_boundaries.

    Example:
        qadvantage sweep-advantage --grid 101x51 --out advantage.csv
    """
    size = _grid(grid)
    if config:
        spec = load_spec(config, size)
    else:
        spec = default_advantage_spec(size or (201, 201))

    runner = SweepRunner(console=console, search='full' if full_search else 'axes')
    frame = runner.sweep_advantage(spec)
    best = grid_extremum(frame, 'dI')
    console.print(f"[bold]Max dI:[/bold] {best['dI']:.9g} at R={best['R']:.6g}, p1={best['p1']:.6g}")
    summary = {'rows': len(frame), 'max_dI': float(best['dI'])}
    unentangled = unentangled_rows(frame)
    if unentangled.any():
        separable = grid_extremum(frame, 'dI', unentangled)
        summary['max_dI_separable'] = float(separable['dI'])
        console.print(
            f"[bold]Max dI with C=0 before encoding:[/bold] {separable['dI']:.9g} "
            f"at R={separable['R']:.6g}, p1={separable['p1']:.6g}"
        )

    _emit(render_table(frame, fmt), out)
    if out:
        boundaries = companion_path(out, 'boundaries')
        boundaries.write_text(render_table(branch_switch_boundary(frame), fmt), encoding='utf-8')
        console.print(f"[green]Boundaries saved to:[/green] {boundaries}")
    _log(ctx, summary, out)


@cli.command()
@click.option('--p1', type=float, required=True, help='Quasi-optimal parameter in [0, 1/2]')
@click.option('--r-min', type=float, default=0.0, show_default=True)
@click.option('--r-max', type=float, default=1.0, show_default=True)
@click.option('--points', type=int, default=201, show_default=True, help='Number of R values')
@click.option('--full-search/--axes-search', default=False,
              help='Search all local measurements instead of the Pauli axes')
@format_option
@out_option
@click.pass_context
@handles_input_errors
def cut(ctx, p1, r_min, r_max, points, full_search, fmt, out):
    """
    R, C, D and dI along a fixed-p1 line.

    Example:
        qadvantage cut --p1 0.25
        qadvantage cut --p1 0.5 --full-search --out cut.csv
    """
    if not 0.0 <= r_min < r_max <= 1.0:
        raise InvalidConfigError(f"R range [{r_min}, {r_max}] must be increasing within [0, 1]")
    if points < 2:
        raise InvalidConfigError(f"Need at least 2 points, got {points}")

    search = 'full' if full_search else 'axes'
    frame = SweepRunner(console=console, search=search).cut(p1, np.linspace(r_min, r_max, points))
    located = locate_cut_maximum(frame, p1, search=search)
    console.print(
        f"[bold]Max dI:[/bold] {located['dI']:.9g} at R={located['R']:.9g} "
        f"(grid {located['grid_dI']:.9g} at R={located['grid_R']:.6g})"
    )

    _emit(render_table(frame, fmt), out)
    _log(ctx, {'rows': len(frame), 'max_dI': located['dI'], 'argmax_R': located['R']}, out)


@cli.command()
@click.option('--R', 'r', type=float, required=True, help='Reflection coefficient of the prepared state')
@click.option('--p1', type=float)
@click.option('--p2', type=float)
@click.option('--p3', type=float)
@click.option('--p4', type=float)
@click.option('--uniform', is_flag=True, help='All four operations with probability 1/4')
@click.option('--shots', type=int, default=100_000, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--strategy', type=click.Choice(['joint', 'local']), default='joint', show_default=True)
@click.option('--ms', type=(float, float), default=None, help='THETA PHI of the local measurement on s')
@click.option('--mp', type=(float, float), default=None, help='THETA PHI of the local measurement on p')
@click.option('--batch-size', type=int, default=10_000, show_default=True)
@click.option('--workers', type=int, default=1, show_default=True)
@out_option
@click.pass_context
@handles_input_errors
def mc(ctx, r, p1, p2, p3, p4, uniform, shots, seed, strategy, ms, mp, batch_size, workers, out):
    """
    Monte Carlo of encode/decode transactions, as JSON.

    Example:
        qadvantage mc --R 1 --uniform --shots 10000 --seed 7 --strategy joint
    """
    distribution = _distribution(p1, p2, p3, p4, uniform)
    config = TransactionConfig(
        R=r,
        distribution=distribution,
        shots=shots,
        seed=seed,
        strategy=strategy,
        m_s=_direction(ms),
        m_p=_direction(mp),
        batch_size=batch_size,
        workers=workers,
    )

    with console.status("[yellow]Running transactions...[/yellow]"):
        runner = TransactionRunner(config)
        stats = runner.run()

    rho = prepared_state(r)
    i_q = holevo(rho, distribution)
    i_c, _ = accessible_info(rho, distribution)
    analyzer = TransactionAnalyzer()
    clicks = analyzer.click_deviation(stats.click_counts, runner.expected_clicks())
    guess = analyzer.bit_guess_test(stats, distribution)
    lower, upper = analyzer.bootstrap_confidence_interval(stats.counts, seed=seed)

    table = Table(title=f"Transactions ({stats.decoder})")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("Success rate", f"{stats.success_rate:.6f}")
    table.add_row("b1 / b2 accuracy", f"{stats.per_bit_accuracy[0]:.6f} / {stats.per_bit_accuracy[1]:.6f}")
    table.add_row("I(K;K*)", f"{stats.empirical_mutual_info:.6f} [{lower:.6f}, {upper:.6f}]")
    table.add_row("Holevo I_q", f"{i_q:.6f}")
    table.add_row("Accessible I_c", f"{i_c:.6f}")
    console.print(table)
    console.print(guess['interpretation'])

    payload = {
        'config': json.loads(config.model_dump_json()),
        'stats': stats.model_dump(),
        'theory': {'i_q': i_q, 'i_c': i_c},
        'mutual_info_interval': [lower, upper],
        'click_deviation': clicks,
        'b2_test': guess,
    }
    _emit(json.dumps(payload, indent=2) + '\n', out)
    _log(ctx, {'success_rate': stats.success_rate, 'empirical_mutual_info': stats.empirical_mutual_info}, out)


@cli.command()
@click.option('--only', multiple=True, help='Run only the named check group (repeatable)')
@click.option('--seed', type=int, default=None, help='Override the suite seed')
@out_option
@click.pass_context
def verify(ctx, only, seed, out):
    """
    Run the acceptance checks; exit 1 if any fails.

    Example:
        qadvantage verify
        qadvantage verify --only oracles --only vanishing_cases
    """
    suite = VerificationSuite() if seed is None else VerificationSuite(seed=seed)
    try:
        with console.status("[yellow]Verifying...[/yellow]"):
            results = suite.run(list(only) or None)
    except KeyError as e:
        console.print(f"[bold red]Error:[/bold red] {e.args[0]}")
        sys.exit(2)

    table = Table(title="Verification")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_column("Measured", style="blue")
    table.add_column("Tolerance", style="magenta")
    table.add_column("Detail")
    for result in results:
        status = "[green]PASS[/green]" if result.passed else "[bold red]FAIL[/bold red]"
        table.add_row(result.name, status, f"{result.measured:.3e}", f"{result.tolerance:.1e}", result.detail)
    console.print(table)

    passed = suite.all_passed(results)
    _emit(json.dumps([r.model_dump() for r in results], indent=2) + '\n', out)
    _log(ctx, {'passed': passed, 'failed': [r.name for r in results if not r.passed]}, out)

    if not passed:
        failed = ', '.join(r.name for r in results if not r.passed)
        console.print(f"[bold red]Failed:[/bold red] {failed}")
        sys.exit(1)
    console.print("[bold green]✓ All checks passed[/bold green]")


if __name__ == '__main__':
    cli()
