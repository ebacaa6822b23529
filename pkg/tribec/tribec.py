import logging
import os
import sys

# External modules
import click

# tribec modules
from . import __version__
from .analysis import (
    critical_r_localization,
    fixed_points,
    oracle_fixed_points,
    sweep_r,
    tangency_r,
)
from .config import (
    DEFAULTS,
    RunConfig,
    config_to_click,
    get_config_file,
    load_config_file,
    normalize_keys,
)
from .exceptions import (
    Error,
    NothingToDo,
    ToleranceExceeded,
    UsageError,
)
from .fock_basis import DEFAULT_MAX_ATOMS, build_basis
from .output import write_fixed_points, write_series
from .quantum_dynamics import OBSERVABLE_LABELS, STATE_LABELS, initial_state, simulate
from .semiclassical import initial_reduced_state, integrate
from .su3_operators import ModelParams
from .util import parse_ratio_grid
from .verification import DEFAULT_ATOM_COUNTS, DEFAULT_HORIZON, DEFAULT_RATIOS, run_checks

DEFAULT_SWEEP_GRID = '0.2,0.283,0.3333333333333333,0.506,0.52'
ORACLE_TOLERANCE = 1e-8

logger = logging.getLogger('tribec.tribec')


def configure_log(debug: bool):
    """
    Log to stderr so that stdout stays clean for CSV and JSON output.
    """
    root_logger = logging.getLogger('tribec')
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(logging.DEBUG)
    if debug:
        root_logger.setLevel(logging.DEBUG)
        handler.setFormatter(logging.Formatter('%(asctime)s - tribec.%(module)-9s - %(levelname)-5s - %(message)s'))
    else:
        root_logger.setLevel(logging.INFO)
        handler.setFormatter(logging.Formatter('%(message)s'))
    root_logger.addHandler(handler)


def parse_observables(value: str) -> tuple:
    return tuple(label.strip() for label in value.split(',') if label.strip())


def check_atom_cap(max_atoms: int):
    if max_atoms != DEFAULT_MAX_ATOMS:
        logger.warning(
            "Warning: Atom cap raised from {d} to {m}. The dense eigendecomposition "
            "at large N can take a very long time and a lot of memory.".format(
                d=DEFAULT_MAX_ATOMS, m=max_atoms))


def command_options(group: click.Group) -> dict:
    return {
        name: {param.name for param in command.params}
        for name, command in group.commands.items()
    }


@click.group()
@click.option(
    '--config',
    help="Path to a tribec configuration file (JSON or YAML).",
    default=get_config_file())
@click.version_option(version=__version__)
@click.option('--debug/--no-debug', default=False, help="Show debug information.")
@click.pass_context
def cli(cli_context, config, debug):
    """
    tribec

    Quantum and mean-field dynamics of three coupled Bose-Einstein condensates.
    """
    if os.path.isfile(config):
        config_raw = normalize_keys(load_config_file(config))
        debug = config_raw.get('debug') or debug
        cli_context.default_map = config_to_click(
            config_raw,
            command_options=command_options(cli_context.command))
    else:
        if config != get_config_file():
            raise UsageError("Error: No such config file: {c}".format(c=config))
    configure_log(debug=debug)


output_option = click.option(
    '--output', '-o',
    type=click.Path(dir_okay=False, writable=True),
    help="Output file. Defaults to stdout.")
format_option = click.option('--format', 'output_format', type=click.Choice(['csv', 'json']), default='csv')


@cli.command(name='simulate-quantum')
@click.option('--n-atoms', type=int, default=DEFAULTS.n_atoms, show_default=True)
@click.option('--r', type=float, default=DEFAULTS.r, show_default=True)
@click.option('--omega-sign', type=int, default=-1, show_default=True, help="Sign of the tunneling Omega, -1 or 1.")
@click.option('--initial', type=click.Choice(STATE_LABELS), default='e1', show_default=True)
@click.option('--t-max', type=float, default=50.0, show_default=True)
@click.option('--dt-out', type=float, default=0.05, show_default=True)
@click.option('--observables', default=','.join(OBSERVABLE_LABELS + ('norm',)), show_default=True)
@click.option('--max-atoms', type=click.IntRange(min=0), default=DEFAULT_MAX_ATOMS, show_default=True)
@output_option
@format_option
def simulate_quantum(
        n_atoms, r, omega_sign, initial, t_max, dt_out, observables, max_atoms,
        output, output_format):
    """
    Propagate a Fock-space state under the reduced Hamiltonian.
    """
    config = RunConfig(
        mode='quantum',
        n_atoms=n_atoms,
        r=r,
        r_grid=(),
        omega_sign=int(omega_sign),
        initial=initial,
        t_max=t_max,
        dt_out=dt_out,
        observables=parse_observables(observables),
        output=output,
        format=output_format)
    config.validate()
    check_atom_cap(max_atoms)

    basis = build_basis(n_atoms, max_atoms=max_atoms)
    logger.info("Propagating |{s}> at N={n} (dimension {d}), r={r}...".format(
        s=initial, n=n_atoms, d=basis.dimension, r=r))

    params = ModelParams.from_ratio(total_n=n_atoms, r=r, omega_sign=config.omega_sign)
    series = simulate(params, initial_state(basis, initial), config.times(), config.observables)
    write_series(series, config)


@cli.command(name='simulate-semiclassical')
@click.option('--r', type=float, default=DEFAULTS.r, show_default=True)
@click.option('--omega-sign', type=int, default=-1, show_default=True, help="Sign of the tunneling Omega, -1 or 1.")
@click.option('--t-max', type=float, default=50.0, show_default=True)
@click.option('--dt-out', type=float, default=0.05, show_default=True)
@click.option('--n-atoms', type=int, default=DEFAULTS.n_atoms, help="Accepted but unused; the mean-field flow depends only on r.")
@output_option
@format_option
def simulate_semiclassical(r, omega_sign, t_max, dt_out, n_atoms, output, output_format):
    """
    Integrate the mean-field flow from the all-atoms-in-well-3 state.
    """
    config = RunConfig(
        mode='semiclassical',
        n_atoms=n_atoms,
        r=r,
        r_grid=(),
        omega_sign=int(omega_sign),
        initial='e1',
        t_max=t_max,
        dt_out=dt_out,
        observables=('x2', 'y2', 'z1', 'z2'),
        output=output,
        format=output_format)
    config.validate()

    logger.info("Integrating mean-field orbit at r={r}...".format(r=r))
    trajectory = integrate(initial_reduced_state(), r, config.times(), omega_sign=config.omega_sign)
    logger.info("Max x2 = {m:.6f} ({s}).".format(
        m=trajectory.max_x2, s='localized' if trajectory.max_x2 < 0 else 'delocalized'))
    write_series(trajectory, config)


@cli.command(name='fixed-points')
@click.option('--r', type=float, default=0.45, show_default=True)
@click.option('--cross-check/--no-cross-check', default=False,
              help="Also run the brute-force search and compare.")
@output_option
@format_option
def fixed_points_command(r, cross_check, output, output_format):
    """
    List the equilibria of the mean-field flow at one coupling ratio.
    """
    config = RunConfig(
        mode='fixed-points',
        n_atoms=DEFAULTS.n_atoms,
        r=r,
        r_grid=(),
        omega_sign=DEFAULTS.omega_sign,
        initial='e1',
        t_max=DEFAULTS.t_max,
        dt_out=DEFAULTS.dt_out,
        observables=(),
        output=output,
        format=output_format)
    config.validate()

    points = fixed_points(r)
    for point in points:
        logger.info("  {k:<8} x2={x: .10f}  z2={z: .10f}".format(k=point.kind, x=point.x2, z=point.z2))

    if cross_check:
        oracle = oracle_fixed_points(r)
        worst = _max_point_distance(points, oracle)
        if worst > ORACLE_TOLERANCE:
            raise ToleranceExceeded(diagnostic='fixed point oracle distance', value=worst, tolerance=ORACLE_TOLERANCE)
        logger.info("Brute-force search agrees to {w:.1e}.".format(w=worst))

    write_fixed_points(points, config)


def _max_point_distance(points: list, others: list) -> float:
    if len(points) != len(others):
        return float('inf')
    return max(
        (max(abs(p.x2 - q.x2), abs(p.z2 - q.z2)) for p, q in zip(points, others)),
        default=0.0)


@cli.command()
@click.option('--r-grid', default=DEFAULT_SWEEP_GRID, show_default=True,
              help="Comma-separated ratios or start:stop:step.")
@click.option('--t-max', type=float, default=100.0, show_default=True, help="Integration horizon.")
@click.option('--dt-out', type=float, default=0.05, show_default=True)
@click.option('--workers', type=click.IntRange(min=1), envvar='TRIBEC_WORKERS',
              help="Worker threads. Defaults to the number of CPUs.")
@output_option
@format_option
def sweep(r_grid, t_max, dt_out, workers, output, output_format):
    """
    Fixed points and |e1> localization across a grid of coupling ratios.
    """
    grid = parse_ratio_grid(r_grid)
    config = RunConfig(
        mode='sweep',
        n_atoms=DEFAULTS.n_atoms,
        r=None,
        r_grid=tuple(grid),
        omega_sign=DEFAULTS.omega_sign,
        initial='e1',
        t_max=t_max,
        dt_out=dt_out,
        observables=(),
        output=output,
        format=output_format)
    config.validate()

    result = sweep_r(grid, t_max, dt_out=dt_out, workers=workers)
    write_fixed_points(result, config)

    if not grid:
        raise NothingToDo("Ratio grid is empty. Nothing to sweep.")

    transition = result.transition()
    if transition:
        logger.info("Localization is lost between r={lo} and r={hi}.".format(lo=transition[0], hi=transition[1]))

    if result.failures:
        raise Error(
            "Error: {n} sweep entries failed:\n{lines}".format(
                n=len(result.failures),
                lines='\n'.join(
                    '  - r={r}: {e}'.format(r=entry.r, e=entry.error) for entry in result.failures)))


@cli.command()
@click.option('--n-atoms', 'atom_counts', type=int, multiple=True,
              help="Atom numbers for the operator checks. Repeatable.")
@click.option('--r', 'ratios', type=float, multiple=True,
              help="Ratios for the conservation checks. Repeatable.")
@click.option('--t-max', type=float, default=DEFAULT_HORIZON, show_default=True)
@click.option('--thresholds/--no-thresholds', default=True,
              help="Also recompute the tangency and localization thresholds.")
@click.option('--cross-check/--no-cross-check', default=True, show_default=True,
              help="Confirm the localization threshold with a trajectory sweep.")
def verify(atom_counts, ratios, t_max, thresholds, cross_check):
    """
    Run the operator-identity and conservation checks and print a report.
    """
    checks = run_checks(
        atom_counts=atom_counts or DEFAULT_ATOM_COUNTS,
        ratios=ratios or DEFAULT_RATIOS,
        horizon=t_max)
    for check in checks:
        click.echo(str(check))

    if thresholds:
        click.echo("tangency r        = {:.9f}".format(tangency_r()))
        click.echo("localization r*   = {:.12f}".format(critical_r_localization(cross_check=cross_check)))

    failed = [check for check in checks if not check.passed]
    if failed:
        raise Error(
            "Error: {f} of {t} checks failed.".format(f=len(failed), t=len(checks)))
    click.echo("All {t} checks passed.".format(t=len(checks)))


def main() -> int:
    try:
        cli()
    except NothingToDo as e:
        print(e, file=sys.stderr)
        return 0
    except UsageError as e:
        print(e, file=sys.stderr)
        return 2
    except Error as e:
        print(e, file=sys.stderr)
        return 1
