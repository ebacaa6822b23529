import csv
import json
import logging
import math

# External modules
import click

# tribec modules
from .analysis import SweepResult
from .config import RunConfig
from .exceptions import OutputError
from .quantum_dynamics import TimeSeries

# residual24 measures the hyperbola, residual25 the ellipse.
FIXED_POINT_COLUMNS = ('r', 'x2', 'z2', 'kind', 'residual24', 'residual25')
SWEEP_COLUMNS = FIXED_POINT_COLUMNS + ('max_x2', 'localized')

logger = logging.getLogger('tribec.output')


def format_float(value) -> str:
    """
    Shortest text that reads back as the same double.
    """
    return repr(float(value))


def _json_float(value):
    value = float(value)
    return None if math.isnan(value) else value


def _localized_text(entry) -> str:
    if entry.error is not None:
        return 'error'
    if entry.localized is None:
        return 'boundary'
    return 'true' if entry.localized else 'false'


def _open(path: str):
    return click.open_file(path or '-', mode='w', encoding='utf-8', lazy=False)


def _write(path: str, write_func):
    try:
        with _open(path) as f:
            write_func(f)
    except OSError as e:
        raise OutputError(path=path, cause=e) from e
    if path and path != '-':
        logger.info("Wrote {p}.".format(p=path))


def write_series(series: TimeSeries, config: RunConfig, *, path: str = None):
    """
    One row per output time with a `tau` column first. `path` defaults to
    the config's output; no output means stdout.
    """
    path = path or config.output

    def write_csv(f):
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(('tau',) + series.labels)
        for tau, row in zip(series.times, series.values):
            writer.writerow([format_float(tau)] + [format_float(v) for v in row])

    def write_json(f):
        document = {
            'config': config.to_dict(),
            'labels': list(series.labels),
            'tau': series.times.tolist(),
            'columns': {label: series.column(label).tolist() for label in series.labels},
        }
        json.dump(document, f, indent=2)
        f.write('\n')

    _write(path, write_json if config.format == 'json' else write_csv)


def _fixed_point_row(point) -> list:
    return [
        format_float(point.r),
        format_float(point.x2),
        format_float(point.z2),
        point.kind,
        format_float(point.hyperbola_residual),
        format_float(point.ellipse_residual),
    ]


def _fixed_point_dict(point) -> dict:
    return {
        'x2': point.x2,
        'z2': point.z2,
        'kind': point.kind,
        'residual24': point.hyperbola_residual,
        'residual25': point.ellipse_residual,
    }


def write_fixed_points(result, config: RunConfig, *, path: str = None):
    """
    Write either a list of FixedPoint for one ratio or a whole SweepResult.
    Sweeps get the |e1> orbit's max x2 and its localization flag on every
    row; a failed entry is a single row flagged `error`.
    """
    path = path or config.output
    is_sweep = isinstance(result, SweepResult)

    def write_csv(f):
        writer = csv.writer(f, lineterminator='\n')
        if not is_sweep:
            writer.writerow(FIXED_POINT_COLUMNS)
            for point in result:
                writer.writerow(_fixed_point_row(point))
            return

        writer.writerow(SWEEP_COLUMNS)
        for entry in result:
            tail = [format_float(entry.max_x2), _localized_text(entry)]
            if not entry.fixed_points:
                writer.writerow([format_float(entry.r), '', '', '', '', ''] + tail)
            for point in entry.fixed_points:
                writer.writerow(_fixed_point_row(point) + tail)

    def write_json(f):
        document = {'config': config.to_dict()}
        if is_sweep:
            document['entries'] = [
                {
                    'r': entry.r,
                    'max_x2': _json_float(entry.max_x2),
                    'localized': _localized_text(entry),
                    'error': None if entry.error is None else str(entry.error),
                    'fixed_points': [_fixed_point_dict(p) for p in entry.fixed_points],
                }
                for entry in result
            ]
        else:
            document['fixed_points'] = [
                dict(r=point.r, **_fixed_point_dict(point)) for point in result]
        json.dump(document, f, indent=2)
        f.write('\n')

    _write(path, write_json if config.format == 'json' else write_csv)


def read_config_from_json(path: str) -> RunConfig:
    """
    Rebuild the RunConfig echoed into a JSON output file.
    """
    with open(path) as f:
        return RunConfig.from_dict(json.load(f)['config'])
