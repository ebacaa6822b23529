import json
import math

import pytest

# tribec modules
from tribec.analysis import SweepEntry, SweepResult, fixed_points
from tribec.config import DEFAULTS
from tribec.exceptions import InvalidParameter, OutputError
from tribec.output import (
    SWEEP_COLUMNS,
    format_float,
    read_config_from_json,
    write_fixed_points,
    write_series,
)
from tribec.semiclassical import initial_reduced_state, integrate

SEMICLASSICAL = DEFAULTS._replace(
    mode='semiclassical', r=0.45, t_max=1.0, dt_out=0.25, observables=('x2', 'y2', 'z1', 'z2'))
FIXED_POINTS = DEFAULTS._replace(mode='fixed-points', r=1.0, observables=())
SWEEP = DEFAULTS._replace(mode='sweep', r=None, r_grid=(0.2, 0.5), observables=())


@pytest.fixture(scope='module')
def trajectory():
    return integrate(initial_reduced_state(), 0.45, SEMICLASSICAL.times())


def read_lines(path):
    with open(path) as f:
        return f.read().splitlines()


def test_format_float():
    assert format_float(0.1) == '0.1'
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(2) == '2.0'


def test_trajectory_csv(tmp_path, trajectory):
    path = str(tmp_path / 'orbit.csv')
    write_series(trajectory, SEMICLASSICAL, path=path)

    lines = read_lines(path)
    assert lines[0] == 'tau,x2,y2,z1,z2'
    assert len(lines) == 1 + len(trajectory)
    first = [float(field) for field in lines[1].split(',')]
    assert first == [0.0, -2 / 3, 0.0, 0.0, 0.0]

    last = [float(field) for field in lines[-1].split(',')]
    assert last[1:] == trajectory.values[-1].tolist()


def test_output_is_deterministic(tmp_path):
    paths = [str(tmp_path / name) for name in ('a.csv', 'b.csv')]
    for path in paths:
        write_series(integrate(initial_reduced_state(), 0.45, SEMICLASSICAL.times()), SEMICLASSICAL, path=path)
    with open(paths[0], 'rb') as a, open(paths[1], 'rb') as b:
        assert a.read() == b.read()


def test_series_json_round_trip(tmp_path, trajectory):
    config = SEMICLASSICAL._replace(format='json')
    path = str(tmp_path / 'orbit.json')
    write_series(trajectory, config, path=path)

    with open(path) as f:
        document = json.load(f)
    assert document['labels'] == ['x2', 'y2', 'z1', 'z2']
    assert document['tau'] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert document['columns']['x2'] == trajectory.column('x2').tolist()
    assert read_config_from_json(path) == config


def test_series_goes_to_config_output(tmp_path, trajectory):
    path = str(tmp_path / 'from-config.csv')
    write_series(trajectory, SEMICLASSICAL._replace(output=path))
    assert read_lines(path)[0] == 'tau,x2,y2,z1,z2'


def test_fixed_points_csv(tmp_path):
    path = str(tmp_path / 'points.csv')
    write_fixed_points(fixed_points(1.0), FIXED_POINTS, path=path)

    lines = read_lines(path)
    assert lines[0] == 'r,x2,z2,kind,residual24,residual25'
    assert len(lines) == 3
    residuals = [float(v) for line in lines[1:] for v in line.split(',')[4:]]
    assert max(abs(v) for v in residuals) <= 1e-10
    assert [line.split(',')[3] for line in lines[1:]] == ['center', 'center']


def test_fixed_points_json(tmp_path):
    path = str(tmp_path / 'points.json')
    write_fixed_points(fixed_points(0.45), FIXED_POINTS._replace(r=0.45, format='json'), path=path)

    with open(path) as f:
        document = json.load(f)
    assert len(document['fixed_points']) == 4
    assert sum(p['kind'] == 'saddle' for p in document['fixed_points']) == 1
    assert set(document['fixed_points'][0]) == {'x2', 'z2', 'kind', 'residual24', 'residual25'}
    assert document['config']['r'] == 0.45


def test_empty_sweep_is_header_only(tmp_path):
    path = str(tmp_path / 'sweep.csv')
    write_fixed_points(SweepResult(r_grid=[], entries=[], horizon=100.0), SWEEP, path=path)
    assert read_lines(path) == [','.join(SWEEP_COLUMNS)]
    assert SWEEP_COLUMNS[-2:] == ('max_x2', 'localized')


def test_sweep_rows(tmp_path):
    points = fixed_points(1.0)
    result = SweepResult(
        r_grid=[1.0, -1.0, 1 / 3],
        entries=[
            SweepEntry(r=1.0, fixed_points=points, max_x2=0.25, localized=False, error=None),
            SweepEntry(
                r=-1.0, fixed_points=[], max_x2=math.nan, localized=None,
                error=InvalidParameter(name='r', value=-1.0, reason="must be positive")),
            SweepEntry(r=1 / 3, fixed_points=[], max_x2=0.0, localized=None, error=None),
        ],
        horizon=100.0)

    path = str(tmp_path / 'sweep.csv')
    write_fixed_points(result, SWEEP, path=path)
    rows = [line.split(',') for line in read_lines(path)[1:]]
    assert [row[-1] for row in rows] == ['false', 'false', 'error', 'boundary']
    assert rows[2][1:6] == [''] * 5

    path = str(tmp_path / 'sweep.json')
    write_fixed_points(result, SWEEP._replace(format='json'), path=path)
    with open(path) as f:
        entries = json.load(f)['entries']
    assert entries[1]['max_x2'] is None
    assert 'must be positive' in entries[1]['error']
    assert len(entries[0]['fixed_points']) == 2


def test_unwritable_path(tmp_path, trajectory):
    path = str(tmp_path / 'missing' / 'orbit.csv')
    with pytest.raises(OutputError) as e:
        write_series(trajectory, SEMICLASSICAL, path=path)
    assert e.value.path == path
