import pytest

# tribec modules
from tribec.exceptions import InvalidParameter
from tribec.util import default_worker_count, parse_ratio_grid


def test_parse_ratio_list():
    assert parse_ratio_grid('0.2, 0.283,0.5') == [0.2, 0.283, 0.5]
    assert parse_ratio_grid([0.2, 0.5]) == [0.2, 0.5]
    assert parse_ratio_grid('') == []
    assert parse_ratio_grid('  ') == []


def test_parse_ratio_range():
    assert parse_ratio_grid('0.330:0.337:0.001') == [
        0.33, 0.331, 0.332, 0.333, 0.334, 0.335, 0.336, 0.337]
    assert parse_ratio_grid('0.5:0.5:0.1') == [0.5]


@pytest.mark.parametrize('spec', [
    '0.2,abc',
    '0.1:0.2',
    '0.1:0.2:0',
    '0.2,-0.1',
    '0,0.5',
])
def test_parse_ratio_grid_errors(spec):
    with pytest.raises(InvalidParameter):
        parse_ratio_grid(spec)


def test_default_worker_count():
    assert default_worker_count() >= 1
