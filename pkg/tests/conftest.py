import os
import subprocess
import sys

# tribec
from tribec.fock_basis import build_basis

# External
import pytest

long_runs_required = (
    pytest.mark.skipif(
        not bool(os.environ.get('TRIBEC_LONG_RUNS')),
        reason="TRIBEC_LONG_RUNS not set"))


@pytest.fixture(scope='session')
def project_root_dir():
    return os.path.dirname(
        os.path.dirname(
            os.path.realpath(__file__)
        )
    )


@pytest.fixture(scope='session')
def basis5():
    return build_basis(5)


@pytest.fixture(scope='session')
def basis50():
    return build_basis(50)


@pytest.fixture(scope='session')
def basis100():
    return build_basis(100)


@pytest.fixture
def empty_config(tmp_path):
    """
    An empty config file, so CLI tests never pick up a real user config.
    """
    path = tmp_path / 'config.yaml'
    path.write_text('')
    return str(path)


def run_tribec(*args, cwd):
    return subprocess.run(
        [sys.executable, '-m', 'tribec'] + list(args),
        cwd=cwd,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE)
