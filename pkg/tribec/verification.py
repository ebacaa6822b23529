"""
Self-checks behind `tribec verify`: operator identities, Casimir, ground
states and mean-field conservation, each reduced to one number compared
against a tolerance.
"""
import logging
from collections import namedtuple

# External modules
import numpy as np

# tribec modules
from .exceptions import Error
from .fock_basis import build_basis
from .quantum_dynamics import state_e
from .semiclassical import (
    conservation_drift,
    initial_reduced_state,
    integrate,
    solution_curve,
)
from .su3_operators import (
    ModelParams,
    casimir,
    casimir_value,
    generator,
    hamiltonian_reduced,
    identity,
    identity_sides,
    max_abs,
)

DEFAULT_ATOM_COUNTS = (1, 2, 5, 50)
DEFAULT_RATIOS = (0.283, 0.4, 0.506)
DEFAULT_HORIZON = 100.0

OPERATOR_TOLERANCE = 1e-10
CONSERVATION_TOLERANCE = 1e-9
CURVE_TOLERANCE = 1e-7

logger = logging.getLogger('tribec.verification')


class Check(namedtuple('Check', ['name', 'value', 'tolerance'])):
    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)

    def __str__(self):
        return '{status}  {name:<40} {value:.3e} (tolerance {tol:.0e})'.format(
            status='PASS' if self.passed else 'FAIL',
            name=self.name,
            value=self.value,
            tol=self.tolerance)


def operator_checks(total_n: int) -> list:
    basis = build_basis(total_n)
    checks = []

    for k, (left, right) in identity_sides(basis).items():
        scale = max(1.0, max_abs(right))
        checks.append(Check(
            name='identity {k}, N={n}'.format(k=k, n=total_n),
            value=max_abs(left - right) / scale,
            tolerance=OPERATOR_TOLERANCE))

    expected = casimir_value(total_n)
    residual = max_abs((casimir(basis) - identity(basis) * expected).matrix)
    checks.append(Check(
        name='Casimir, N={n}'.format(n=total_n),
        value=residual / max(1.0, expected),
        tolerance=OPERATOR_TOLERANCE))
    return checks


def ground_state_checks(total_n: int) -> list:
    """
    Without tunneling and with chi = -1, every all-in-one-well state is an
    eigenstate with energy 2 chi N^2 / 3, and Yk^2 + Zk^2 has expectation
    2N on the two pairs touching the occupied well and 0 on the other.
    """
    basis = build_basis(total_n)
    params = ModelParams(total_n=total_n, big_omega=0.0, chi=-1.0)
    hamiltonian = hamiltonian_reduced(basis, params).matrix
    energy = 2.0 * params.chi * total_n ** 2 / 3.0

    checks = []
    for which in (1, 2, 3):
        state = state_e(basis, which).amplitudes
        residual = np.linalg.norm(hamiltonian @ state - energy * state)
        checks.append(Check(
            name='ground energy e{w}, N={n}'.format(w=which, n=total_n),
            value=residual / max(1.0, abs(energy)),
            tolerance=OPERATOR_TOLERANCE))

        for k in (1, 2, 3):
            y = generator(basis, 'Y{}'.format(k)).matrix
            z = generator(basis, 'Z{}'.format(k)).matrix
            found = np.vdot(state, (y @ y + z @ z) @ state).real
            expected = 0.0 if k == which else 2.0 * total_n
            checks.append(Check(
                name='<e{w}|Y{k}^2 + Z{k}^2|e{w}>, N={n}'.format(w=which, k=k, n=total_n),
                value=abs(found - expected) / max(1.0, 2.0 * total_n),
                tolerance=OPERATOR_TOLERANCE))
    return checks


def conservation_checks(r: float, horizon: float = DEFAULT_HORIZON) -> list:
    times = np.linspace(0.0, horizon, int(round(horizon / 0.05)) + 1)
    try:
        trajectory = integrate(initial_reduced_state(), r, times)
    except Error as e:
        logger.debug("Integration at r={r} failed: {e}".format(r=r, e=e))
        return [Check(name='integration, r={r}'.format(r=r), value=np.inf, tolerance=0.0)]

    h_drift, n_drift = conservation_drift(trajectory)
    curve = solution_curve(r)
    x2 = trajectory.column('x2')
    curve_residual = max(
        np.abs(trajectory.column('y2') ** 2 - curve.f_of_x2(x2)).max(),
        np.abs(trajectory.column('z2') - curve.z2_of_x2(x2)).max())

    return [
        Check(name='energy drift, r={r}'.format(r=r), value=h_drift, tolerance=CONSERVATION_TOLERANCE),
        Check(name='number drift, r={r}'.format(r=r), value=n_drift, tolerance=CONSERVATION_TOLERANCE),
        Check(name='solution curve, r={r}'.format(r=r), value=curve_residual, tolerance=CURVE_TOLERANCE),
    ]


def run_checks(
        *,
        atom_counts=DEFAULT_ATOM_COUNTS,
        ratios=DEFAULT_RATIOS,
        horizon: float = DEFAULT_HORIZON) -> list:
    checks = []
    for total_n in atom_counts:
        logger.debug("Checking operators at N={n}...".format(n=total_n))
        checks.extend(operator_checks(total_n))
    if atom_counts:
        checks.extend(ground_state_checks(max(atom_counts)))
    for r in ratios:
        logger.debug("Checking conservation at r={r}...".format(r=r))
        checks.extend(conservation_checks(r, horizon))
    return checks
