"""
Mean-field dynamics of the three condensates on the symmetric manifold
x1 = 0, y1 = 0, y2 = -y3, z2 = z3, where only (x2, y2, z1, z2) evolve.

All variables are generator expectation values divided by N. Time is
tau = Omega t with signed Omega, which turns chi N into Omega / r.
"""
import logging
import math
from collections import namedtuple

# External modules
import numpy as np
from scipy.integrate import solve_ivp

# tribec modules
from .exceptions import Error, InvalidParameter, ToleranceExceeded
from .quantum_dynamics import TimeSeries

ReducedState = namedtuple('ReducedState', ['x2', 'y2', 'z1', 'z2'])

STATE_LABELS = ReducedState._fields

# (x1, x2) of the three all-atoms-in-one-well states.
GROUND_STATE_CORRESPONDENCE = {
    'e1': (0.0, -2.0 / 3.0),
    'e2': (1.0, 1.0 / 3.0),
    'e3': (-1.0, 1.0 / 3.0),
}

RTOL = 1e-12
ATOL = 1e-12
CONSERVATION_TOLERANCE = 1e-9
CONSTRAINT_TOLERANCE = 1e-8
INITIAL_CONSTRAINT_TOLERANCE = 1e-9

logger = logging.getLogger('tribec.semiclassical')


def initial_reduced_state() -> ReducedState:
    """
    The mean-field image of |e1>: every atom in the third well.
    """
    return ReducedState(x2=-2.0 / 3.0, y2=0.0, z1=0.0, z2=0.0)


def _check_ratio(r: float, *, allow_zero: bool):
    if r < 0 or (r == 0 and not allow_zero) or not math.isfinite(r):
        raise InvalidParameter(
            name='r',
            value=r,
            reason="must be {}".format("non-negative" if allow_zero else "positive"))


def reduced_rhs(state, r: float) -> ReducedState:
    """
    d/dtau of (x2, y2, z1, z2) with tau = Omega t.

    r = 0 has no tunneling and so no tau; it falls back to the unscaled
    equations with Omega = 0 and chi N = 1, i.e. time measured in units of
    1 / (chi N).
    """
    _check_ratio(r, allow_zero=True)
    if r == 0:
        return reduced_rhs_unscaled(state, big_omega=0.0, chi_n=1.0)

    x2, y2, z1, z2 = state
    return ReducedState(
        x2=-2.0 * y2,
        y2=3.0 * x2 + z1 - z2 - (3.0 / r) * z2 * x2,
        z1=-2.0 * y2,
        z2=y2 + (3.0 / r) * x2 * y2)


def reduced_rhs_unscaled(state, *, big_omega: float, chi_n: float) -> ReducedState:
    """
    d/dt of (x2, y2, z1, z2) with explicit tunneling Omega and collective
    interaction chi N.
    """
    x2, y2, z1, z2 = state
    return ReducedState(
        x2=-2.0 * big_omega * y2,
        y2=big_omega * (3.0 * x2 + z1 - z2) - 3.0 * chi_n * z2 * x2,
        z1=-2.0 * big_omega * y2,
        z2=big_omega * y2 + 3.0 * chi_n * x2 * y2)


def constants_of_motion(state, r: float) -> tuple:
    """
    (h, n): the energy H / (Omega N^2) and the number-like invariant, which
    is 4/3 on every physical state.
    """
    _check_ratio(r, allow_zero=False)
    x2, y2, z1, z2 = state
    h = z1 + 2.0 * z2 + (3.0 / (2.0 * r)) * x2 ** 2
    n = 3.0 * x2 ** 2 + 2.0 * (y2 ** 2 + z2 ** 2) + z1 ** 2
    return (h, n)


def constraint_residuals(state) -> tuple:
    """
    Residuals of z1 = x2 + 2/3 and 2 (x2 + 1/6)^2 + y2^2 + z2^2 = 1/2.
    """
    x2, y2, z1, z2 = state
    return (
        z1 - (x2 + 2.0 / 3.0),
        2.0 * (x2 + 1.0 / 6.0) ** 2 + y2 ** 2 + z2 ** 2 - 0.5)


class SolutionCurve:
    """
    Closed-form orbit of the |e1> initial condition as a function of x2:
    z1(x2), z2(x2) and y2^2 = f(x2).
    """

    def __init__(self, r: float):
        _check_ratio(r, allow_zero=False)
        self.r = r
        self.a = -4.0 * r / 3.0 + (r - 2.0) ** 2 / (12.0 * r)
        self.b = (4.0 * r / 3.0) ** 2 - (2.0 / 9.0) * (2.0 * r - 1.0) * (r - 2.0)

    def z1_of_x2(self, x2):
        return x2 + 2.0 / 3.0

    def z2_of_x2(self, x2):
        r = self.r
        return -x2 / 2.0 - 3.0 * x2 ** 2 / (4.0 * r) + (-1.0 / 3.0 + 1.0 / (3.0 * r))

    def f_of_x2(self, x2):
        r = self.r
        u = x2 + r / 3.0
        return (
            -(self.a - u ** 2 * 3.0 / (4.0 * r)) ** 2
            + (2.0 * r / 3.0) * u * (2.0 - 1.0 / r)
            + self.b)

    def f_prime_of_x2(self, x2):
        r = self.r
        u = x2 + r / 3.0
        return (3.0 * u / r) * (self.a - 3.0 * u ** 2 / (4.0 * r)) + (2.0 / 3.0) * (2.0 * r - 1.0)

    def f_polynomial(self) -> np.polynomial.Polynomial:
        """
        f as a quartic in x2.
        """
        r = self.r
        u = np.polynomial.Polynomial([r / 3.0, 1.0])
        inner = self.a - (3.0 / (4.0 * r)) * u ** 2
        return -inner ** 2 + (2.0 / 3.0) * (2.0 * r - 1.0) * u + self.b

    def __repr__(self):
        return 'SolutionCurve(r={r}, a={a}, b={b})'.format(r=self.r, a=self.a, b=self.b)


def solution_curve(r: float) -> SolutionCurve:
    return SolutionCurve(r)


class Trajectory(TimeSeries):
    """
    A TimeSeries over the columns x2, y2, z1, z2, plus the turning points of
    x2 (where y2 = 0) found by event location between output times.
    """

    def __init__(self, *, r: float, times, values, turning_taus=(), turning_x2=()):
        super().__init__(times=times, labels=STATE_LABELS, values=values)
        self.r = r
        self.turning_taus = np.asarray(turning_taus, dtype=np.float64)
        self.turning_x2 = np.asarray(turning_x2, dtype=np.float64)

    @property
    def max_x2(self) -> float:
        candidates = [self.column('x2').max()] if len(self) else []
        if self.turning_x2.size:
            candidates.append(self.turning_x2.max())
        return float(max(candidates))

    @property
    def min_x2(self) -> float:
        candidates = [self.column('x2').min()] if len(self) else []
        if self.turning_x2.size:
            candidates.append(self.turning_x2.min())
        return float(min(candidates))


def _y2_crossing(tau, y, *args):
    return y[1]


def integrate(
        initial,
        r: float,
        times,
        *,
        omega_sign: int = -1,
        rtol: float = RTOL,
        atol: float = ATOL,
        conservation_tolerance: float = CONSERVATION_TOLERANCE,
        constraint_tolerance: float = CONSTRAINT_TOLERANCE) -> Trajectory:
    """
    Integrate from `initial` at tau = 0 and sample at `times` (tau = |Omega| t).

    Omega carries the sign `omega_sign`, so with the default attractive
    convention the flow runs backwards in Omega t. Uses the adaptive
    8th-order Dormand-Prince scheme. Both constants of motion and both
    constraints are audited at every output time; the first violation
    raises ToleranceExceeded.
    """
    _check_ratio(r, allow_zero=True)
    if omega_sign not in (-1, 1):
        raise InvalidParameter(name='omega_sign', value=omega_sign, reason="must be +1 or -1")

    initial = ReducedState(*map(float, initial))
    for name, residual in zip(('z1 constraint', 'sphere constraint'), constraint_residuals(initial)):
        if abs(residual) > INITIAL_CONSTRAINT_TOLERANCE:
            raise InvalidParameter(
                name='initial',
                value=tuple(initial),
                reason="{n} violated by {v:.3e}".format(n=name, v=residual))

    times = np.asarray(times, dtype=np.float64)
    if times.size == 0:
        return Trajectory(r=r, times=times, values=np.empty((0, 4)))
    if times[0] < 0:
        raise InvalidParameter(name='times', value=float(times[0]), reason="must be non-negative")
    if times[-1] == 0:
        return Trajectory(r=r, times=times, values=np.tile(np.asarray(initial), (times.size, 1)))

    def rhs(tau, y):
        return omega_sign * np.asarray(reduced_rhs(y, r))

    solution = solve_ivp(
        rhs,
        (0.0, float(times[-1])),
        np.asarray(initial),
        method='DOP853',
        t_eval=times,
        events=_y2_crossing,
        rtol=rtol,
        atol=atol)
    if not solution.success:
        raise Error("Integration at r={r} failed: {m}".format(r=r, m=solution.message))

    values = solution.y.T
    trajectory = Trajectory(
        r=r,
        times=solution.t,
        values=values,
        turning_taus=solution.t_events[0],
        turning_x2=solution.y_events[0][:, 0] if len(solution.y_events[0]) else ())

    _audit(
        trajectory,
        initial,
        conservation_tolerance=conservation_tolerance,
        constraint_tolerance=constraint_tolerance)
    return trajectory


def _first_violation(times, deviations, tolerance, diagnostic):
    deviations = np.abs(deviations)
    if deviations.size and deviations.max() > tolerance:
        first = int(np.argmax(deviations > tolerance))
        raise ToleranceExceeded(
            diagnostic=diagnostic,
            value=float(deviations.max()),
            tolerance=tolerance,
            tau=float(times[first]))
    return float(deviations.max()) if deviations.size else 0.0


def _audit(trajectory: Trajectory, initial: ReducedState, *, conservation_tolerance, constraint_tolerance):
    columns = trajectory.values.T
    times = trajectory.times

    z1_residual, sphere_residual = constraint_residuals(columns)
    _first_violation(times, z1_residual, constraint_tolerance, 'z1 constraint residual')
    _first_violation(times, sphere_residual, constraint_tolerance, 'sphere constraint residual')

    n0 = constants_of_motion(initial, 1.0)[1]
    n = 3.0 * columns[0] ** 2 + 2.0 * (columns[1] ** 2 + columns[3] ** 2) + columns[2] ** 2
    n_drift = _first_violation(times, (n - n0) / abs(n0), conservation_tolerance, 'number drift')

    h_drift = 0.0
    if trajectory.r > 0:
        h0 = constants_of_motion(initial, trajectory.r)[0]
        h = constants_of_motion(columns, trajectory.r)[0]
        h_drift = _first_violation(
            times, (h - h0) / max(abs(h0), 1.0), conservation_tolerance, 'energy drift')

    logger.debug(
        "r={r}: energy drift {h:.2e}, number drift {n:.2e} over tau <= {t}".format(
            r=trajectory.r, h=h_drift, n=n_drift, t=times[-1]))


def conservation_drift(trajectory: Trajectory) -> tuple:
    """
    Max relative drift of (h, n) along a trajectory, measured from its first
    sample.
    """
    columns = trajectory.values.T
    h, n = constants_of_motion(columns, trajectory.r)
    h_drift = np.abs(h - h[0]).max() / max(abs(h[0]), 1.0)
    n_drift = np.abs(n - n[0]).max() / abs(n[0])
    return (float(h_drift), float(n_drift))
