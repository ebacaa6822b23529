"""
Equilibria of the reduced mean-field flow and how they reorganize with the
coupling ratio r, plus the localization sweep over r.

Equilibria have y2 = 0 and z1 = x2 + 2/3, and sit where the hyperbola

    4 x2 + 2/3 - z2 - (3/r) z2 x2 = 0

crosses the ellipse

    2 (x2 + 1/6)^2 + z2^2 = 1/2.
"""
import concurrent.futures
import functools
import logging
import math
from collections import namedtuple

# External modules
import numpy as np
from scipy.optimize import brentq

# tribec modules
from .exceptions import BracketError, InvalidParameter, ToleranceExceeded
from .semiclassical import (
    constants_of_motion,
    initial_reduced_state,
    integrate,
    solution_curve,
)
from .util import default_worker_count

FixedPoint = namedtuple(
    'FixedPoint',
    ['r', 'x2', 'z2', 'kind', 'hyperbola_residual', 'ellipse_residual'])

CENTER = 'center'
SADDLE = 'saddle'
MARGINAL = 'marginal'

RESIDUAL_TOLERANCE = 1e-10
MARGINAL_TOLERANCE = 1e-7
ROOT_XTOL = 1e-14
DEFAULT_HORIZON = 100.0
DEFAULT_DT_OUT = 0.05

# The |e1> orbit sits exactly on the separatrix here.
CRITICAL_RATIO = 1.0 / 3.0
BOUNDARY_TOLERANCE = 1e-12

logger = logging.getLogger('tribec.analysis')


def _check_ratio(r: float):
    if not r > 0 or not math.isfinite(r):
        raise InvalidParameter(name='r', value=r, reason="must be positive")


def hyperbola_residual(x2: float, z2: float, r: float) -> float:
    return 4.0 * x2 + 2.0 / 3.0 - z2 - (3.0 / r) * z2 * x2


def ellipse_residual(x2: float, z2: float) -> float:
    return 2.0 * (x2 + 1.0 / 6.0) ** 2 + z2 ** 2 - 0.5


def cubic_coefficients(r: float) -> tuple:
    """
    (c3, c2, c1, c0) of the cubic whose roots are the z2 of every equilibrium
    other than the z2 = 2/3 family.
    """
    return (1.0, (2.0 / 3.0) * (1.0 - 4.0 * r), -2.0 * r * (1.0 - r), 4.0 * r ** 2 / 3.0)


def fixed_point_polynomial(r: float) -> np.polynomial.Polynomial:
    """
    Quartic in z2: (z2 - 2/3) times the cubic factor.
    """
    c3, c2, c1, c0 = cubic_coefficients(r)
    cubic = np.polynomial.Polynomial([c0, c1, c2, c3])
    return np.polynomial.Polynomial([-2.0 / 3.0, 1.0]) * cubic


def cubic_discriminant(r: float) -> float:
    """
    Positive when the cubic factor has three distinct real roots, negative
    when it has one.
    """
    a, b, c, d = cubic_coefficients(r)
    return (
        18 * a * b * c * d
        - 4 * b ** 3 * d
        + b ** 2 * c ** 2
        - 4 * a * c ** 3
        - 27 * a ** 2 * d ** 2)


def _newton_polish(x2: float, z2: float, r: float, *, iterations: int = 8) -> tuple:
    for _ in range(iterations):
        residual = np.array([hyperbola_residual(x2, z2, r), ellipse_residual(x2, z2)])
        jacobian = np.array([
            [4.0 - 3.0 * z2 / r, -1.0 - 3.0 * x2 / r],
            [4.0 * (x2 + 1.0 / 6.0), 2.0 * z2],
        ])
        try:
            dx, dz = np.linalg.solve(jacobian, -residual)
        except np.linalg.LinAlgError:
            break
        x2, z2 = x2 + dx, z2 + dz
        if abs(dx) + abs(dz) < 1e-16:
            break
    return (x2, z2)


def _is_duplicate(point: tuple, accepted: list, tolerance: float = 1e-8) -> bool:
    return any(
        abs(point[0] - x2) <= tolerance and abs(point[1] - z2) <= tolerance
        for x2, z2 in accepted)


def _make_point(x2: float, z2: float, r: float) -> FixedPoint:
    point = FixedPoint(
        r=r,
        x2=float(x2),
        z2=float(z2),
        kind=None,
        hyperbola_residual=float(hyperbola_residual(x2, z2, r)),
        ellipse_residual=float(ellipse_residual(x2, z2)))
    return point._replace(kind=classify(point, r))


def fixed_points(r: float) -> list:
    """
    All equilibria at coupling ratio r, sorted by (x2, z2).

    Roots of the quartic are only candidates: each real z2 is mapped to both
    x2 on the ellipse, and a pair is kept only if it also lies on the
    hyperbola. Point A (x2 = 0, z2 = 2/3) is always among them.
    """
    _check_ratio(r)

    accepted = []
    for root in fixed_point_polynomial(r).roots():
        if abs(root.imag) > 1e-6 * max(1.0, abs(root.real)):
            continue
        z2 = float(root.real)
        half_width_squared = (0.5 - z2 ** 2) / 2.0
        if half_width_squared < -1e-12:
            continue
        half_width = math.sqrt(max(half_width_squared, 0.0))

        for x2 in (-1.0 / 6.0 + half_width, -1.0 / 6.0 - half_width):
            if abs(hyperbola_residual(x2, z2, r)) > 1e-6:
                continue
            candidate = _newton_polish(x2, z2, r)
            if (abs(hyperbola_residual(*candidate, r)) > RESIDUAL_TOLERANCE
                    or abs(ellipse_residual(*candidate)) > RESIDUAL_TOLERANCE):
                logger.debug(
                    "r={r}: dropped candidate x2={x}, z2={z}".format(r=r, x=candidate[0], z=candidate[1]))
                continue
            if not _is_duplicate(candidate, accepted):
                accepted.append(candidate)

    points = [_make_point(x2, z2, r) for x2, z2 in sorted(accepted)]
    logger.debug("r={r}: {n} fixed points".format(r=r, n=len(points)))
    return points


def stiffness(point: FixedPoint, r: float) -> float:
    """
    d(dy2/dtau)/dx2 of the flow restricted to the constraint surface at an
    equilibrium. The linearization is [[0, -2], [k, 0]], so the eigenvalues
    are +-sqrt(-2 k).
    """
    x2, z2 = point.x2, point.z2
    dz2_dx2 = -2.0 * (x2 + 1.0 / 6.0) / z2
    return 4.0 - dz2_dx2 * (1.0 + 3.0 * x2 / r) - 3.0 * z2 / r


def classify(point: FixedPoint, r: float) -> str:
    """
    center, saddle, or marginal when the linearization is degenerate.
    """
    k = stiffness(point, r)
    if abs(k) <= MARGINAL_TOLERANCE:
        return MARGINAL
    return CENTER if k > 0 else SADDLE


def tangency_r(lower: float = 0.5, upper: float = 0.52) -> float:
    """
    The ratio at which two roots of the cubic factor merge; above it only
    A and the third-quadrant center survive.
    """
    d_lower, d_upper = cubic_discriminant(lower), cubic_discriminant(upper)
    if d_lower * d_upper > 0:
        raise BracketError(what='cubic discriminant root', lower=lower, upper=upper)
    r = brentq(cubic_discriminant, lower, upper, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    logger.debug("Tangency at r={r:.12f}".format(r=r))
    return r


def tangency_point(r: float = None) -> FixedPoint:
    """
    The merging equilibrium itself: the real double root of the cubic at the
    tangency ratio.
    """
    if r is None:
        r = tangency_r()
    c3, c2, c1, c0 = cubic_coefficients(r)
    cubic = np.polynomial.Polynomial([c0, c1, c2, c3])
    turning = [z.real for z in cubic.deriv().roots() if abs(z.imag) < 1e-12]
    z2 = min(turning, key=lambda z: abs(cubic(z)))
    x2 = r * (z2 - 2.0 / 3.0) / (4.0 * r - 3.0 * z2)
    return _make_point(x2, z2, r)


def _double_root_condition(r: float) -> float:
    """
    f'(u) at the u where f = 0 and f' = 0 would hold together, with
    u = x2 + r/3. Vanishes at the r where the |e1> orbit has a double root.
    """
    curve = solution_curve(r)
    discriminant = 4.0 * curve.a ** 2 - 3.0 * curve.b
    if discriminant < 0:
        return math.nan
    u_squared = (4.0 * r / 9.0) * (curve.a - math.sqrt(discriminant))
    if u_squared < 0:
        return math.nan
    return curve.f_prime_of_x2(math.sqrt(u_squared) - r / 3.0)


def critical_r_localization(
        *,
        lower: float = 0.3,
        upper: float = 0.36,
        samples: int = 121,
        cross_check: bool = False,
        workers: int = None) -> float:
    """
    The ratio below which the |e1> orbit stays trapped at x2 < 0.

    Found as the r where the orbit's y2^2 = f(x2) curve picks up a double
    root: scan [lower, upper] for a sign change and refine with Brent's
    method. With `cross_check`, also sweep trajectories across the result
    and insist the localization flag flips there.
    """
    grid = np.linspace(lower, upper, samples)
    values = [_double_root_condition(r) for r in grid]

    bracket = None
    for (r0, v0), (r1, v1) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if math.isnan(v0) or math.isnan(v1):
            continue
        if v0 == 0:
            return float(r0)
        if v0 * v1 < 0:
            bracket = (r0, r1)
            break
    if bracket is None:
        raise BracketError(what='localization threshold', lower=lower, upper=upper)

    r_star = brentq(_double_root_condition, *bracket, xtol=ROOT_XTOL)
    logger.debug("Analytic localization threshold r*={r:.12f}".format(r=r_star))

    if cross_check:
        step = 1e-3
        grid = [round(r_star + i * step, 12) for i in range(-3, 4) if i != 0]
        result = sweep_r(grid, workers=workers)
        transition = result.transition()
        if transition is None or not transition[0] < r_star < transition[1]:
            raise ToleranceExceeded(
                diagnostic='localization threshold mismatch',
                value=r_star,
                tolerance=step)
        logger.info(
            "Trajectory sweep places the localization threshold in ({lo}, {hi}).".format(
                lo=transition[0], hi=transition[1]))

    return r_star


def separatrix_levels(r: float) -> list:
    """
    (saddle, h) for every saddle at r, where h is the energy-like constant
    of the orbits through it.
    """
    levels = []
    for point in fixed_points(r):
        if point.kind != SADDLE:
            continue
        state = (point.x2, 0.0, point.x2 + 2.0 / 3.0, point.z2)
        levels.append((point, constants_of_motion(state, r)[0]))
    return levels


def oracle_fixed_points(r: float, *, samples: int = 200000) -> list:
    """
    Brute-force equilibria: walk the ellipse on a fine angular grid, bracket
    every sign change of the hyperbola residual and refine it. Independent
    of the quartic, and used to cross-check fixed_points().
    """
    _check_ratio(r)

    def residual_at(theta):
        x2 = -1.0 / 6.0 + 0.5 * math.cos(theta)
        z2 = math.sqrt(0.5) * math.sin(theta)
        return hyperbola_residual(x2, z2, r)

    thetas = np.linspace(0.0, 2.0 * math.pi, samples + 1)
    x2 = -1.0 / 6.0 + 0.5 * np.cos(thetas)
    z2 = math.sqrt(0.5) * np.sin(thetas)
    residuals = hyperbola_residual(x2, z2, r)

    found = []
    for i in np.flatnonzero(np.sign(residuals[:-1]) * np.sign(residuals[1:]) <= 0):
        if residuals[i] == 0:
            theta = thetas[i]
        elif residuals[i + 1] == 0:
            continue
        else:
            theta = brentq(residual_at, thetas[i], thetas[i + 1], xtol=1e-15)
        candidate = _newton_polish(
            -1.0 / 6.0 + 0.5 * math.cos(theta), math.sqrt(0.5) * math.sin(theta), r)
        if not _is_duplicate(candidate, found):
            found.append(candidate)

    return [_make_point(x2, z2, r) for x2, z2 in sorted(found)]


SweepEntry = namedtuple('SweepEntry', ['r', 'fixed_points', 'max_x2', 'localized', 'error'])


class SweepResult:
    """
    Per-ratio fixed points and |e1> localization, in grid order.

    `localized` is None for an entry that failed or for r = 1/3, where the
    orbit lies on the separatrix.
    """

    def __init__(self, *, r_grid, entries: list, horizon: float):
        self.r_grid = tuple(r_grid)
        self.entries = list(entries)
        self.horizon = horizon

    @property
    def failures(self) -> list:
        return [entry for entry in self.entries if entry.error is not None]

    def transition(self) -> tuple:
        """
        (last localized r, first delocalized r) around the first flip, or
        None if the flag never flips.
        """
        flagged = [e for e in self.entries if e.localized is not None]
        for before, after in zip(flagged, flagged[1:]):
            if before.localized and not after.localized:
                return (before.r, after.r)
        return None

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def is_boundary(r: float) -> bool:
    return abs(r - CRITICAL_RATIO) < BOUNDARY_TOLERANCE


def sweep_entry(*, r: float, horizon: float, dt_out: float) -> SweepEntry:
    try:
        _check_ratio(r)
        points = fixed_points(r)
        count = int(round(horizon / dt_out))
        times = np.linspace(0.0, count * dt_out, count + 1)
        trajectory = integrate(initial_reduced_state(), r, times)
        max_x2 = trajectory.max_x2
    except Exception as e:
        logger.debug("Sweep entry r={r} failed: {e}".format(r=r, e=e))
        return SweepEntry(r=r, fixed_points=[], max_x2=math.nan, localized=None, error=e)

    localized = None if is_boundary(r) else bool(max_x2 < 0)
    return SweepEntry(r=r, fixed_points=points, max_x2=max_x2, localized=localized, error=None)


def run_against_ratios(*, partial_func: functools.partial, ratios: list, workers: int) -> list:
    """
    Run a function concurrently for each coupling ratio and return the
    results in the order of `ratios`.

    This function assumes that partial_func accepts `r` as a keyword argument.
    """
    if not ratios:
        return []
    with concurrent.futures.ThreadPoolExecutor(max(1, min(workers, len(ratios)))) as executor:
        futures = [
            executor.submit(functools.partial(partial_func, r=r))
            for r in ratios
        ]
        concurrent.futures.wait(futures)
        return [future.result() for future in futures]


def sweep_r(
        r_grid,
        horizon: float = DEFAULT_HORIZON,
        *,
        dt_out: float = DEFAULT_DT_OUT,
        workers: int = None) -> SweepResult:
    """
    Fixed points and |e1> localization for every r in the grid.

    A failing entry keeps its exception in `error` and does not stop the
    sweep.
    """
    if horizon <= 0:
        raise InvalidParameter(name='horizon', value=horizon, reason="must be positive")
    if dt_out <= 0:
        raise InvalidParameter(name='dt_out', value=dt_out, reason="must be positive")

    r_grid = list(r_grid)
    workers = workers or default_worker_count()
    logger.info("Sweeping {n} ratios with {w} workers...".format(n=len(r_grid), w=workers))

    entries = run_against_ratios(
        partial_func=functools.partial(sweep_entry, horizon=horizon, dt_out=dt_out),
        ratios=r_grid,
        workers=workers)

    result = SweepResult(r_grid=r_grid, entries=entries, horizon=horizon)
    if result.failures:
        logger.warning("{n} of {t} sweep entries failed.".format(n=len(result.failures), t=len(r_grid)))
    return result
