import cmath
import logging
import math

# External modules
import numpy as np

# tribec modules
from .exceptions import (
    BasisMismatch,
    InvalidParameter,
    NotHermitian,
    ToleranceExceeded,
)
from .fock_basis import FockBasis, index_of
from .su3_operators import (
    ModelParams,
    OperatorMatrix,
    angular_momentum,
    generator,
    hamiltonian_reduced,
)

NORM_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12

# Number of output times propagated together; bounds the dimension x chunk
# work array.
TIME_CHUNK = 256

STATE_LABELS = ('e1', 'e2', 'e3', 'g1', 'g2', 'g3')

logger = logging.getLogger('tribec.quantum_dynamics')


class QuantumState:
    def __init__(self, *, basis: FockBasis, amplitudes, label: str = ''):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (basis.dimension,):
            raise BasisMismatch(
                expected=basis.total_n,
                found=-1,
                what="State vector of length {}".format(amplitudes.shape[0]))
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise InvalidParameter(name='amplitudes', value=norm, reason="state must have unit norm")

        self.basis = basis
        self.amplitudes = amplitudes
        self.label = label

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: 'QuantumState') -> complex:
        """
        <self|other>
        """
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return 'QuantumState(label={lbl!r}, dimension={d})'.format(
            lbl=self.label, d=self.basis.dimension)


class TimeSeries:
    """
    Expectation values recorded at increasing dimensionless times.

    values[i, j] is observable labels[j] at times[i].
    """

    def __init__(self, *, times, labels, values):
        times = np.asarray(times, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64).reshape(len(times), len(labels))
        if np.any(np.diff(times) <= 0):
            raise InvalidParameter(name='times', value=times, reason="must be strictly increasing")

        self.times = times
        self.labels = tuple(labels)
        self.values = values

    def column(self, label: str) -> np.ndarray:
        try:
            return self.values[:, self.labels.index(label)]
        except ValueError:
            raise InvalidParameter(
                name='label',
                value=label,
                reason="series records {}".format(', '.join(self.labels))) from None

    @property
    def records(self) -> list:
        return [dict(zip(self.labels, row)) for row in self.values.tolist()]

    def __len__(self):
        return len(self.times)


def _unit_vector(basis: FockBasis, n1: int, n2: int) -> np.ndarray:
    vector = np.zeros(basis.dimension, dtype=np.complex128)
    vector[index_of(basis, n1, n2)] = 1.0
    return vector


def state_e(basis: FockBasis, which: int) -> QuantumState:
    """
    All atoms in one well: |e1> = |0,0,N>, |e2> = |N,0,0>, |e3> = |0,N,0>.
    """
    n = basis.total_n
    occupations = {1: (0, 0), 2: (n, 0), 3: (0, n)}
    if which not in occupations:
        raise InvalidParameter(name='which', value=which, reason="expected 1, 2 or 3")
    return QuantumState(
        basis=basis,
        amplitudes=_unit_vector(basis, *occupations[which]),
        label='e{}'.format(which))


def state_g(basis: FockBasis, which: int) -> QuantumState:
    """
    Equal-weight superpositions of |e1>, |e2>, |e3> with relative phases
    exp(+-2 pi i / 3). |g2> and |g3> carry opposite circulation.
    """
    if basis.total_n < 1:
        raise InvalidParameter(name='n_atoms', value=basis.total_n, reason="|g> states need N >= 1")

    w = cmath.exp(2j * math.pi / 3)
    phases = {
        1: (1.0, 1.0, 1.0),
        2: (w.conjugate(), 1.0, w),
        3: (w.conjugate(), w, 1.0),
    }
    if which not in phases:
        raise InvalidParameter(name='which', value=which, reason="expected 1, 2 or 3")

    amplitudes = sum(
        phase * state_e(basis, i).amplitudes
        for i, phase in zip((1, 2, 3), phases[which])) / math.sqrt(3)
    return QuantumState(basis=basis, amplitudes=amplitudes, label='g{}'.format(which))


def initial_state(basis: FockBasis, label: str) -> QuantumState:
    if label not in STATE_LABELS:
        raise InvalidParameter(
            name='initial', value=label, reason="expected one of {}".format(', '.join(STATE_LABELS)))
    factory = state_e if label[0] == 'e' else state_g
    return factory(basis, int(label[1]))


def expectation(state: QuantumState, operator: OperatorMatrix) -> float:
    _check_same_basis(state.basis, operator)
    return float(np.vdot(state.amplitudes, operator.matrix @ state.amplitudes).real)


def variance(state: QuantumState, operator: OperatorMatrix) -> float:
    _check_same_basis(state.basis, operator)
    applied = operator.matrix @ state.amplitudes
    mean = np.vdot(state.amplitudes, applied).real
    return float(np.vdot(applied, applied).real - mean ** 2)


def _check_basis(expected: FockBasis, found: FockBasis, what: str):
    if found.total_n != expected.total_n:
        raise BasisMismatch(expected=expected.total_n, found=found.total_n, what=what)


def _check_same_basis(basis: FockBasis, operator: OperatorMatrix):
    _check_basis(basis, operator.basis, "Operator {}".format(operator.label))


def _check_hermitian(operator: OperatorMatrix):
    scale = max(1.0, float(abs(operator.matrix).max()) if operator.matrix.nnz else 0.0)
    asymmetry = operator.hermitian_residual()
    if asymmetry > HERMITIAN_TOLERANCE * scale:
        raise NotHermitian(label=operator.label, asymmetry=asymmetry)


class Propagator:
    """
    exp(-i H t) through one Hermitian eigendecomposition H = V diag(E) V^H.

    Times are dimensionless, tau = frequency_scale * t.
    """

    def __init__(self, hamiltonian: OperatorMatrix, *, frequency_scale: float = 1.0):
        _check_hermitian(hamiltonian)
        if frequency_scale <= 0:
            raise InvalidParameter(
                name='frequency_scale', value=frequency_scale, reason="must be positive")

        matrix = hamiltonian.matrix
        if matrix.imag.count_nonzero():
            dense = matrix.toarray()
        else:
            dense = matrix.real.toarray()

        logger.debug("Diagonalizing {d}x{d} Hamiltonian...".format(d=dense.shape[0]))
        self.energies, self.vectors = np.linalg.eigh(dense)
        self.basis = hamiltonian.basis
        self.frequency_scale = frequency_scale

    def phases(self, taus) -> np.ndarray:
        taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
        return np.exp(-1j * np.outer(self.energies, taus / self.frequency_scale))

    def evolve_many(self, state: QuantumState, taus) -> np.ndarray:
        """
        Columns are |psi(tau)> for each tau.
        """
        _check_basis(self.basis, state.basis, "State {}".format(state.label))
        coefficients = self.vectors.conj().T @ state.amplitudes
        return self.vectors @ (self.phases(taus) * coefficients[:, np.newaxis])

    def evolve(self, state: QuantumState, tau: float) -> QuantumState:
        amplitudes = self.evolve_many(state, [tau])[:, 0]
        # Unitary evolution keeps the norm; renormalizing only strips rounding.
        amplitudes = amplitudes / np.linalg.norm(amplitudes)
        return QuantumState(basis=state.basis, amplitudes=amplitudes, label=state.label)


def propagate(
        hamiltonian: OperatorMatrix,
        initial: QuantumState,
        times,
        observables: list,
        *,
        frequency_scale: float = 1.0,
        record_norm: bool = True,
        norm_tolerance: float = NORM_TOLERANCE) -> TimeSeries:
    """
    Evolve `initial` under `hamiltonian` and record <psi(tau)|O|psi(tau)> for
    each observable at each time.

    The norm is checked at every output time; drift beyond `norm_tolerance`
    raises ToleranceExceeded at the first offending time.
    """
    times = np.asarray(times, dtype=np.float64)
    if times.size and times.min() < 0:
        raise InvalidParameter(name='times', value=float(times.min()), reason="must be non-negative")

    _check_same_basis(initial.basis, hamiltonian)
    for operator in observables:
        _check_same_basis(initial.basis, operator)
        _check_hermitian(operator)

    propagator = Propagator(hamiltonian, frequency_scale=frequency_scale)

    labels = [operator.label for operator in observables]
    if record_norm:
        labels.append('norm')
    values = np.empty((len(times), len(labels)))

    for start in range(0, len(times), TIME_CHUNK):
        chunk = times[start:start + TIME_CHUNK]
        states = propagator.evolve_many(initial, chunk)
        for j, operator in enumerate(observables):
            values[start:start + len(chunk), j] = np.einsum(
                'ij,ij->j', states.conj(), operator.matrix @ states).real
        if record_norm:
            norms = np.linalg.norm(states, axis=0)
            values[start:start + len(chunk), -1] = norms
            drift = np.abs(norms - 1.0)
            if drift.max() > norm_tolerance:
                first = int(np.argmax(drift > norm_tolerance))
                raise ToleranceExceeded(
                    diagnostic='norm drift',
                    value=float(drift.max()),
                    tolerance=norm_tolerance,
                    tau=float(chunk[first]))

    logger.debug("Propagated {s} over {t} output times.".format(s=initial.label, t=len(times)))
    return TimeSeries(times=times, labels=labels, values=values)


def scaled(operator: OperatorMatrix, factor: float, label: str) -> OperatorMatrix:
    result = operator * factor
    result.label = label
    return result


def default_observables(basis: FockBasis, hamiltonian: OperatorMatrix) -> list:
    """
    x1_over_n, x2_over_n, ys_over_n and energy; propagate() adds norm.
    """
    if basis.total_n < 1:
        raise InvalidParameter(name='n_atoms', value=basis.total_n, reason="quantum runs need N >= 1")
    n = float(basis.total_n)
    energy = scaled(hamiltonian, 1.0, 'energy')
    return [
        scaled(generator(basis, 'X1'), 1.0 / n, 'x1_over_n'),
        scaled(generator(basis, 'X2'), 1.0 / n, 'x2_over_n'),
        scaled(angular_momentum(basis), 1.0 / n, 'ys_over_n'),
        energy,
    ]


OBSERVABLE_LABELS = ('x1_over_n', 'x2_over_n', 'ys_over_n', 'energy')


def select_observables(basis: FockBasis, hamiltonian: OperatorMatrix, labels) -> list:
    available = {o.label: o for o in default_observables(basis, hamiltonian)}
    selected = []
    for label in labels:
        if label == 'norm':
            continue
        if label not in available:
            raise InvalidParameter(
                name='observables',
                value=label,
                reason="expected some of {}".format(', '.join(OBSERVABLE_LABELS + ('norm',))))
        selected.append(available[label])
    return selected


def simulate(params: ModelParams, initial: QuantumState, times, observables=OBSERVABLE_LABELS) -> TimeSeries:
    """
    Propagate under the reduced Hamiltonian of `params` and record the named
    observables plus the norm.
    """
    hamiltonian = hamiltonian_reduced(initial.basis, params)
    return propagate(
        hamiltonian,
        initial,
        times,
        select_observables(initial.basis, hamiltonian, observables),
        frequency_scale=params.frequency_scale)


def angular_momentum_series(params: ModelParams, times, initial: QuantumState) -> TimeSeries:
    """
    <Ys>/N over time, the circulation of atoms around the three wells.
    """
    basis = initial.basis
    if basis.total_n < 1:
        raise InvalidParameter(name='n_atoms', value=basis.total_n, reason="quantum runs need N >= 1")
    hamiltonian = hamiltonian_reduced(basis, params)
    return propagate(
        hamiltonian,
        initial,
        times,
        [scaled(angular_momentum(basis), 1.0 / basis.total_n, 'ys_over_n')],
        frequency_scale=params.frequency_scale)


def windowed_mean(series: TimeSeries, label: str, tau_min: float, tau_max: float) -> float:
    column = series.column(label)
    mask = (series.times >= tau_min) & (series.times <= tau_max)
    if not mask.any():
        raise InvalidParameter(
            name='window', value=(tau_min, tau_max), reason="contains no output times")
    return float(column[mask].mean())


def oscillation_envelope(series: TimeSeries, label: str, window: float) -> np.ndarray:
    """
    Peak-to-peak amplitude of an observable over a trailing window of width
    `window` ending at each output time. Windows are truncated at tau = 0.
    """
    column = series.column(label)
    times = series.times
    envelope = np.empty_like(column)
    lower = 0
    for i, tau in enumerate(times):
        while times[lower] < tau - window:
            lower += 1
        segment = column[lower:i + 1]
        envelope[i] = segment.max() - segment.min()
    return envelope
