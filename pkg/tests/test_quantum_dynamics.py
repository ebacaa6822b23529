import numpy as np
import pytest

# tribec modules
from tribec.exceptions import (
    BasisMismatch,
    InvalidParameter,
    NotHermitian,
    ToleranceExceeded,
)
from tribec.fock_basis import build_basis, index_of
from tribec.quantum_dynamics import (
    OBSERVABLE_LABELS,
    Propagator,
    QuantumState,
    TimeSeries,
    angular_momentum_series,
    default_observables,
    expectation,
    initial_state,
    oscillation_envelope,
    propagate,
    simulate,
    state_e,
    state_g,
    variance,
    windowed_mean,
)
from tribec.su3_operators import (
    ModelParams,
    OperatorMatrix,
    angular_momentum,
    generator,
    hamiltonian_reduced,
    hopping,
)


def test_all_in_one_well_states(basis5):
    for which, occupations in [(1, (0, 0)), (2, (5, 0)), (3, (0, 5))]:
        state = state_e(basis5, which)
        assert state.label == 'e{}'.format(which)
        assert state.amplitudes[index_of(basis5, *occupations)] == 1
        assert state.norm == pytest.approx(1.0)


def test_superposition_states(basis5):
    for which in (1, 2, 3):
        state = state_g(basis5, which)
        assert state.norm == pytest.approx(1.0, abs=1e-12)
        for i in (1, 2, 3):
            assert abs(state.overlap(state_e(basis5, i))) == pytest.approx(3 ** -0.5)
    assert abs(state_g(basis5, 2).overlap(state_g(basis5, 3))) == pytest.approx(0.0, abs=1e-12)


def test_superposition_needs_atoms():
    with pytest.raises(InvalidParameter):
        state_g(build_basis(0), 1)


def test_initial_state_labels(basis5):
    assert initial_state(basis5, 'g3').label == 'g3'
    with pytest.raises(InvalidParameter):
        initial_state(basis5, 'e4')
    with pytest.raises(InvalidParameter):
        state_e(basis5, 0)


def test_state_must_be_normalized(basis5):
    with pytest.raises(InvalidParameter):
        QuantumState(basis=basis5, amplitudes=2 * state_e(basis5, 1).amplitudes)
    with pytest.raises(BasisMismatch):
        QuantumState(basis=basis5, amplitudes=[1.0, 0.0])


def test_population_expectations(basis5):
    x2 = generator(basis5, 'X2')
    assert expectation(state_e(basis5, 1), x2) == pytest.approx(-10 / 3)
    assert expectation(state_e(basis5, 2), x2) == pytest.approx(5 / 3)
    assert expectation(state_e(basis5, 3), generator(basis5, 'X1')) == pytest.approx(-5)


def test_coherence_fluctuations(basis5):
    """
    In an all-in-one-well state, Yk and Zk fluctuate with variance N on the
    two pairs touching the occupied well, and not at all on the third.
    """
    state = state_e(basis5, 1)
    for label, expected in [('Z1', 0), ('Z2', 5), ('Z3', 5), ('Y1', 0), ('Y2', 5), ('Y3', 5)]:
        assert variance(state, generator(basis5, label)) == pytest.approx(expected, abs=1e-12)


def test_evolution_is_reversible(basis5):
    params = ModelParams.from_ratio(total_n=5, r=0.4)
    propagator = Propagator(hamiltonian_reduced(basis5, params), frequency_scale=params.frequency_scale)
    initial = state_g(basis5, 2)
    there = propagator.evolve(initial, 7.3)
    back = propagator.evolve(there, -7.3)
    assert np.allclose(back.amplitudes, initial.amplitudes, atol=1e-9)
    assert there.norm == pytest.approx(1.0, abs=1e-12)


def test_propagator_rejects_bad_input(basis5):
    not_hermitian = OperatorMatrix(basis=basis5, matrix=hopping(basis5, 0, 1), label='c1+ c2')
    with pytest.raises(NotHermitian):
        Propagator(not_hermitian)
    with pytest.raises(InvalidParameter):
        Propagator(generator(basis5, 'Z1'), frequency_scale=0.0)


def test_propagator_keeps_real_hamiltonians_real(basis5):
    params = ModelParams.from_ratio(total_n=5, r=0.4)
    real = Propagator(hamiltonian_reduced(basis5, params))
    assert real.vectors.dtype == np.float64

    circulation = Propagator(angular_momentum(basis5))
    assert circulation.vectors.dtype == np.complex128
    evolved = circulation.evolve(state_e(basis5, 1), 1.0)
    assert evolved.norm == pytest.approx(1.0, abs=1e-12)


def test_propagate_records_norm(basis5):
    params = ModelParams.from_ratio(total_n=5, r=0.506)
    series = simulate(params, state_e(basis5, 1), np.linspace(0, 10, 201))
    assert series.labels == OBSERVABLE_LABELS + ('norm',)
    assert len(series) == 201
    assert np.allclose(series.column('norm'), 1.0, atol=1e-10)
    assert series.column('x2_over_n')[0] == pytest.approx(-2 / 3)

    energy = series.column('energy')
    assert np.abs(energy - energy[0]).max() <= 1e-9 * max(1.0, abs(energy[0]))


def test_mirror_symmetry_keeps_x1_at_zero():
    basis = build_basis(10)
    params = ModelParams.from_ratio(total_n=10, r=0.4)
    series = simulate(params, state_e(basis, 1), np.linspace(0, 20, 101), observables=('x1_over_n',))
    assert np.abs(series.column('x1_over_n')).max() <= 1e-10


def test_propagate_errors(basis5):
    params = ModelParams.from_ratio(total_n=5, r=0.4)
    h = hamiltonian_reduced(basis5, params)
    x2 = generator(basis5, 'X2')

    with pytest.raises(InvalidParameter):
        propagate(h, state_e(basis5, 1), [-1.0, 0.0], [x2])
    with pytest.raises(BasisMismatch):
        propagate(h, state_e(build_basis(4), 1), [0.0], [x2])
    with pytest.raises(ToleranceExceeded) as e:
        propagate(h, state_e(basis5, 1), [0.5, 1.0], [x2], norm_tolerance=-1.0)
    assert e.value.tau == 0.5


def test_default_observables_need_atoms():
    basis = build_basis(0)
    params = ModelParams(total_n=0, big_omega=-1.0, chi=-1.0)
    with pytest.raises(InvalidParameter):
        default_observables(basis, hamiltonian_reduced(basis, params))


def test_unknown_observable(basis5):
    params = ModelParams.from_ratio(total_n=5, r=0.4)
    with pytest.raises(InvalidParameter):
        simulate(params, state_e(basis5, 1), [0.0], observables=('x3_over_n',))


def test_opposite_circulations():
    basis = build_basis(6)
    times = np.linspace(0, 20, 81)
    params = ModelParams.from_ratio(total_n=6, r=1.3)
    g2 = angular_momentum_series(params, times, state_g(basis, 2)).column('ys_over_n')
    g3 = angular_momentum_series(params, times, state_g(basis, 3)).column('ys_over_n')
    assert np.abs(g2 + g3).max() <= 1e-9


def test_no_circulation_without_tunneling():
    basis = build_basis(6)
    params = ModelParams.from_ratio(total_n=6, r=0.0)
    series = angular_momentum_series(params, np.linspace(0, 20, 81), state_g(basis, 2))
    assert np.abs(series.column('ys_over_n')).max() <= 1e-12


def test_circulation_needs_atoms():
    empty = build_basis(0)
    params = ModelParams.from_ratio(total_n=1, r=0.5)
    with pytest.raises(InvalidParameter) as e:
        angular_momentum_series(params, [0.0, 1.0], state_e(empty, 1))
    assert e.value.name == 'n_atoms'


def test_time_series_validation():
    with pytest.raises(InvalidParameter):
        TimeSeries(times=[0.0, 1.0, 1.0], labels=('a',), values=[1, 2, 3])
    series = TimeSeries(times=[0.0, 1.0], labels=('a',), values=[1, 2])
    with pytest.raises(InvalidParameter):
        series.column('b')
    assert series.records == [{'a': 1.0}, {'a': 2.0}]


def test_windowed_mean():
    series = TimeSeries(times=[0, 1, 2, 3], labels=('a',), values=[1, 3, 5, 7])
    assert windowed_mean(series, 'a', 1, 2) == 4
    with pytest.raises(InvalidParameter):
        windowed_mean(series, 'a', 10, 20)


def test_oscillation_envelope():
    series = TimeSeries(times=[0, 1, 2, 3, 4, 5], labels=('a',), values=[0, 2, 0, 2, 0, 2])
    assert list(oscillation_envelope(series, 'a', 1.0)) == [0, 2, 2, 2, 2, 2]
