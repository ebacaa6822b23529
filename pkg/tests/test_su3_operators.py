import numpy as np
import pytest

# tribec modules
from tribec.exceptions import BasisMismatch, InvalidParameter
from tribec.fock_basis import build_basis
from tribec.su3_operators import (
    GENERATOR_LABELS,
    ModelParams,
    angular_momentum,
    casimir,
    casimir_value,
    commutator,
    generator,
    hamiltonian_full,
    hamiltonian_offset,
    hamiltonian_reduced,
    identity,
    max_abs,
    mode_number,
    number_operator,
    verify_identities,
)


@pytest.mark.parametrize('label', GENERATOR_LABELS)
def test_generators_are_hermitian(label):
    assert generator(build_basis(4), label).hermitian_residual() <= 1e-12


def test_diagonal_generators():
    basis = build_basis(3)
    n1, n2, n3 = basis.n1, basis.n2, basis.n3
    assert np.allclose(generator(basis, 'X1').diagonal(), n1 - n2)
    assert np.allclose(generator(basis, 'X2').diagonal(), (n1 + n2 - 2 * n3) / 3)
    total = mode_number(basis, 1) + mode_number(basis, 2) + mode_number(basis, 3)
    assert max_abs((total - number_operator(basis)).matrix) == 0


def test_unknown_generator():
    with pytest.raises(InvalidParameter):
        generator(build_basis(2), 'W1')
    with pytest.raises(InvalidParameter):
        mode_number(build_basis(2), 4)


@pytest.mark.parametrize('total_n', [1, 2, 5])
def test_quadratic_identities(total_n):
    residuals = verify_identities(build_basis(total_n))
    assert set(residuals) == {1, 2, 3}
    for residual in residuals.values():
        assert residual <= 1e-10 * max(1.0, 2.0 * total_n ** 2)


@pytest.mark.parametrize('total_n', [0, 1, 2, 3, 6])
def test_casimir_is_constant(total_n):
    basis = build_basis(total_n)
    expected = casimir_value(total_n)
    residual = max_abs((casimir(basis) - identity(basis) * expected).matrix)
    assert residual <= 1e-10 * max(1.0, expected)


def test_casimir_commutes_with_generators():
    basis = build_basis(4)
    c = casimir(basis)
    for label in GENERATOR_LABELS:
        assert max_abs(commutator(c, generator(basis, label)).matrix) <= 1e-9


def test_full_and_reduced_hamiltonians_differ_by_a_constant():
    basis = build_basis(6)
    params = ModelParams(total_n=6, omega=0.7, big_omega=-1.0, chi=-0.3)
    difference = hamiltonian_full(basis, params) - hamiltonian_reduced(basis, params)
    shift = identity(basis) * hamiltonian_offset(params)
    assert max_abs((difference - shift).matrix) <= 1e-10


def test_hamiltonian_commutes_with_number():
    basis = build_basis(5)
    params = ModelParams.from_ratio(total_n=5, r=0.4)
    h = hamiltonian_reduced(basis, params)
    assert max_abs(commutator(h, number_operator(basis)).matrix) == 0


@pytest.mark.parametrize('total_n', [1, 2, 5, 12])
def test_diagonal_generators_commute(total_n):
    basis = build_basis(total_n)
    x1, x2 = generator(basis, 'X1'), generator(basis, 'X2')
    assert max_abs(commutator(x1, x2).matrix) == 0


@pytest.mark.parametrize('label', GENERATOR_LABELS + ('Ys',))
def test_generators_conserve_atom_number(label):
    basis = build_basis(5)
    operator = angular_momentum(basis) if label == 'Ys' else generator(basis, label)
    total = mode_number(basis, 1) + mode_number(basis, 2) + mode_number(basis, 3)
    assert max_abs(commutator(operator, number_operator(basis)).matrix) == 0
    assert max_abs(commutator(operator, total).matrix) <= 1e-12


def test_angular_momentum():
    basis = build_basis(3)
    ys = angular_momentum(basis)
    assert ys.label == 'Ys'
    assert ys.hermitian_residual() <= 1e-12
    assert np.allclose(ys.diagonal(), 0)


def test_params_from_ratio():
    params = ModelParams.from_ratio(total_n=50, r=0.5)
    assert params.big_omega == -1.0
    assert params.chi == pytest.approx(-0.04)
    assert params.ratio == pytest.approx(0.5)
    assert params.frequency_scale == 1.0

    no_tunneling = ModelParams.from_ratio(total_n=50, r=0.0)
    assert no_tunneling.big_omega == 0.0
    assert no_tunneling.ratio == 0.0
    assert no_tunneling.frequency_scale == pytest.approx(1.0)


def test_params_reject_bad_input():
    with pytest.raises(InvalidParameter):
        ModelParams(total_n=5, big_omega=1.0, chi=-1.0)
    with pytest.raises(InvalidParameter):
        ModelParams.from_ratio(total_n=5, r=-0.1)
    with pytest.raises(InvalidParameter):
        ModelParams.from_ratio(total_n=5, r=0.5, omega_sign=2)
    with pytest.raises(InvalidParameter):
        ModelParams.from_ratio(total_n=0, r=0.5)


def test_basis_mismatch():
    with pytest.raises(BasisMismatch):
        generator(build_basis(2), 'X1') + generator(build_basis(3), 'X1')
    with pytest.raises(BasisMismatch):
        hamiltonian_reduced(build_basis(2), ModelParams.from_ratio(total_n=3, r=0.5))
