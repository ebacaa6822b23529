"""
SU(3) generators of three bosonic modes, built as sparse matrices in a
fixed-N Fock basis.

Generator conventions, with n_k = c_k^dagger c_k and the cyclic mode pairs
(k, j) in (1, 2), (2, 3), (3, 1):

    X1 = n1 - n2
    X2 = (n1 + n2 - 2 n3) / 3
    Yk = i (c_k^dagger c_j - c_j^dagger c_k)
    Zk = c_k^dagger c_j + c_j^dagger c_k
"""
import logging
import math

# External modules
import numpy as np
import scipy.sparse

# tribec modules
from .exceptions import BasisMismatch, InvalidParameter
from .fock_basis import FockBasis

GENERATOR_LABELS = ('X1', 'X2', 'Y1', 'Y2', 'Y3', 'Z1', 'Z2', 'Z3')

# Zero-based (k, j) mode pair behind Yk and Zk.
MODE_PAIRS = {
    1: (0, 1),
    2: (1, 2),
    3: (2, 0),
}

logger = logging.getLogger('tribec.su3_operators')


class ModelParams:
    """
    Parameters of the three-mode Hamiltonian.

    omega is the mode frequency, big_omega the tunneling frequency and chi the
    two-particle interaction, all in the same angular frequency units. The
    attractive regime has big_omega <= 0 and chi <= 0; any signs are accepted
    as long as they agree, so the ratio r stays non-negative.
    """

    def __init__(self, *, total_n: int, omega: float = 0.0, big_omega: float, chi: float):
        if total_n < 0:
            raise InvalidParameter(name='n_atoms', value=total_n, reason="must be non-negative")
        if big_omega * chi < 0:
            raise InvalidParameter(
                name='big_omega',
                value=big_omega,
                reason="sign must agree with chi={c} so that r >= 0".format(c=chi))

        self.total_n = total_n
        self.omega = omega
        self.big_omega = big_omega
        self.chi = chi

    @classmethod
    def from_ratio(cls, *, total_n: int, r: float, omega: float = 0.0, omega_sign: int = -1):
        """
        Preset used by the CLI: Omega = omega_sign * 1 and chi = Omega / (r N).

        r = 0 means no tunneling; chi N is then set to omega_sign so the
        collective interaction still sets a time unit.
        """
        if r < 0:
            raise InvalidParameter(name='r', value=r, reason="must be non-negative")
        if omega_sign not in (-1, 1):
            raise InvalidParameter(name='omega_sign', value=omega_sign, reason="must be +1 or -1")
        if total_n < 1:
            raise InvalidParameter(name='n_atoms', value=total_n, reason="a ratio preset needs N >= 1")

        if r == 0:
            return cls(total_n=total_n, omega=omega, big_omega=0.0, chi=omega_sign / total_n)
        big_omega = float(omega_sign)
        return cls(total_n=total_n, omega=omega, big_omega=big_omega, chi=big_omega / (r * total_n))

    @property
    def ratio(self) -> float:
        """
        r = Omega / (N chi), or 0 when there is no tunneling.
        """
        if self.big_omega == 0:
            return 0.0
        if self.total_n == 0 or self.chi == 0:
            return math.inf
        return self.big_omega / (self.total_n * self.chi)

    @property
    def frequency_scale(self) -> float:
        """
        The frequency that makes time dimensionless: tau = frequency_scale * t.

        This is |Omega|, falling back to |chi| N when there is no tunneling.
        """
        if self.big_omega != 0:
            return abs(self.big_omega)
        if self.chi != 0 and self.total_n > 0:
            return abs(self.chi) * self.total_n
        return 1.0

    def __repr__(self):
        return 'ModelParams(total_n={n}, omega={w}, big_omega={o}, chi={c})'.format(
            n=self.total_n, w=self.omega, o=self.big_omega, c=self.chi)


class OperatorMatrix:
    """
    A Hermitian operator stored as a sparse matrix over a FockBasis.
    """

    # Make `numpy_scalar * operator` fall through to __rmul__.
    __array_ufunc__ = None

    def __init__(self, *, basis: FockBasis, matrix, label: str):
        self.basis = basis
        self.matrix = scipy.sparse.csr_matrix(matrix, dtype=np.complex128)
        self.label = label

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def hermitian_residual(self) -> float:
        return max_abs(self.matrix - self.matrix.conj().T)

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()

    def _check_basis(self, other: 'OperatorMatrix'):
        if other.basis.total_n != self.basis.total_n:
            raise BasisMismatch(
                expected=self.basis.total_n,
                found=other.basis.total_n,
                what="Operator {}".format(other.label))

    def __add__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        self._check_basis(other)
        return OperatorMatrix(
            basis=self.basis,
            matrix=self.matrix + other.matrix,
            label='({} + {})'.format(self.label, other.label))

    def __sub__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        self._check_basis(other)
        return OperatorMatrix(
            basis=self.basis,
            matrix=self.matrix - other.matrix,
            label='({} - {})'.format(self.label, other.label))

    def __matmul__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        self._check_basis(other)
        return OperatorMatrix(
            basis=self.basis,
            matrix=self.matrix @ other.matrix,
            label='{} {}'.format(self.label, other.label))

    def __mul__(self, scalar) -> 'OperatorMatrix':
        return OperatorMatrix(
            basis=self.basis,
            matrix=self.matrix * scalar,
            label='{:g} {}'.format(scalar, self.label))

    __rmul__ = __mul__

    def __repr__(self):
        return 'OperatorMatrix(label={lbl!r}, dimension={d})'.format(lbl=self.label, d=self.dimension)


def max_abs(matrix) -> float:
    if matrix.shape[0] == 0 or matrix.nnz == 0:
        return 0.0
    return float(abs(matrix).max())


def _occupations(basis: FockBasis) -> tuple:
    return (basis.n1, basis.n2, basis.n3)


def _diagonal(basis: FockBasis, values, label: str) -> OperatorMatrix:
    values = np.broadcast_to(np.asarray(values, dtype=np.complex128), (basis.dimension,))
    return OperatorMatrix(basis=basis, matrix=scipy.sparse.diags(values), label=label)


def hopping(basis: FockBasis, k: int, j: int) -> scipy.sparse.csr_matrix:
    """
    c_k^dagger c_j for zero-based modes k != j.

    Maps |..n_k..n_j..> to sqrt((n_k + 1) n_j) |..n_k + 1..n_j - 1..>.
    """
    occupations = _occupations(basis)
    source = np.nonzero(occupations[j] > 0)[0]

    target_occupations = [occupation[source].copy() for occupation in occupations]
    target_occupations[k] += 1
    target_occupations[j] -= 1
    target = basis.indices_of(target_occupations[0], target_occupations[1])

    amplitudes = np.sqrt((occupations[k][source] + 1.0) * occupations[j][source])
    return scipy.sparse.csr_matrix(
        (amplitudes, (target, source)),
        shape=(basis.dimension, basis.dimension))


def generator(basis: FockBasis, label: str) -> OperatorMatrix:
    """
    One of the eight SU(3) generators, by label.
    """
    n1, n2, n3 = _occupations(basis)

    if label == 'X1':
        return _diagonal(basis, n1 - n2, label)
    elif label == 'X2':
        return _diagonal(basis, (n1 + n2 - 2 * n3) / 3.0, label)
    elif label in ('Y1', 'Y2', 'Y3', 'Z1', 'Z2', 'Z3'):
        k, j = MODE_PAIRS[int(label[1])]
        forward = hopping(basis, k, j)
        backward = forward.T.tocsr()
        if label[0] == 'Y':
            matrix = 1j * (forward - backward)
        else:
            matrix = forward + backward
        return OperatorMatrix(basis=basis, matrix=matrix, label=label)
    else:
        raise InvalidParameter(
            name='label',
            value=label,
            reason="expected one of {}".format(', '.join(GENERATOR_LABELS)))


def number_operator(basis: FockBasis) -> OperatorMatrix:
    return _diagonal(basis, float(basis.total_n), 'N')


def mode_number(basis: FockBasis, mode: int) -> OperatorMatrix:
    """
    Occupation operator of one mode, with mode in 1, 2, 3.
    """
    if mode not in (1, 2, 3):
        raise InvalidParameter(name='mode', value=mode, reason="expected 1, 2 or 3")
    return _diagonal(basis, _occupations(basis)[mode - 1], 'n{}'.format(mode))


def identity(basis: FockBasis) -> OperatorMatrix:
    return _diagonal(basis, 1.0, 'I')


def angular_momentum(basis: FockBasis) -> OperatorMatrix:
    """
    Ys = Y1 + Y2 + Y3, the circulation around the three wells.
    """
    total = generator(basis, 'Y1') + generator(basis, 'Y2') + generator(basis, 'Y3')
    total.label = 'Ys'
    return total


def _check_params(basis: FockBasis, params: ModelParams):
    if params.total_n != basis.total_n:
        raise BasisMismatch(expected=basis.total_n, found=params.total_n, what="ModelParams")


def hamiltonian_reduced(basis: FockBasis, params: ModelParams) -> OperatorMatrix:
    """
    H = Omega (Z1 + Z2 + Z3) + (chi / 2) (X1^2 + 3 X2^2)

    This drops the constant omega N + chi (N^2 / 3 - N) of the full
    Hamiltonian and is what the dynamics uses.
    """
    _check_params(basis, params)
    n1, n2, n3 = _occupations(basis)

    tunneling = sum(
        (generator(basis, 'Z{}'.format(k)).matrix for k in (1, 2, 3)),
        scipy.sparse.csr_matrix((basis.dimension, basis.dimension)))
    x1 = n1 - n2
    x2 = (n1 + n2 - 2 * n3) / 3.0
    interaction = scipy.sparse.diags(params.chi / 2.0 * (x1 ** 2 + 3.0 * x2 ** 2))

    return OperatorMatrix(
        basis=basis,
        matrix=params.big_omega * tunneling + interaction,
        label='H')


def hamiltonian_full(basis: FockBasis, params: ModelParams) -> OperatorMatrix:
    """
    H = omega N + Omega sum_{j != k} c_j^dagger c_k + chi sum_j c_j^dagger c_j^dagger c_j c_j

    Built straight from the ladder operators rather than from the generators.
    """
    _check_params(basis, params)
    occupations = _occupations(basis)

    tunneling = sum(
        (hopping(basis, k, j) for k in range(3) for j in range(3) if k != j),
        scipy.sparse.csr_matrix((basis.dimension, basis.dimension)))
    onsite = params.omega * basis.total_n + params.chi * sum(
        n * (n - 1.0) for n in occupations)

    return OperatorMatrix(
        basis=basis,
        matrix=params.big_omega * tunneling + scipy.sparse.diags(np.broadcast_to(
            onsite, (basis.dimension,)).astype(np.float64)),
        label='H_full')


def hamiltonian_offset(params: ModelParams) -> float:
    """
    hamiltonian_full - hamiltonian_reduced, which is a multiple of the identity.
    """
    n = params.total_n
    return params.omega * n + params.chi * (n ** 2 / 3.0 - n)


def casimir(basis: FockBasis) -> OperatorMatrix:
    """
    X1^2 + 3 X2^2 + sum_k (Yk^2 + Zk^2).

    With the generators normalized as above this is the sum of squares of the
    Gell-Mann bilinears c^dagger lambda_a c (the factor 3 turns X2 into the
    lambda_8 bilinear). On a fixed-N sector it equals 4 N (N / 3 + 1).
    """
    total = scipy.sparse.csr_matrix((basis.dimension, basis.dimension), dtype=np.complex128)
    for label, weight in [('X1', 1.0), ('X2', 3.0)] + [
            (prefix + str(k), 1.0) for prefix in ('Y', 'Z') for k in (1, 2, 3)]:
        g = generator(basis, label).matrix
        total = total + weight * (g @ g)
    return OperatorMatrix(basis=basis, matrix=total, label='Casimir')


def casimir_value(total_n: int) -> float:
    return 4.0 * total_n * (total_n / 3.0 + 1.0)


def identity_sides(basis: FockBasis) -> dict:
    """
    Both sides of the three quadratic identities tying Yk^2 + Zk^2 to the
    diagonal generators, keyed by k.
    """
    n = float(basis.total_n)
    x1 = generator(basis, 'X1').matrix
    x2 = generator(basis, 'X2').matrix
    eye = scipy.sparse.identity(basis.dimension, dtype=np.complex128, format='csr')

    plus = (2 * n / 3) * eye + x2 + x1
    minus = (2 * n / 3) * eye + x2 - x1
    third = (n / 3) * eye - x2

    left = {
        1: plus @ minus + (4 * n / 3) * eye + 2 * x2,
        2: 2 * (minus @ third) + (4 * n / 3) * eye - x2 - x1,
        3: 2 * (plus @ third) + (4 * n / 3) * eye - x2 + x1,
    }

    sides = {}
    for k in (1, 2, 3):
        y = generator(basis, 'Y{}'.format(k)).matrix
        z = generator(basis, 'Z{}'.format(k)).matrix
        sides[k] = (left[k], y @ y + z @ z)
    return sides


def verify_identities(basis: FockBasis) -> dict:
    """
    Max absolute entrywise residual of each quadratic identity, keyed by k.
    """
    residuals = {}
    for k, (left, right) in identity_sides(basis).items():
        residuals[k] = max_abs(left - right)
        logger.debug("Identity {k} at N={n}: residual {r:.3e}".format(
            k=k, n=basis.total_n, r=residuals[k]))
    return residuals


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    result = a @ b - b @ a
    result.label = '[{}, {}]'.format(a.label, b.label)
    return result
