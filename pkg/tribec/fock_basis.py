import logging
import types

# External modules
import numpy as np

# tribec modules
from .exceptions import InvalidParameter, OccupationOutOfRange

DEFAULT_MAX_ATOMS = 500

logger = logging.getLogger('tribec.fock_basis')


class FockBasis:
    """
    Number states |n1, n2, N - n1 - n2> of three bosonic modes at fixed total
    atom number N.

    States are ordered lexicographically in (n1, n2). The third occupation is
    always derived, so every state in the basis has exactly N atoms.
    """

    def __init__(self, *, total_n: int, states: tuple):
        self.total_n = total_n
        self.states = states
        self.index_map = types.MappingProxyType(
            {state: i for i, state in enumerate(states)})

        occupations = np.array(states, dtype=np.int64).reshape(-1, 2)
        self.n1 = occupations[:, 0]
        self.n2 = occupations[:, 1]
        self.n3 = total_n - self.n1 - self.n2
        for array in (self.n1, self.n2, self.n3):
            array.setflags(write=False)

    @property
    def dimension(self) -> int:
        return len(self.states)

    def occupations(self, index: int) -> tuple:
        """
        The full occupation triple (n1, n2, n3) of a basis state.
        """
        n1, n2 = self.states[index]
        return (n1, n2, self.total_n - n1 - n2)

    def indices_of(self, n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
        """
        Vectorized index lookup; the caller guarantees every pair is valid.
        """
        n1 = np.asarray(n1, dtype=np.int64)
        n2 = np.asarray(n2, dtype=np.int64)
        return n1 * (self.total_n + 1) - n1 * (n1 - 1) // 2 + n2

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __repr__(self):
        return 'FockBasis(total_n={n}, dimension={d})'.format(n=self.total_n, d=self.dimension)


def basis_dimension(total_n: int) -> int:
    return (total_n + 1) * (total_n + 2) // 2


def build_basis(total_n: int, *, max_atoms: int = DEFAULT_MAX_ATOMS) -> FockBasis:
    """
    Enumerate every (n1, n2) with n1, n2 >= 0 and n1 + n2 <= N.
    """
    if total_n < 0:
        raise InvalidParameter(name='n_atoms', value=total_n, reason="must be non-negative")
    if total_n > max_atoms:
        raise InvalidParameter(
            name='n_atoms',
            value=total_n,
            reason="above the configured maximum of {m}".format(m=max_atoms))

    states = tuple(
        (n1, n2)
        for n1 in range(total_n + 1)
        for n2 in range(total_n + 1 - n1))

    logger.debug("Built Fock basis for N={n} with {d} states.".format(n=total_n, d=len(states)))
    return FockBasis(total_n=total_n, states=states)


def index_of(basis: FockBasis, n1: int, n2: int) -> int:
    try:
        return basis.index_map[(n1, n2)]
    except KeyError:
        raise OccupationOutOfRange(n1=n1, n2=n2, total_n=basis.total_n) from None
