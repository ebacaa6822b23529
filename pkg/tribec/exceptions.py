class NothingToDo(Exception):
    pass


class UsageError(Exception):
    pass


class InvalidParameter(UsageError):
    def __init__(self, *, name: str, value, reason: str):
        super().__init__(
            "Invalid value for {n}: {v!r} ({r})".format(n=name, v=value, r=reason))
        self.name = name
        self.value = value
        self.reason = reason


class OccupationOutOfRange(UsageError):
    def __init__(self, *, n1: int, n2: int, total_n: int):
        super().__init__(
            "Occupation pair ({n1}, {n2}) is not a valid state for N={n}.".format(
                n1=n1, n2=n2, n=total_n))
        self.n1 = n1
        self.n2 = n2
        self.total_n = total_n


class Error(Exception):
    pass


class BasisMismatch(Error):
    def __init__(self, *, expected: int, found: int, what: str):
        super().__init__(
            "{w} was built for N={f}, expected N={e}.".format(w=what, f=found, e=expected))
        self.expected = expected
        self.found = found
        self.what = what


class NotHermitian(Error):
    def __init__(self, *, label: str, asymmetry: float):
        super().__init__(
            "Operator {lbl} is not Hermitian (max |A - A^H| = {a:.3e}).".format(
                lbl=label, a=asymmetry))
        self.label = label
        self.asymmetry = asymmetry


class ToleranceExceeded(Error):
    def __init__(self, *, diagnostic: str, value: float, tolerance: float, tau: float = None):
        super().__init__(
            "{d} = {v:.3e} exceeds tolerance {t:.1e}{at}.".format(
                d=diagnostic,
                v=value,
                t=tolerance,
                at='' if tau is None else ' first at tau={:.6g}'.format(tau)))
        self.diagnostic = diagnostic
        self.value = value
        self.tolerance = tolerance
        self.tau = tau


class BracketError(Error):
    def __init__(self, *, what: str, lower: float, upper: float):
        super().__init__(
            "Could not bracket {w} in [{lo}, {hi}].".format(w=what, lo=lower, hi=upper))
        self.what = what
        self.lower = lower
        self.upper = upper


class OutputError(Error):
    def __init__(self, *, path: str, cause: Exception):
        super().__init__(
            "Could not write {p}: {c}".format(p=path, c=cause))
        self.path = path
        self.cause = cause
