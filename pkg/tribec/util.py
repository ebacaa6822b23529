import os

# tribec modules
from .exceptions import InvalidParameter


def default_worker_count() -> int:
    """
    How many sweep workers to use when neither --workers nor TRIBEC_WORKERS
    says otherwise.
    """
    return os.cpu_count() or 1


def parse_ratio_grid(spec: str) -> list:
    """
    Turn a grid spec like `0.2,0.283,0.5` or `0.30:0.36:0.001` into a list of
    coupling ratios.

    The range form includes `stop` when it falls on the grid (to within a
    small fraction of `step`). A list, as a YAML config file may give, is
    taken as the ratios themselves.
    """
    if isinstance(spec, (list, tuple)):
        spec = ','.join(str(r) for r in spec)
    spec = str(spec).strip()
    if not spec:
        return []

    try:
        if ':' in spec:
            start, stop, step = (float(p) for p in spec.split(':'))
            if step <= 0:
                raise InvalidParameter(name='r-grid', value=spec, reason="step must be positive")
            count = int((stop - start) / step + 1e-9) + 1
            # Rounded so that e.g. 0.30:0.36:0.001 yields 0.333, not 0.33299999999999996.
            grid = [round(start + i * step, 12) for i in range(max(count, 0))]
        else:
            grid = [float(p) for p in spec.split(',') if p.strip()]
    except ValueError as e:
        raise InvalidParameter(name='r-grid', value=spec, reason=str(e))

    for r in grid:
        if r <= 0:
            raise InvalidParameter(name='r-grid', value=r, reason="every ratio must be positive")

    return grid
