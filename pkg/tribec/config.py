import logging
import math
import os
from collections import namedtuple

# External modules
import click
import numpy as np
import yaml

# tribec modules
from .exceptions import InvalidParameter, UsageError
from .quantum_dynamics import OBSERVABLE_LABELS, STATE_LABELS

MODES = ('quantum', 'semiclassical', 'fixed-points', 'sweep')
FORMATS = ('csv', 'json')

# Config file sections, one per subcommand, plus `defaults` for all of them.
COMMANDS = (
    'simulate-quantum',
    'simulate-semiclassical',
    'fixed-points',
    'sweep',
    'verify',
)

logger = logging.getLogger('tribec.config')

_FIELDS = (
    'mode',
    'n_atoms',
    'r',
    'r_grid',
    'omega_sign',
    'initial',
    't_max',
    'dt_out',
    'observables',
    'output',
    'format',
)


class RunConfig(namedtuple('RunConfig', _FIELDS)):
    """
    Everything needed to reproduce one run. Echoed into JSON output so the
    run can be repeated from the file alone.
    """

    def to_dict(self) -> dict:
        d = self._asdict()
        d['r_grid'] = list(self.r_grid)
        d['observables'] = list(self.observables)
        return dict(d)

    @classmethod
    def from_dict(cls, d: dict) -> 'RunConfig':
        unknown = set(d) - set(_FIELDS)
        if unknown:
            raise InvalidParameter(
                name='config', value=sorted(unknown)[0], reason="not a run configuration field")
        values = dict(DEFAULTS._asdict())
        values.update(d)
        values['r_grid'] = tuple(values['r_grid'])
        values['observables'] = tuple(values['observables'])
        config = cls(**values)
        config.validate()
        return config

    def validate(self):
        if self.mode not in MODES:
            raise InvalidParameter(name='mode', value=self.mode, reason="expected one of {}".format(', '.join(MODES)))
        if self.format not in FORMATS:
            raise InvalidParameter(name='format', value=self.format, reason="expected csv or json")
        if self.omega_sign not in (-1, 1):
            raise InvalidParameter(name='omega_sign', value=self.omega_sign, reason="must be +1 or -1")
        if self.r is not None and (self.r < 0 or not math.isfinite(self.r)):
            raise InvalidParameter(name='r', value=self.r, reason="coupling ratio must be non-negative")

        if self.mode in ('quantum', 'semiclassical'):
            if not self.t_max > 0:
                raise InvalidParameter(name='t_max', value=self.t_max, reason="must be positive")
            if not self.dt_out > 0:
                raise InvalidParameter(name='dt_out', value=self.dt_out, reason="must be positive")
            if self.dt_out > self.t_max:
                raise InvalidParameter(name='dt_out', value=self.dt_out, reason="must not exceed t_max")

        if self.mode == 'quantum':
            if self.n_atoms < 1:
                raise InvalidParameter(name='n_atoms', value=self.n_atoms, reason="quantum runs need at least 1 atom")
            if self.initial not in STATE_LABELS:
                raise InvalidParameter(
                    name='initial', value=self.initial, reason="expected one of {}".format(', '.join(STATE_LABELS)))
            for label in self.observables:
                if label not in OBSERVABLE_LABELS + ('norm',):
                    raise InvalidParameter(
                        name='observables',
                        value=label,
                        reason="expected some of {}".format(', '.join(OBSERVABLE_LABELS + ('norm',))))

        if self.mode == 'fixed-points' and not self.r > 0:
            raise InvalidParameter(name='r', value=self.r, reason="fixed points need r > 0")

        if self.mode == 'sweep':
            if not self.t_max > 0:
                raise InvalidParameter(name='t_max', value=self.t_max, reason="horizon must be positive")
            for r in self.r_grid:
                if not r > 0:
                    raise InvalidParameter(name='r_grid', value=r, reason="every ratio must be positive")

    def times(self) -> np.ndarray:
        """
        Output times 0, dt_out, 2 dt_out, ... up to t_max.
        """
        count = int(math.floor(self.t_max / self.dt_out + 1e-9))
        return self.dt_out * np.arange(count + 1, dtype=np.float64)


DEFAULTS = RunConfig(
    mode='quantum',
    n_atoms=50,
    r=0.506,
    r_grid=(),
    omega_sign=-1,
    initial='e1',
    t_max=50.0,
    dt_out=0.05,
    observables=OBSERVABLE_LABELS + ('norm',),
    output=None,
    format='csv',
)


def get_config_file() -> str:
    """
    Get the path to tribec's default configuration file.
    """
    config_dir = click.get_app_dir(app_name='tribec')
    return os.path.join(config_dir, 'config.yaml')


def load_config_file(path: str) -> dict:
    """
    Read a JSON or YAML config file. JSON is a subset of YAML, so one loader
    covers both.
    """
    with open(path) as f:
        try:
            config_raw = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise UsageError("Could not parse config file {p}: {e}".format(p=path, e=e))

    if config_raw is None:
        return {}
    if not isinstance(config_raw, dict):
        raise InvalidParameter(name='config', value=path, reason="top level must be a mapping")
    return config_raw


def normalize_keys(obj):
    """
    Used to map keys from config files to Python parameter names.
    """
    if not isinstance(obj, dict):
        return obj
    else:
        return {
            k.replace('-', '_'): normalize_keys(v)
            for k, v in obj.items()
        }


def config_to_click(config: dict, *, command_options: dict) -> dict:
    """
    Convert a dictionary of configurations loaded from a tribec config file
    to a dictionary that Click can use to set default options.

    `command_options` maps each command name to the parameter names it
    accepts. Keys under `defaults` go to every command that accepts them;
    keys under a command's own section win over `defaults`.
    """
    sections = {command.replace('-', '_'): command for command in command_options}
    for key in config:
        if key not in sections and key not in ('defaults', 'debug'):
            raise InvalidParameter(name='config', value=key, reason="unknown section")

    defaults = config.get('defaults') or {}
    for key in defaults:
        if not any(key in options for options in command_options.values()):
            raise InvalidParameter(name='defaults.{}'.format(key), value=defaults[key], reason="unknown option")

    click_map = {}
    for section, command in sections.items():
        options = command_options[command]
        values = {k: v for k, v in defaults.items() if k in options}
        for key, value in (config.get(section) or {}).items():
            if key not in options:
                raise InvalidParameter(
                    name='{c}.{k}'.format(c=command, k=key), value=value, reason="unknown option")
            values[key] = value
        if values:
            click_map[command] = values

    return click_map
