"""Steady relativistic Boltzmann slab solver.

The C++ core does the work; this package adds thin conveniences around it.
"""

import json

from ._rbe_slab import (
    ConfigError,
    DomainError,
    Error,
    config_keys,
    invariants,
    moller_velocity,
    post_collision,
    read_field,
    validate_config,
)
from . import _rbe_slab

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "RunResult",
    "config_keys",
    "invariants",
    "moller_velocity",
    "post_collision",
    "read_field",
    "run",
    "validate_config",
]


class RunResult:
    def __init__(self, exit_code, message, report):
        self.exit_code = exit_code
        self.message = message
        self.report = json.loads(report) if report else None

    @property
    def ok(self):
        return self.exit_code == 0

    def __repr__(self):
        return f"RunResult(exit_code={self.exit_code}, message={self.message!r})"


def _overrides(settings):
    if settings is None:
        return []
    if isinstance(settings, dict):
        out = []
        for key, value in settings.items():
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, (list, tuple)):
                value = "[" + ", ".join(repr(v) for v in value) + "]"
            out.append(f"{key}={value}")
        return out
    return list(settings)


def run(mode, settings=None, config=None, out="rbe-out"):
    """Run a mode and return its exit code, message and parsed report.

    settings is a dict (or a list of "key=value" strings) applied after the
    optional YAML config file, like repeated --set flags on the command line.
    """
    code, message, report = _rbe_slab.run(mode, _overrides(settings), config, str(out))
    return RunResult(code, message, report)
