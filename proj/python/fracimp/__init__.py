"""Caputo fractional equations with integrable impulses: solver and stability checks."""

import json
from dataclasses import dataclass, field

from ._core import (
    ConfigError,
    DomainError,
    NumericalError,
    beta_fn,
    caputo_derivative,
    gamma_fn,
    log_gamma_fn,
    mittag_leffler,
    rl_integral,
    rl_integral_continuous,
    weighted_power_integral,
)
from ._core import run_command as _run_command

__all__ = [
    "ConfigError",
    "DomainError",
    "NumericalError",
    "RunResult",
    "beta_fn",
    "caputo_derivative",
    "gamma_fn",
    "log_gamma_fn",
    "mittag_leffler",
    "rl_integral",
    "rl_integral_continuous",
    "run",
    "weighted_power_integral",
]


@dataclass
class RunResult:
    exit_code: int
    artifacts: dict = field(default_factory=dict)
    messages: list = field(default_factory=list)

    def json(self, name):
        return json.loads(self.artifacts[name])


def run(command, config_text="", grid_density=None, theta=None, json_only=False):
    """Run solve, analyze, certify or example51 and return its artifacts in memory."""
    code, artifacts, messages = _run_command(command, config_text, grid_density, theta, json_only)
    return RunResult(code, dict(artifacts), list(messages))
