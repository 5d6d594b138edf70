"""Configuration-driven experiment runner, oracle and output emission."""

from .config import ConfigError, ScenarioConfig
from .oracle import OracleGateError, ideal_sampler_oracle, linearized_mode_run
from .output import emit_outputs
from .scenario import ComparisonSummary, ScenarioRun, run_scenario

__all__ = ["ComparisonSummary", "ConfigError", "OracleGateError", "ScenarioConfig", "ScenarioRun",
           "emit_outputs", "ideal_sampler_oracle", "linearized_mode_run", "run_scenario"]
