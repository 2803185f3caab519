"""Python access to the warehouse person-following simulator."""

from ._wfollow import (
    SCHEMA,
    ConfigError,
    IoError,
    ParseError,
    RunResult,
    Scenario,
    SimulationError,
    __version__,
    attractive_force,
    builtin_scenario,
    load_scenario,
    repulsive_force,
    run,
    run_batch,
    solve_assignment,
    step_unicycle,
    steer,
    track_log,
)

__all__ = [
    "SCHEMA",
    "ConfigError",
    "IoError",
    "ParseError",
    "RunResult",
    "Scenario",
    "SimulationError",
    "__version__",
    "attractive_force",
    "builtin_scenario",
    "load_scenario",
    "repulsive_force",
    "run",
    "run_batch",
    "solve_assignment",
    "step_unicycle",
    "steer",
    "track_log",
]
