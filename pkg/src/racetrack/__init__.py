"""Shortest trajectories for a vehicle on the integer lattice with bounded acceleration."""

__version__ = "0.1.0"

# the submodule racetrack.branching_cost holds branching_cost(); it is not
# re-exported here because the name would shadow the module

from .branching_cost import feasible_lengths, feasible_lengths_1d
from .branching_trajectory import construct, construct_1d
from .errors import (
    ConfigurationError,
    DomainError,
    InfeasibleError,
    InvalidInputError,
    ResourceError,
    UnsupportedError,
)
from .kinematics import CompactTrajectory, Configuration, Trajectory, validate_trajectory, visits
from .multipoint import Instance, SpeedBoundPolicy, solve

__all__ = [
    "feasible_lengths",
    "feasible_lengths_1d",
    "construct",
    "construct_1d",
    "Configuration",
    "Trajectory",
    "CompactTrajectory",
    "validate_trajectory",
    "visits",
    "Instance",
    "SpeedBoundPolicy",
    "solve",
    "ConfigurationError",
    "DomainError",
    "InfeasibleError",
    "InvalidInputError",
    "ResourceError",
    "UnsupportedError",
]
