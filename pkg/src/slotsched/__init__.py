"""Exact solvers for preemptive multi-host scheduling over discrete time slots.

Two problems share the data model: maximizing scheduled weight on a fixed
host count (throughput), and minimizing the number of hosts that complete
every job (host minimization).  Both pipelines run on exact rational
arithmetic end to end.
"""

from slotsched.model import (
    Instance,
    Job,
    Schedule,
    TimeWindow,
    ValidationReport,
    area,
    density,
    slackness,
    validate,
)

__all__ = [
    "Instance",
    "Job",
    "Schedule",
    "TimeWindow",
    "ValidationReport",
    "area",
    "density",
    "slackness",
    "validate",
]

__version__ = "0.1.0"
