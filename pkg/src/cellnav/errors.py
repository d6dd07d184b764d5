"""Exception hierarchy for the planner."""


class PlannerError(Exception):
    """Base class for all cellnav errors."""


class ScenarioFormatError(PlannerError):
    """Scenario file or dict is malformed (missing key, bad type, non-finite value)."""


class UnattainableSnr(PlannerError):
    """SNR target exceeds what is achievable even directly overhead a GBS."""


class Unreachable(PlannerError):
    """No start-to-goal path exists even with unbounded coverage radius."""


class Infeasible(PlannerError):
    """No start-to-goal path exists in the coverage graph."""


class TooManyPaths(PlannerError):
    """Simple-path enumeration exceeded its configured cap."""


class DegenerateSequence(PlannerError):
    """Association sequence has equal consecutive indices; prune it first."""


class OutOfRange(PlannerError):
    """Requested time lies outside the trajectory's [0, T] interval."""
