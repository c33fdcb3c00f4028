"""Exception types shared across the package."""


class ReconPlanError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(ReconPlanError, ValueError):
    """Vector lengths disagree with the domain's feature count."""


class InvalidActionError(ReconPlanError, ValueError):
    """Action tuple or index outside the domain's action space."""


class TerminalStateError(ReconPlanError, RuntimeError):
    """Operation requires a non-terminal timestep."""


class EmptyTreeError(TerminalStateError):
    """Search tree requested at a belief whose timestep admits no action."""


class SessionCompleteError(TerminalStateError):
    """Step requested after the episode horizon was reached."""


class BeliefDepletionError(ReconPlanError, RuntimeError):
    """All particle weights collapsed to zero and recovery was disabled."""


class OutOfOrderError(ReconPlanError, RuntimeError):
    """Session operation called before its prerequisite (e.g. propose before recommend)."""


class UnknownSessionError(ReconPlanError, KeyError):
    """Session id not present in the registry."""
