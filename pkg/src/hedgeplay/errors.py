"""Exception hierarchy shared across the package.

Everything raised on purpose derives from HedgeplayError so callers can
catch one base class.  TieWarning is a warning, not an exception: play can
continue after a threshold tie, the caller just deserves to know the action
choice was decided by a convention rather than by the payoffs.
"""


class HedgeplayError(Exception):
    """Base class for all package errors."""


class ValidationError(HedgeplayError):
    """Game specification rejected (shape, entries, eta, horizon)."""


class ZeroGame(ValidationError):
    """All four payoff differences vanish; play is trivial everywhere."""


class IrrationalEntries(ValidationError):
    """Matrix entries must be exact rationals, not binary floats."""


class RegimeMismatch(HedgeplayError):
    """Operation requires a different strategic regime than the game has."""


class HorizonExceeded(HedgeplayError):
    """Attempt to step a state past the final round."""


class HorizonTooShort(HedgeplayError):
    """Horizon too small for the periodic construction's landmarks."""


class ResourceLimit(HedgeplayError):
    """Requested computation exceeds a configured size cap."""


class NoPeriodFound(HedgeplayError):
    """Sequence has no certified eventual period within its length."""


class NotAccessible(HedgeplayError):
    """Target node unreachable from the start node in the state graph."""


class PolicyFault(HedgeplayError):
    """Opponent policy returned something that is not a valid action."""


class DomainError(HedgeplayError, ValueError):
    """Numeric argument outside the mathematical domain of an operation."""


class TieWarning(UserWarning):
    """A comparison against a threshold landed within tie tolerance."""
