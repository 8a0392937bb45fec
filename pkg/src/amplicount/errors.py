"""Exception hierarchy shared by all modules."""


class AmplicountError(Exception):
    """Base class for every error raised by this package."""


class ContractError(AmplicountError, ValueError):
    """A precondition on the arguments was violated."""


class CapacityError(AmplicountError):
    """The requested simulation would exceed the configured size caps."""


class BoundaryError(ContractError):
    """A closed form was evaluated where it divides by zero (a = 0 or a = 1)."""


class InternalConsistencyError(AmplicountError, AssertionError):
    """An invariant that should hold by construction was found broken."""
