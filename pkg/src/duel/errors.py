"""Exception hierarchy.

Two families matter to callers: ``InputError`` subclasses mean the caller
asked for something malformed or outside the decided catalogue, while
``InvariantViolation`` subclasses mean a runtime assertion of one of the
constructions failed, which points at an implementation bug.
"""


class DuelError(Exception):
    pass


class InputError(DuelError):
    pass


class InvariantViolation(DuelError):
    pass


class UndecidableComparison(InputError):
    pass


class UnsupportedArithmetic(InputError):
    pass


class Unsupported(InputError):
    pass


class EmptySet(InputError):
    pass


class DepthCapExceeded(InputError):
    pass


class SteppedBankruptRun(InputError):
    pass


class UnknownSpec(InputError):
    pass


class EmptyWindow(InputError):
    def __init__(self, history, message=None):
        self.history = history
        super().__init__(message or f"no wager-set element in window at history {history!r}")


class MismatchedRuns(InputError):
    pass


class InvalidState(InputError):
    pass


class PreconditionFailed(InputError):
    pass


class UnboundedA(PreconditionFailed):
    pass


class BNotBoundedAwayFromZero(PreconditionFailed):
    pass


class NotWellOrdered(PreconditionFailed):
    pass


class MissingColumns(InputError):
    pass


class ScenarioError(InputError):
    pass


class MonotonicityViolation(InvariantViolation):
    pass


class FragilityAssertionFailed(InvariantViolation):
    pass


class CasinoInvariantFailed(InvariantViolation):
    pass


class NotHistoryIndependent(InputError):
    pass
