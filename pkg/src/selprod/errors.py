class SelprodError(Exception):
    pass


class BudgetExhausted(SelprodError):
    """A recursion ran past its configured expansion or depth budget.

    For the unbounded product this is how a control function that never
    terminates the play (within the budget) is reported.
    """


class DepthCapExceeded(SelprodError):
    pass


class MuSearchFailed(SelprodError):
    pass


class MonotonicityViolation(SelprodError):
    pass


class InternalInvariantViolation(SelprodError):
    pass


class GameFileError(SelprodError, ValueError):
    pass
