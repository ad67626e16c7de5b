"""
Errors raised by kakeyalabpy.

Outcomes that are part of normal operation (uncovered differences, a
failed prime-pattern search) are returned as values instead.
"""


class KakeyaLabError(Exception):
    pass


class InstanceTooLarge(KakeyaLabError, ValueError):
    '''
    An instance exceeds a configured cap.

    Args:
        what (str): The quantity that is too large.
        size (int): Its size.
        cap (int): The cap it exceeds.
    '''
    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        KakeyaLabError.__init__(
            self, '%s is %s, above the cap %s' % (what, size, cap))


class PreconditionError(KakeyaLabError, ValueError):
    '''
    An input violates the precondition of an operation.

    Args:
        message (str): What is wrong.
        **details: Machine-readable details (offending differences,
            minimal valid parameters, ...), stored as attributes.
    '''
    def __init__(self, message, **details):
        self.details = details
        for name, value in details.items():
            setattr(self, name, value)
        KakeyaLabError.__init__(self, message)


class BaseTooSmall(PreconditionError):
    def __init__(self, base, minimal_base):
        PreconditionError.__init__(
            self,
            'base %d is too small, the minimal admissible base is %d'
            % (base, minimal_base),
            base=base, minimal_base=minimal_base)


class RetryBudgetExhausted(KakeyaLabError, RuntimeError):
    '''
    A Las-Vegas loop ran out of samples.

    Args:
        what (str): The step that failed.
        attempts (int): How many samples were drawn.
        best: The best attempt seen, for replay.
    '''
    def __init__(self, what, attempts, best=None):
        self.what = what
        self.attempts = attempts
        self.best = best
        KakeyaLabError.__init__(
            self, '%s: no acceptable sample in %d attempts' % (what, attempts))


class ConstructionError(KakeyaLabError, AssertionError):
    pass


class StageFailed(KakeyaLabError, RuntimeError):
    '''
    A stage of a multi-stage run failed.

    Args:
        stage (str): The stage name.
        cause (Exception): The original error.
    '''
    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        KakeyaLabError.__init__(self, '%s: %s' % (stage, cause))
