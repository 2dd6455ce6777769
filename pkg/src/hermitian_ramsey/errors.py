"""Exception types shared across the package."""


class HermitianRamseyError(Exception):
    pass


class NotPrime(HermitianRamseyError, ValueError):
    pass


class CapExceeded(HermitianRamseyError, ValueError):
    pass


class DivisionByZero(HermitianRamseyError, ZeroDivisionError):
    pass


class InvariantViolation(HermitianRamseyError):
    """A constructed object failed one of its structural counts."""


class BudgetExceeded(HermitianRamseyError):
    pass


class EmptyX(HermitianRamseyError, ValueError):
    pass


class SizeExceedsN(HermitianRamseyError, ValueError):
    pass


class NotIndependent(HermitianRamseyError, ValueError):
    pass


class ConditionViolated(HermitianRamseyError, ValueError):
    pass


class Timeout(HermitianRamseyError):
    pass


class TooLarge(HermitianRamseyError, ValueError):
    pass
