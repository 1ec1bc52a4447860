"""Exception types shared across the package."""


class NotDivisible(ArithmeticError):
    """An exact division has no solution in the Laurent ring."""


class NotCompatible(ValueError):
    """A pair (Lambda, B~) fails the compatibility condition."""

    def __init__(self, message, entry=None, block=None):
        super().__init__(message)
        self.entry = entry
        self.block = block


class PreconditionFailed(ValueError):
    """Input data violates the hypothesis an operation relies on."""


class DimensionMismatch(ValueError):
    pass
