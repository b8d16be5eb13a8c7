class GammaBenchError(Exception):
    pass


class DomainError(GammaBenchError, ValueError):
    pass


class InsufficientPrecisionError(GammaBenchError, ArithmeticError):
    pass


class UsageError(GammaBenchError):
    pass


class FormatError(GammaBenchError):
    pass
