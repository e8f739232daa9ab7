"""Exception hierarchy shared by all modules."""


class EllCMMError(Exception):
    pass


class DivisionByZero(EllCMMError, ZeroDivisionError):
    pass


class PoleAtOrigin(EllCMMError, ArithmeticError):
    """A series expansion was requested at a point where the function has a pole."""


class EvaluationPole(EllCMMError, ArithmeticError):
    """A denominator vanished under substitution or evaluation."""


class OddPowerResidue(EllCMMError, ValueError):
    """Even-power projection found an odd exponent (a convention error upstream)."""


class NonExactDivision(EllCMMError, ArithmeticError):
    pass


class NotInSpan(EllCMMError, ValueError):
    pass


class ZeroDenominator(EllCMMError, ArithmeticError):
    """A Nekrasov factor in a denominator vanished identically."""


class InstableTruncation(EllCMMError, ArithmeticError):
    """Re-expansion results depend on the truncation headroom."""


class TowerMismatch(EllCMMError, TypeError):
    pass


class CacheError(EllCMMError, OSError):
    pass
