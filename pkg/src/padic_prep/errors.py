"""Exception hierarchy.

Every domain error carries a stable ``code`` string; the CLI reports it
verbatim as ``error_code``.
"""


class PadicPrepError(Exception):
    code = "Error"


class DivisionByZero(PadicPrepError, ZeroDivisionError):
    code = "DivisionByZero"


class ContextMismatch(PadicPrepError, ValueError):
    code = "ContextMismatch"


class PrecisionExhausted(PadicPrepError, ArithmeticError):
    code = "PrecisionExhausted"


class ConvergenceViolation(PadicPrepError, ValueError):
    code = "ConvergenceViolation"


class CoordinateMismatch(PadicPrepError, ValueError):
    code = "CoordinateMismatch"


class NotAUnit(PadicPrepError, ValueError):
    code = "NotAUnit"


class SubstitutionDiverges(PadicPrepError, ValueError):
    code = "SubstitutionDiverges"


class NotRegular(PadicPrepError, ValueError):
    code = "NotRegular"


class TruncationTooSmall(PadicPrepError, ValueError):
    code = "TruncationTooSmall"


class MembershipUndecidable(PadicPrepError):
    code = "MembershipUndecidable"


class NotEigenPrincipal(PadicPrepError, ValueError):
    code = "NotEigenPrincipal"


class ExactnessRequired(PadicPrepError, ValueError):
    code = "ExactnessRequired"


class NoAlignment(PadicPrepError):
    code = "NoAlignment"


class MaximalIdeal(PadicPrepError, ValueError):
    code = "MaximalIdeal"


class ZeroIdeal(PadicPrepError, ValueError):
    code = "ZeroIdeal"


class ComponentOracleRequired(PadicPrepError):
    code = "ComponentOracleRequired"


class NotLinearizable(PadicPrepError):
    code = "NotLinearizable"


class PreconditionUnverified(PadicPrepError):
    code = "PreconditionUnverified"


class UsageError(PadicPrepError):
    code = "UsageError"
