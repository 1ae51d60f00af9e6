"""Exception types shared across the package."""


class InfCompError(Exception):
    pass


class CertificationError(InfCompError, ValueError):
    """The family violates the summability hypothesis (sum of C_n diverges)."""


class OutsideCertifiedDisk(InfCompError, ValueError):
    pass


class BudgetExceeded(InfCompError, RuntimeError):
    """The requested accuracy needs more factors than the configured budget."""


class EvaluationOverflow(InfCompError, OverflowError):
    pass
