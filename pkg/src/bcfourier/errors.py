"""Exception hierarchy.

Every error raised on a violated operation contract derives from
:class:`ContractViolation`; the CLI maps those to exit status 2 and keeps
writing a diagnostic payload. Anything else (bad JSON, wrong keys) is treated
as malformed input.
"""


class ContractViolation(Exception):
    """An operation was called outside its documented preconditions."""

    def payload(self):
        return {"error": type(self).__name__, "message": str(self)}


class WindowMismatch(ContractViolation):
    pass


class FieldMismatch(ContractViolation):
    pass


class InsufficientRoots(ContractViolation):
    pass


class NotInvertible(ContractViolation):
    pass


class SingularMatrix(ContractViolation):
    pass


class InsufficientPrecision(ContractViolation):
    pass


class PrecisionMismatch(ContractViolation):
    pass


class PrecisionLoss(ContractViolation):
    pass


class NotSolvable(ContractViolation):
    """Raised by the Frobenius solver; carries the obstructing class."""

    def __init__(self, coker_class):
        self.coker_class = coker_class
        super().__init__(f"nonzero cokernel class {coker_class}")

    def payload(self):
        return {"error": "NotSolvable", "coker_class": str(self.coker_class)}


class TorsionNotDualizable(ContractViolation):
    pass


class NegativeSlope(ContractViolation):
    pass


class NonPositiveSlope(ContractViolation):
    pass


class EqualSlopes(ContractViolation):
    pass


class HypothesisViolated(ContractViolation):
    pass


class UnsupportedCombination(ContractViolation):
    pass


class NotConvexifiable(ContractViolation):
    pass


class Indeterminate(ContractViolation):
    """A symbolic comparison cannot be decided in the requested regime."""
