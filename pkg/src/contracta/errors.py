"""Exception hierarchy shared by every contracta module."""


class ContractaError(Exception):
    """Base class for all library errors."""


class DivergentLimit(ContractaError):
    def __init__(self, exponent, where=None):
        self.exponent = exponent
        self.where = where
        msg = f"divergent eps-limit: term eps^{exponent} survives"
        if where is not None:
            msg += f" at {where}"
        super().__init__(msg)


class DimensionMismatch(ContractaError):
    pass


class NotInvertible(ContractaError):
    pass


class PoleAtBasePoint(ContractaError):
    pass


class InsufficientJetOrder(ContractaError):
    pass


class UnknownGenerator(ContractaError):
    pass


class MissingSlot(ContractaError):
    pass


class InvalidParameters(ContractaError):
    pass


class ZeroDenominatorPochhammer(ContractaError):
    pass


class SingularAtZero(ContractaError):
    pass


class EvaluationDomainError(ContractaError):
    pass


class LimitMismatch(ContractaError):
    pass


class RelationFails(ContractaError):
    pass


class RecurrenceMismatch(ContractaError):
    def __init__(self, n, discrepancy):
        self.n = n
        self.discrepancy = discrepancy
        super().__init__(f"recurrence fails at n={n}: discrepancy {discrepancy}")


class ConvergenceFailure(ContractaError):
    pass


class UnknownSuite(ContractaError):
    pass


class InvalidFlag(ContractaError):
    pass


class ParseError(ContractaError):
    pass
