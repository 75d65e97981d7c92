"""Exception hierarchy shared by all nfskit modules."""


class NfsError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class DomainError(NfsError, ValueError):
    pass


class NotSquarefreeError(DomainError):
    pass


class NoReconstructionError(NfsError):
    pass


class RankError(NfsError):
    pass


class SearchExhaustedError(NfsError):
    pass


class NoValidPhiError(NfsError):
    pass


class BadPrimeError(NfsError):
    pass


class DescentError(NfsError):
    """Automorphism does not descend to the finite field."""


class UnclassifiedError(NfsError):
    pass


class CertificationError(NfsError):
    pass


class BadEllError(NfsError):
    pass


class NotInKellError(NfsError):
    pass


class DegenerateMapError(NfsError):
    pass


class SingularUnitsError(NfsError):
    pass


class InsufficientRelationsError(NfsError):
    def __init__(self, msg, achieved=0):
        super().__init__(msg)
        self.achieved = achieved


class InconsistentSystemError(NfsError):
    pass


class NeedMoreRelationsError(NfsError):
    def __init__(self, msg, kernel_dim=0):
        super().__init__(msg)
        self.kernel_dim = kernel_dim


class RandomizationExhaustedError(NfsError):
    def __init__(self, msg, tries=0):
        super().__init__(msg)
        self.tries = tries


class OracleError(NfsError):
    pass
