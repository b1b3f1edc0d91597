from app import INPUT_ERROR, RESOURCE_CAP, VERIFICATION_FAILURE


class FuscohError(Exception):
    """Base class for every error raised by fuscoh."""

    exit_code = VERIFICATION_FAILURE

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(FuscohError):
    exit_code = INPUT_ERROR


class ResourceCapError(FuscohError):
    exit_code = RESOURCE_CAP


class ConsistencyError(FuscohError):
    """An internal guard tripped: a construction violated a proven property."""

    exit_code = VERIFICATION_FAILURE


class ParseError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegreeMismatch(InputError):
    pass


class NotAnObject(InputError):
    pass


class ImageNotContained(InputError):
    pass


class CategoryNotConnected(InputError):
    pass


class SectionMismatch(InputError):
    pass


class InputNotExact(InputError):
    pass


class NotAnAlgebra(InputError):
    pass


class ConjugacyConditionViolated(InputError):
    pass


class NotASubgroupChain(InputError):
    pass


class NotLocallyConstant(InputError):
    pass


class SubgroupSpecError(InputError):
    pass


class UnknownProperty(InputError):
    pass


class ElementCapExceeded(ResourceCapError):
    pass


class CosetCapExceeded(ResourceCapError):
    pass


class DegreeCapExceeded(ResourceCapError):
    pass


class AxiomViolation(ConsistencyError):
    pass


class SurjectivityFailure(ConsistencyError):
    pass


class SectionUnavailable(ConsistencyError):
    pass


class RestrictionUndefined(ConsistencyError):
    pass


class NotPCentric(FuscohError):
    """C_G(P) does not split as Z(P) x (p'-group)."""
