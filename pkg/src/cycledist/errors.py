"""Exception hierarchy shared by all modules; the CLI maps each class to an exit code."""


class CycleDistError(Exception):
    exit_code = 1


class InvalidInputError(CycleDistError, ValueError):
    exit_code = 2


class InvalidEdgeError(InvalidInputError):
    pass


class DegreeOverflowError(InvalidInputError):
    pass


class MultiEdgeError(InvalidInputError):
    pass


class NotThetaOrDumbbellError(InvalidInputError):
    pass


class InvalidWalkError(InvalidInputError):
    pass


class NoSuchEtsError(InvalidInputError):
    pass


class UnknownValueError(InvalidInputError):
    """A Turán value outside every regime that can be evaluated exactly."""


class NotFoundError(InvalidInputError):
    pass


class ConstructionError(InvalidInputError):
    pass


class NumericFailureError(CycleDistError, ArithmeticError):
    exit_code = 3


class UnsupportedSizeError(CycleDistError):
    exit_code = 4
