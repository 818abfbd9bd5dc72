"""Exception hierarchy shared by every stlf subpackage."""


class StlfError(Exception):
    """Base class for all errors raised by stlf."""


class ParseError(StlfError):
    """Malformed textual input (trace CSV, formula, model, requirement file).

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class FormulaSyntaxError(ParseError):
    pass


class ModelSyntaxError(ParseError):
    pass


class UnknownFunction(FormulaSyntaxError):
    pass


class MalformedInterval(FormulaSyntaxError):
    pass


class NonUniformSampling(ParseError):
    pass


class EmptyTrace(ParseError):
    pass


class InsufficientTrace(StlfError):
    """A temporal window reaches past the last sample in strict mode."""


class EmptyWindow(StlfError):
    """A temporal window contains no sample index after discretization."""


class UnboundSignal(StlfError):
    pass


class DomainError(StlfError):
    """Arithmetic outside a function's domain (division by zero, log of 0, ...)."""


class UnsupportedNegation(StlfError):
    pass


class NestedTemporal(StlfError):
    pass


class UnboundedInterval(StlfError):
    pass


class CyclicDependency(ModelSyntaxError):
    pass


class TypeMismatch(ModelSyntaxError):
    pass


class UnknownBuiltin(ModelSyntaxError):
    pass


class RangeViolation(StlfError):
    """A value left its declared range during simulation."""


class UnsupportedTheory(StlfError):
    """The model uses functions the SMT back end cannot encode."""


class PropertyNotSafety(StlfError):
    pass


class SolverUnavailable(StlfError):
    pass


class SolverProtocolError(StlfError):
    pass
