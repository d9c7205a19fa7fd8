"""Exception hierarchy shared by all modules."""


class DihomError(Exception):
    """Base class; ``exit_code`` is used by the command line."""

    exit_code = 3


class InputError(DihomError):
    exit_code = 1


class ZeroDimensional(InputError):
    pass


class MixedLength(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class NotComposable(DihomError):
    def __init__(self, p, detail=""):
        self.p = p
        super().__init__(f"not composable along dimension {p}" + (f": {detail}" if detail else ""))


class CapExceeded(DihomError):
    exit_code = 2

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotExhaustive(CapExceeded):
    pass


class DegenerateGrid(InputError):
    pass


class UnsupportedDimension(InputError):
    pass


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class NotAcyclic(InputError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("edge graph has a directed cycle: " + " -> ".join(self.cycle))


class NotFillable(DihomError):
    pass


class InconsistentTop(DihomError):
    pass


class DimensionTooHigh(InputError):
    pass


class NotAChainMap(DihomError):
    pass


class NotNonContracting(InputError):
    pass


class InvalidModel(InputError):
    pass
