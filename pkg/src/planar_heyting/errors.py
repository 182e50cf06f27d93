"""Exception hierarchy shared by every module of the package."""


class ZhaError(Exception):
    """Base class; the CLI maps any subclass to exit status 1."""


class RangeError(ZhaError, ValueError):
    pass


class DomainError(ZhaError, ValueError):
    """An argument does not belong to the structure it is used with."""


class ShapeError(ZhaError, ValueError):
    """Two values that must share a host (or a size) do not."""


class ParseError(ZhaError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractError(ZhaError):
    """A precondition that the caller was responsible for does not hold."""


class RefusalError(ZhaError):
    """An enumeration would exceed its size guard."""


class InputError(ZhaError, ValueError):
    pass
