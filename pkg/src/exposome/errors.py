"""Exception types raised across the package."""


class ExposomeError(Exception):
    """Base class; ``code`` is the machine-readable tag used by the CLI."""

    code = "ExposomeError"


class EmptyCode(ExposomeError, ValueError):
    code = "EmptyCode"


class EmptySegment(ExposomeError, ValueError):
    code = "EmptySegment"


class CoverageDomain(ExposomeError, ValueError):
    code = "CoverageDomain"


class TableFormatError(ExposomeError, ValueError):
    code = "TableFormat"


class ParamLoosened(ExposomeError, ValueError):
    code = "ParamLoosened"


class OutputCapExceeded(ExposomeError):
    """Clique enumeration hit its cap; ``partial`` holds what was found."""

    code = "OutputCapExceeded"

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


class BadCutoffs(ExposomeError, ValueError):
    code = "BadCutoffs"


class UnknownAxis(ExposomeError, ValueError):
    code = "UnknownAxis"


class IoFailure(ExposomeError, OSError):
    code = "IoFailure"
