# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Exceptions raised by ionets.

All exceptions derive from `IONetsError`. The command-line interface maps
`ParseError` (and its subclasses) to exit code 2 and the internal
consistency errors `SaturationOverflow` and `EngineDisagreement` to
exit code 3.
"""


class IONetsError(Exception):
    def __str__(self):
        return "\n".join(map(str, self.args))


class NotIO(IONetsError):
    """A transition does not have the immediate observation shape."""


class NotEnabled(IONetsError):
    pass


class InvalidStep(IONetsError):
    """A trajectory step is not enabled when it is replayed.

    Attributes:
        index (`int`):
            Position of the offending step.
    """

    def __init__(self, index: int, *args):
        super().__init__(f"step {index} is not enabled", *args)
        self.index = index


class DimensionMismatch(IONetsError):
    pass


class EmptyCube(IONetsError):
    pass


class SaturationOverflow(IONetsError):
    """Saturation left its resource bounds.

    Signals a defect or an under-dimensioned configuration, never an answer.
    """


class StateLimitExceeded(IONetsError):
    pass


class InvalidProtocol(IONetsError):
    pass


class EngineDisagreement(IONetsError):
    pass


class ParseError(IONetsError):
    """A document could not be parsed.

    Attributes:
        line (`int` or ``None``):
            1-based line of the offending input, if known.
        column (`int` or ``None``):
            1-based column of the offending input, if known.
    """

    def __init__(self, message: str, line: int = None, column: int = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownPlace(ParseError):
    pass


class DuplicateId(ParseError):
    pass
