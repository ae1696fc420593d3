# src/logic/errors.py
from __future__ import annotations

from typing import Optional, Sequence


class LogicError(Exception):
    """Base class for every error raised by src.logic."""


class ParseError(LogicError):
    def __init__(self, message: str, offset: int, text: str = "") -> None:
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class FragmentError(LogicError):
    pass


class AlgebraFormatError(LogicError):
    pass


class ResiduationError(LogicError):
    pass


class ClassCheckError(LogicError):
    def __init__(self, message: str, report: Optional[object] = None) -> None:
        self.report = report
        super().__init__(message)


class FrameError(LogicError):
    pass


class NuclearityError(FrameError):
    pass


class PartialOpError(LogicError):
    pass


class MissingZeroError(LogicError):
    pass


class UnnamedLogicError(LogicError):
    def __init__(self, message: str, valid: Sequence[str] = ()) -> None:
        self.valid = list(valid)
        if self.valid:
            message = f"{message} (valid: {', '.join(self.valid)})"
        super().__init__(message)


class ConstructionError(LogicError):
    pass
