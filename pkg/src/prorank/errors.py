"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ProrankError(Exception):
    """Base class for all errors raised by this package."""


class Undecided(ProrankError):
    """A capped search gave up. Never to be read as a negative answer."""

    def __init__(self, cap: str, limit: int, detail: str = ""):
        self.cap = cap
        self.limit = limit
        self.detail = detail
        msg = f"undecided: cap '{cap}' = {limit} exceeded"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SpecError(ProrankError, ValueError):
    """A group, family or formula description is malformed or inconsistent."""


class NotNormalError(ProrankError):
    pass


class NotPGroupError(ProrankError):
    pass


class UnsupportedSchema(ProrankError):
    """eval_fast was handed a formula outside the schema library."""


class FormulaSyntaxError(ProrankError, ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at offset {position}")
