"""Error types that carry the name of the violated invariant."""

from __future__ import annotations


class InvariantViolation(ValueError):
    """A construction or operation received data breaking a named invariant."""

    def __init__(self, clause: str, message: str):
        super().__init__(f"{clause}: {message}")
        self.clause = clause


class NoMediatorError(InvariantViolation):
    """No mediating morphism exists where a universal property demands one."""


class MultipleMediatorsError(InvariantViolation):
    """Several mediators exist: terminality is broken and must be surfaced."""


def require(cond: bool, clause: str, message: str) -> None:
    if not cond:
        raise InvariantViolation(clause, message)
