from __future__ import annotations

from typing import Any


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""


class InputError(WorkbenchError, ValueError):
    """Malformed user data: unknown elements, bad files, syntax or arity errors."""


class ContractError(WorkbenchError, ValueError):
    """A caller broke the precondition of a pure operation."""


class PreconditionError(WorkbenchError, ValueError):
    """
    A mathematical hypothesis of an operation does not hold.

    `witness` carries the data that refutes it (for instance two base elements
    in different orbits when a transitive base is required).
    """

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class ResourceError(WorkbenchError, RuntimeError):
    """A configured search cap was exceeded."""

    def __init__(self, cap: str, limit: int, detail: str = ""):
        msg = f"{cap} exceeded (limit {limit})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.cap = cap
        self.limit = limit
