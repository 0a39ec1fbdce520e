"""Shared exception types."""


class RingSpecError(ValueError):
    """A ring specification string failed to parse or had invalid parameters."""


class SchemaError(ValueError):
    """A certificate document is structurally malformed (as opposed to wrong)."""


class BudgetExceeded(RuntimeError):
    """An enumeration exceeded its configured budget.

    `required` carries the count that would have been needed.
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class IdentityViolation(Exception):
    """An exact identity that the construction guarantees failed to hold.

    `identity` is a stable short name (also used by certificate
    revalidation), e.g. ``"isometry"`` or ``"e_idempotent"``.
    """

    def __init__(self, identity: str, detail: str = ""):
        msg = identity if not detail else f"{identity}: {detail}"
        super().__init__(msg)
        self.identity = identity
