"""Exception types shared across the pipeline (mapped to CLI exit codes)."""
from __future__ import annotations


class BudgetExceeded(RuntimeError):
    """Refused work: an ambient size is above a configured cap."""

    def __init__(self, message: str, **sizes):
        super().__init__(message)
        self.sizes = sizes

    def report(self) -> str:
        lines = [f"budget exceeded: {self.args[0]}"]
        for k in sorted(self.sizes):
            lines.append(f"{k} {self.sizes[k]}")
        return "\n".join(lines)


class ContractViolation(ValueError):
    """Inputs violate an operation's preconditions."""


DEFAULT_CAP_PLUCKER_DIM = 5000
DEFAULT_CAP_MINOR_COUNT = 5000
