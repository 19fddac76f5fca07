"""
lambda-reciprocation — error hierarchy
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
Every failure carries a human `detail` and the process exit code the CLI maps it to:

  0  success
  1  validation failure
  2  invalid arguments / config / grid / path
  3  numeric-contract violation (incl. truncation and degenerate states)
"""

from __future__ import annotations
from typing import Any, Optional


class ReciprocationError(Exception):
    exit_code: int = 3

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self) -> str:
        return self.detail


# ─── EXIT 1 ────────────────────────────────────────────────────────────────────
class ValidationFailure(ReciprocationError):
    exit_code = 1


# ─── EXIT 2 ────────────────────────────────────────────────────────────────────
class InvalidArgumentError(ReciprocationError):
    exit_code = 2


class ConfigError(InvalidArgumentError):
    pass


class PathValidityError(InvalidArgumentError):
    """Requested computation path cannot be used for these parameters or this state."""


# ─── EXIT 3 ────────────────────────────────────────────────────────────────────
class NumericContractError(ReciprocationError):
    exit_code = 3


class TruncationError(NumericContractError):
    def __init__(self, detail: str, required_dim: int):
        super().__init__(f"{detail} (required Fock dim >= {required_dim})")
        self.required_dim = required_dim


class SingularGeneratorError(NumericContractError):
    pass


class DegenerateStateError(NumericContractError):
    # partial carries whatever the failing stage had already computed (e.g. a RoundTripReport)
    def __init__(self, detail: str, partial: Any = None):
        super().__init__(detail)
        self.partial = partial
