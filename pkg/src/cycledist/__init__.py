"""Cycle structure, trapping sets and cycle-aware construction of LDPC codes."""

from .errors import (CycleDistError, InvalidInputError, NumericFailureError,
                     UnsupportedSizeError)

__all__ = ["CycleDistError", "InvalidInputError", "NumericFailureError", "UnsupportedSizeError"]
