"""Exception types shared across the package."""
from __future__ import annotations


class CrLabError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(CrLabError, ValueError):
    """Malformed or out-of-contract input (bad dimension, non-unitary, ...)."""


class BranchCutError(CrLabError):
    """A matrix-log eigenphase sits inside the guard band around the -1 branch cut."""

    def __init__(self, eigenphase: float, guard: float):
        self.eigenphase = float(eigenphase)
        self.guard = float(guard)
        super().__init__(
            f"eigenphase {eigenphase:+.9e} rad is within {guard:g} rad of the "
            "principal-branch cut at pi; the matrix logarithm is ambiguous here"
        )


class DegenerateNormError(CrLabError):
    """A closed-form path hit a vanishing norm; use the numeric matrix-log path."""


class UnsupportedModeError(CrLabError, ValueError):
    """Operation requires a coefficient model mode it did not receive."""


class IncompleteRecordError(CrLabError, ValueError):
    """A tomography record is missing cells required by a reconstruction."""


class NearResonanceError(CrLabError):
    """Circuit parameters sit too close to a resonance pole for the formula to hold."""


class FitDegenerateError(CrLabError):
    """Decay/least-squares fit cannot proceed (non-decaying or empty data)."""

    def __init__(self, message: str, data=None):
        self.data = data
        super().__init__(message)


class OutOfScopeError(CrLabError, ValueError):
    """Requested size exceeds the desk-scale limits this package supports."""
