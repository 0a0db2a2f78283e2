"""Exception types shared by all modules."""
from __future__ import annotations


class CubicLatError(Exception):
    """Base class."""


class SingularMinor(CubicLatError, ArithmeticError):
    def __init__(self, stage: int):
        super().__init__(f"leading principal minor of size {stage} vanishes")
        self.stage = stage


class CapExceeded(CubicLatError):
    pass


class NotPrimitive(CubicLatError):
    pass


class NotDistinguished(CubicLatError):
    pass


class NotGluing(CubicLatError):
    pass


class NotHassett(CubicLatError, ValueError):
    def __init__(self, d: int):
        super().__init__(f"{d} is not a Hassett discriminant (need d > 6, d = 0 or 2 mod 6)")
        self.d = d


class Unsatisfiable(CubicLatError):
    pass


class NotALinePair(CubicLatError):
    pass


class ReferenceMismatch(CubicLatError):
    """A recomputed value disagrees with the published reference data."""
