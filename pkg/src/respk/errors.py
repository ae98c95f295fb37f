class RespkError(Exception):
    """Base class for recoverable, reported failures."""


class CapExceeded(RespkError):
    """A configured enumeration, degree or recursion budget ran out."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeded cap {cap}")
        self.what = what
        self.cap = cap


class PreconditionError(RespkError, ValueError):
    pass


class HypothesisViolated(RespkError):
    """A commutator hypothesis of a power-divisibility check fails at level ``r``."""

    def __init__(self, r: int):
        super().__init__(f"commutator hypothesis fails at r = {r}")
        self.r = r


class NormalizationFailed(RespkError):
    pass
