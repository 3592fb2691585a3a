"""Exception types shared across the package."""

from __future__ import annotations


class BlockRankError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(BlockRankError):
    """Malformed or empty input text (edge lists, block files)."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class CoverageError(BlockRankError):
    """Blocks file and graph disagree: unknown node, or a node left uncovered."""


class ConfigurationError(BlockRankError):
    """Invalid parameter combination (policies, weights, personalization)."""


class DimensionError(BlockRankError):
    """Operands with incompatible shapes or a non-square matrix."""


class CapExceededError(BlockRankError):
    """A dense/debug operation was refused because the input exceeds its size cap."""


class ConvergenceError(BlockRankError):
    """Power iteration failed to reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class ReducibleModelError(BlockRankError):
    """Strict-mode refusal: no-teleportation ranking requested but the block
    indicator matrix is reducible, so the ranking vector may be ill-defined."""

    def __init__(self, message: str, components: tuple[tuple[int, ...], ...]):
        super().__init__(message)
        self.components = components
