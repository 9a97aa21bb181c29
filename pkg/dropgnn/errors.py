"""Exception hierarchy shared by every dropgnn module."""

from __future__ import annotations


class DropGNNError(Exception):
    """Base class for all library errors."""


class GraphError(DropGNNError, ValueError):
    """Malformed graph, invalid port labelling, or node id out of range."""


class EnumerationLimitError(DropGNNError, ValueError):
    """An exact enumeration or isomorphism search would exceed its size guard."""


class DimensionMismatchError(DropGNNError, ValueError):
    """Model and input dimensions disagree."""


class NotOneCompleteError(DropGNNError, ValueError):
    """A port observation set is missing a 1-dropout needed for reconstruction."""


class TapeError(DropGNNError, RuntimeError):
    """Reverse-mode tape used out of order (backward before forward, eval tape, ...)."""


class GenerationError(DropGNNError, RuntimeError):
    """A random graph generator exhausted its retry budget."""


class DivergenceError(DropGNNError, RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, last_finite_loss: float | None) -> None:
        self.epoch = epoch
        self.last_finite_loss = last_finite_loss
        super().__init__(
            f"Non-finite loss at epoch {epoch} (last finite loss: {last_finite_loss})"
        )
