"""Exception hierarchy."""
from __future__ import annotations


class QBisectError(Exception):
    """Base class for all package errors."""


class GraphError(QBisectError, ValueError):
    """Invalid graph or graph file.

    ``code`` identifies the diagnostic: one of ``malformed``, ``odd_n``,
    ``vertex_range``, ``duplicate_edge``, ``self_loop``, ``edge_count``,
    ``empty``.
    """

    def __init__(self, code: str, message: str, line: int | None = None):
        self.code = code
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class CapacityError(QBisectError, ValueError):
    """A size cap (enumeration or qubit count) would be exceeded."""


class NoAmplifiableBranchError(QBisectError):
    """Every branch has distance zero, so ax2 can never read 1."""


class ZeroProbabilityError(QBisectError, ValueError):
    """Conditioning requested on an outcome of (numerically) zero probability."""


class SimulationError(QBisectError, RuntimeError):
    """Internal simulator failure, e.g. measuring a degenerate state."""


class RestartLimitError(QBisectError, RuntimeError):
    """The restart cap was exhausted before a run completed.

    ``pr_ax2`` carries the per-iteration success probabilities that the run
    was fighting against, which usually points at a poorly chosen mu.
    """

    def __init__(self, message: str, pr_ax2=(), stage1_restarts: int = 0, stage3_restarts: int = 0):
        super().__init__(message)
        self.pr_ax2 = tuple(pr_ax2)
        self.stage1_restarts = stage1_restarts
        self.stage3_restarts = stage3_restarts
