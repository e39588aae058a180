from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Union

from .prep import DEFAULT_PHI

MuSetting = Union[int, str]


@dataclass(frozen=True)
class AlgorithmConfig:
    """Free parameters of one algorithm run.

    ``mu`` is an explicit dummy-qubit count or ``"auto"`` (derived from
    ``delta`` via :func:`qbisect.amplify.compute_mu`). ``iterations`` fixes the
    number of Q/measure rounds; ``None`` uses the trace's stopping iteration.
    ``r_max`` of ``None`` is derived from ``lam`` and ``m_ext``.
    """

    mode: str = "max"
    mu: MuSetting = 0
    delta: float = 0.9
    lam: float = 4.0
    phi: float = DEFAULT_PHI
    iterations: int | None = None
    r_max: int | None = None
    restart_cap: int = 10_000

    def __post_init__(self):
        if self.mode not in ("max", "min"):
            raise ValueError(f"mode must be 'max' or 'min', got {self.mode!r}")
        if self.mu != "auto" and (not isinstance(self.mu, int) or self.mu < 0):
            raise ValueError(f"mu must be 'auto' or a non-negative integer, got {self.mu!r}")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.iterations is not None and self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.restart_cap < 0:
            raise ValueError("restart_cap must be >= 0")

    @property
    def epsilon(self) -> float:
        return 10.0 ** (-self.lam)

    def resolve_mu(self, n: int) -> int:
        if self.mu == "auto":
            from .amplify import compute_mu

            return compute_mu(self.mode, n, self.delta)
        return int(self.mu)

    def to_dict(self) -> dict:
        return asdict(self)
