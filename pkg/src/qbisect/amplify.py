"""Branch-level simulation of the partial-negation amplification loop.

After preparation and constraint evaluation the register holds
``sum_k alpha_k |x_k>|z_k>`` over balanced assignments. The operator Q applies
``V`` (the ``m_ext``-th root of X) to ``ax2`` once per constraint bit that is
1 (MAX) or 0 (MIN), so branch ``k`` sees ``V^{d_k}`` and ``ax2`` ends in
``(1+t^d)/2 |0> + (1-t^d)/2 |1>`` with ``t = exp(i pi / m_ext)``. Keeping only
runs where ``ax2`` reads 1 reweights branches by ``sin^2(d pi / 2 m_ext)`` per
round, which concentrates mass on the largest distance.

``mu`` dummy constraint bits are never materialised: they are constant, so
they add ``mu`` to every distance and to ``m_ext``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import asin, ceil, cos, log, pi, sin, sqrt

import numpy as np

from .config import AlgorithmConfig
from .errors import (
    CapacityError,
    NoAmplifiableBranchError,
    RestartLimitError,
    ZeroProbabilityError,
)
from .graph import (
    ENUMERATION_CAP,
    Assignment,
    ConstraintVector,
    Graph,
    balanced_cuts,
    evaluate_constraints,
)
from .prep import make_prep_plan

_ZERO_PROB = 1e-24


@dataclass(frozen=True)
class Branch:
    x: Assignment
    z: ConstraintVector
    d: int
    amp: complex


@dataclass
class BranchSet:
    """All branches of one register state, stored column-wise."""

    graph: Graph
    mode: str
    mu: int
    states: np.ndarray  # assignment integers, vertex 0 = MSB
    cuts: np.ndarray
    d: np.ndarray
    amps: np.ndarray

    @property
    def m_ext(self) -> int:
        return self.graph.m + self.mu

    def __len__(self) -> int:
        return int(self.states.size)

    def __getitem__(self, k: int) -> Branch:
        x = Assignment.from_int(int(self.states[k]), self.graph.n)
        return Branch(x, evaluate_constraints(self.graph, x), int(self.d[k]), complex(self.amps[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm(self) -> float:
        return float(self.probabilities().sum())

    def with_amps(self, amps: np.ndarray) -> BranchSet:
        return BranchSet(self.graph, self.mode, self.mu, self.states, self.cuts, self.d, amps)

    def extended_constraints(self, k: int) -> int:
        """Constraint register of branch ``k`` incl. dummy bits, as an ``m_ext``-bit integer."""
        z = evaluate_constraints(self.graph, Assignment.from_int(int(self.states[k]), self.graph.n)).to_int()
        dummy = (1 << self.mu) - 1 if self.mode == "max" else 0
        return (z << self.mu) | dummy

    def joint_distribution(self) -> dict[tuple[int, int], float]:
        """``{(x, z_ext): probability}`` over branches with nonzero weight."""
        p = self.probabilities()
        return {
            (int(self.states[k]), self.extended_constraints(k)): float(p[k]) for k in range(len(self)) if p[k] > 0
        }


def distances(cuts: np.ndarray, m: int, mode: str, mu: int) -> np.ndarray:
    base = cuts if mode == "max" else m - cuts
    return np.asarray(base, dtype=np.int64) + mu


def build_branches(g: Graph, cfg: AlgorithmConfig | None = None, mu: int | None = None) -> BranchSet:
    """One branch per balanced assignment, each with amplitude ``1/sqrt(M)``."""
    cfg = cfg or AlgorithmConfig()
    if g.n > ENUMERATION_CAP:
        raise CapacityError(f"n = {g.n} exceeds the enumeration cap of {ENUMERATION_CAP}")
    mu = cfg.resolve_mu(g.n) if mu is None else mu
    states, cuts = balanced_cuts(g)
    amps = np.full(states.size, 1 / sqrt(states.size), dtype=np.complex128)
    return BranchSet(g, cfg.mode, mu, states, cuts, distances(cuts, g.m, cfg.mode, mu), amps)


@dataclass
class AuxPairs:
    """Per-branch ``ax2`` amplitudes ``((1+t^d)/2, (1-t^d)/2)`` after one Q."""

    branches: BranchSet
    zero: np.ndarray
    one: np.ndarray

    def prob(self, outcome: int) -> float:
        comp = self.one if outcome else self.zero
        return float(np.sum(np.abs(self.branches.amps * comp) ** 2))


def apply_q_operator(branches: BranchSet, m_ext: int | None = None) -> AuxPairs:
    m_ext = branches.m_ext if m_ext is None else m_ext
    td = np.exp(1j * np.pi * branches.d / m_ext)
    return AuxPairs(branches, (1 + td) / 2, (1 - td) / 2)


def condition_on_ax2(pairs: AuxPairs, outcome: int = 1) -> BranchSet:
    """Post-measurement branches for ``ax2 = outcome``, renormalised, phases kept.

    After outcome 1 the circuit resets ``ax2`` with X, so the result again
    describes ``ax2 = |0>``.
    """
    p = pairs.prob(outcome)
    if p < _ZERO_PROB:
        raise ZeroProbabilityError(f"ax2 = {outcome} has zero probability")
    comp = pairs.one if outcome else pairs.zero
    return pairs.branches.with_amps(pairs.branches.amps * comp / sqrt(p))


def evolve(branches: BranchSet, rounds: int) -> tuple[BranchSet, list[float]]:
    """Apply ``rounds`` successful Q/measure steps; also returns each round's Pr(ax2=1)."""
    probs = []
    for _ in range(rounds):
        pairs = apply_q_operator(branches)
        probs.append(pairs.prob(1))
        branches = condition_on_ax2(pairs, 1)
    return branches, probs


@dataclass(frozen=True)
class IterationBound:
    m_ext: int
    lam: float
    r: int  # smallest r with sin^{2r}((m_ext-1) pi / 2 m_ext) <= 10^-lam
    residual: float  # that worst-case ratio at r
    quadratic_bound: float  # lam * (2 m_ext / pi)^2
    upper_bound: float  # lam * ln(10) * (2 m_ext / pi)^2, always >= r - 1

    @property
    def within_quadratic_bound(self) -> bool:
        return self.r <= self.quadratic_bound


def _worst_ratio_log(m_ext: int) -> float:
    # log of sin^2((m_ext-1) pi / 2 m_ext) = 2 log cos(pi / 2 m_ext)
    return 2 * log(cos(pi / (2 * m_ext))) if m_ext > 1 else float("-inf")


def required_iterations(m_ext: int, lam: float) -> IterationBound:
    """Rounds needed so a next-best branch at ``m_ext - 1`` is suppressed by ``10^-lam``."""
    if m_ext < 1:
        raise ValueError("m_ext must be >= 1")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    target = -lam * log(10)
    step = _worst_ratio_log(m_ext)
    if step == float("-inf"):
        r = 1
    else:
        r = max(1, ceil(target / step))
        while r > 1 and (r - 1) * step <= target:
            r -= 1
        while r * step > target:
            r += 1
    residual = 0.0 if step == float("-inf") else float(np.exp(r * step))
    scale = (2 * m_ext / pi) ** 2
    return IterationBound(m_ext, lam, r, residual, lam * scale, lam * log(10) * scale)


def resolve_r_max(m_ext: int, cfg: AlgorithmConfig) -> int:
    if cfg.r_max is not None:
        return cfg.r_max
    bound = required_iterations(m_ext, cfg.lam)
    return max(bound.r, ceil(bound.quadratic_bound))


def compute_mu(mode: str, n: int, delta: float, tight: bool = False) -> int:
    """Dummy-qubit count giving first-round ``Pr(ax2=1) >= delta`` on ``K_n``.

    ``omega = (2/pi) asin(sqrt(delta))``. MAX uses
    ``(1/(1-omega)) ((n^2/2)(2 omega - 1) - (n/2) omega)``; ``tight=True``
    swaps ``n^2/2`` for ``n^2/4``, the smallest count that still meets
    ``delta`` on ``K_n``. MIN uses ``(n^2/4)(2 omega - 1)/(1 - omega) + n/2``.
    Results are rounded up and clamped at zero.
    """
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if n % 2:
        raise ValueError("n must be even")
    omega = (2 / pi) * asin(sqrt(delta))
    if mode == "max":
        quad = n * n / (4 if tight else 2)
        mu = (quad * (2 * omega - 1) - (n / 2) * omega) / (1 - omega)
    else:
        mu = (n * n / 4) * (2 * omega - 1) / (1 - omega) + n / 2
    # guard against 30.0000000001 style rounding pushing ceil up
    return max(0, ceil(round(mu, 9)))


def complete_graph_first_pr(mode: str, n: int, mu: int) -> float:
    """First-round ``Pr(ax2=1)`` on ``K_n``, where every balanced cut has size ``n^2/4``."""
    m = n * (n - 1) // 2
    d = n * n // 4 if mode == "max" else m - n * n // 4
    return sin(pi * (d + mu) / (2 * (m + mu))) ** 2


@dataclass(frozen=True)
class TraceRecord:
    r: int
    pr_ax2: float
    pr_target: float
    distribution: dict[int, float]


@dataclass
class ProbabilityTrace:
    """Closed-form per-round probabilities, conditioned on all earlier successes.

    ``pr_target[r-1]`` is the probability of reading ``ax2 = 1`` at round ``r``
    *and* holding an optimal branch; ``target_mass[r-1]`` is the optimal
    class's share after that success, i.e. ``pr_target / pr_ax2``.
    """

    mode: str
    mu: int
    m_ext: int
    epsilon: float
    r_max: int
    classes: np.ndarray  # distinct distances, ascending
    counts: np.ndarray
    pr_ax2: np.ndarray
    pr_target: np.ndarray
    masses: np.ndarray  # (rounds, classes)
    converged: bool

    @property
    def d_s(self) -> int:
        return int(self.classes[-1])

    @property
    def iterations(self) -> int:
        return int(self.pr_ax2.size)

    @property
    def limit(self) -> float:
        return sin(self.d_s * pi / (2 * self.m_ext)) ** 2

    @property
    def target_mass(self) -> np.ndarray:
        return self.masses[:, -1]

    @property
    def records(self) -> list[TraceRecord]:
        out = []
        for i in range(self.iterations):
            dist = {int(d): float(p) for d, p in zip(self.classes, self.masses[i])}
            out.append(TraceRecord(i + 1, float(self.pr_ax2[i]), float(self.pr_target[i]), dist))
        return out


class DistanceClasses:
    """Power-sum evaluation over distance classes, scaled by the best class to avoid underflow."""

    def __init__(self, d: np.ndarray, m_ext: int):
        classes, counts = np.unique(np.asarray(d, dtype=np.int64), return_counts=True)
        if classes[-1] <= 0:
            raise NoAmplifiableBranchError("every branch has distance 0; ax2 can never read 1")
        self.m_ext = m_ext
        self.classes = classes
        self.counts = counts.astype(np.float64)
        self.total = float(counts.sum())
        self.s = np.sin(classes * np.pi / (2 * m_ext)) ** 2
        self.s_max = float(self.s[-1])
        self.rho = self.s / self.s_max

    def _weights(self, r: np.ndarray) -> np.ndarray:
        # counts * rho^r for each r (rows) and class (columns); 0**0 == 1
        return self.counts * np.power(self.rho[None, :], np.asarray(r, dtype=np.float64)[:, None])

    def pr_ax2(self, r: np.ndarray) -> np.ndarray:
        r = np.atleast_1d(r)
        return self.s_max * self._weights(r).sum(axis=1) / self._weights(r - 1).sum(axis=1)

    def pr_target(self, r: np.ndarray) -> np.ndarray:
        r = np.atleast_1d(r)
        return self.s_max * self.counts[-1] / self._weights(r - 1).sum(axis=1)

    def masses(self, r: np.ndarray) -> np.ndarray:
        w = self._weights(np.atleast_1d(r))
        return w / w.sum(axis=1, keepdims=True)

    def log_survival(self, r: np.ndarray) -> np.ndarray:
        """``log prod_{i<=r} Pr_i(ax2=1)`` starting from uniform branches."""
        r = np.atleast_1d(np.asarray(r, dtype=np.float64))
        with np.errstate(divide="ignore"):
            return r * log(self.s_max) + np.log(self._weights(r).sum(axis=1) / self.total)


def probability_trace(g: Graph, cfg: AlgorithmConfig | None = None, branches: BranchSet | None = None) -> ProbabilityTrace:
    """Per-round ``Pr(ax2=1)``, ``Pr(target)`` and class masses until convergence.

    Stops at the first round with ``|pr_ax2 - pr_target| <= 10^-lam`` or at
    ``r_max``.
    """
    cfg = cfg or AlgorithmConfig()
    branches = branches if branches is not None else build_branches(g, cfg)
    dc = DistanceClasses(branches.d, branches.m_ext)
    r_max = resolve_r_max(branches.m_ext, cfg)
    rs = np.arange(1, r_max + 1)
    pr_ax2 = dc.pr_ax2(rs)
    pr_target = dc.pr_target(rs)
    hit = np.nonzero(np.abs(pr_ax2 - pr_target) <= cfg.epsilon)[0]
    stop = int(hit[0]) + 1 if hit.size else r_max
    return ProbabilityTrace(
        mode=cfg.mode,
        mu=branches.mu,
        m_ext=branches.m_ext,
        epsilon=cfg.epsilon,
        r_max=r_max,
        classes=dc.classes,
        counts=dc.counts.astype(np.int64),
        pr_ax2=pr_ax2[:stop],
        pr_target=pr_target[:stop],
        masses=dc.masses(rs[:stop]),
        converged=bool(hit.size),
    )


@dataclass(frozen=True)
class SampleResult:
    assignment: Assignment
    cut: int
    iterations_used: int
    stage1_restarts: int
    stage3_restarts: int


@dataclass
class Sampler:
    """Seeded end-to-end runs on the structured backend.

    Each attempt draws the preparation outcome (success ``|a_q|^2``), then the
    ``ax2`` outcomes of up to ``R`` rounds, restarting from preparation on any
    failure. The ``ax2`` sequence is drawn with one uniform per attempt: rounds
    ``1..r`` all succeed iff ``u < S(r)``, where ``S(r)`` is the product of the
    conditional per-round success probabilities.
    """

    graph: Graph
    cfg: AlgorithmConfig = field(default_factory=AlgorithmConfig)

    def __post_init__(self):
        self.branches = build_branches(self.graph, self.cfg)
        self.trace = probability_trace(self.graph, self.cfg, self.branches)
        self.rounds = self.cfg.iterations or self.trace.iterations
        self.classes = DistanceClasses(self.branches.d, self.branches.m_ext)
        self.log_survival = self.classes.log_survival(np.arange(0, self.rounds + 1))
        self.prep_success = make_prep_plan(self.graph.n, self.cfg.phi).success_prob
        td = np.exp(1j * np.pi * self.branches.d / self.branches.m_ext)
        # amplitude after R successes is amp * ((1 - t^d)/2)^R, renormalised
        with np.errstate(divide="ignore"):
            logw = self.rounds * np.log(np.abs((1 - td) / 2) ** 2)
        logw -= logw.max()
        w = np.exp(logw)
        self.final_probs = w / w.sum()

    def per_round_pr_ax2(self) -> np.ndarray:
        return self.classes.pr_ax2(np.arange(1, self.rounds + 1))

    def run(self, rng: np.random.Generator) -> SampleResult:
        stage1 = stage3 = 0
        log_s_final = self.log_survival[-1]
        while True:
            if stage1 + stage3 > self.cfg.restart_cap:
                raise RestartLimitError(
                    f"restart cap {self.cfg.restart_cap} exhausted "
                    f"({stage1} preparation, {stage3} amplification restarts)",
                    pr_ax2=self.per_round_pr_ax2(),
                    stage1_restarts=stage1,
                    stage3_restarts=stage3,
                )
            if rng.random() >= self.prep_success:
                stage1 += 1
                continue
            u = 1.0 - rng.random()  # (0, 1]
            if log(u) < log_s_final:
                break
            stage3 += 1
        k = int(rng.choice(self.final_probs.size, p=self.final_probs))
        x = Assignment.from_int(int(self.branches.states[k]), self.graph.n)
        return SampleResult(x, int(self.branches.cuts[k]), self.rounds, stage1, stage3)

    def failure_round(self, u: float) -> int | None:
        """Round at which an attempt with uniform ``u`` first reads ``ax2 = 0`` (None if never)."""
        below = np.nonzero(log(u) >= self.log_survival[1:])[0]
        return int(below[0]) + 1 if below.size else None


def sample_run(g: Graph, cfg: AlgorithmConfig | None = None, rng: np.random.Generator | None = None) -> SampleResult:
    rng = rng if rng is not None else np.random.default_rng(0)
    return Sampler(g, cfg or AlgorithmConfig()).run(rng)
