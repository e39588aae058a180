"""Gate-level execution of the whole circuit on a dense statevector.

Register layout (most significant first)::

    |v_0 ... v_{n-1}> |ax1> |c_0 ... c_{m_ext-1}> |ax2>

Dummy constraint qubits are materialised here (``|1>`` for MAX, ``|0>`` for
MIN), unlike the structured backend which folds them into the distances.
``ax1`` is measured after preparation and then dropped from the register.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import statevector as sv
from .amplify import resolve_r_max, probability_trace
from .config import AlgorithmConfig
from .errors import CapacityError, RestartLimitError
from .graph import Assignment, ConstraintVector, Graph, evaluate_constraints
from .prep import make_prep_plan, run_preparation_circuit

MAX_CIRCUIT_QUBITS = sv.MAX_QUBITS


@dataclass(frozen=True)
class Layout:
    n: int
    m: int
    mu: int
    mode: str

    @property
    def m_ext(self) -> int:
        return self.m + self.mu

    @property
    def total_qubits(self) -> int:
        """Qubits in the full register including ``ax1``."""
        return self.n + self.m_ext + 2

    @property
    def working_qubits(self) -> int:
        """Qubits held once ``ax1`` has been dropped."""
        return self.n + self.m_ext + 1

    def c(self, l: int) -> int:
        return self.n + l

    @property
    def ax2(self) -> int:
        return self.n + self.m_ext


def layout_for(g: Graph, cfg: AlgorithmConfig) -> Layout:
    layout = Layout(g.n, g.m, cfg.resolve_mu(g.n), cfg.mode)
    if layout.total_qubits > MAX_CIRCUIT_QUBITS:
        raise CapacityError(
            f"circuit needs {layout.total_qubits} qubits (n + m + mu + 2); cap is {MAX_CIRCUIT_QUBITS}"
        )
    return layout


def prepare(g: Graph, cfg: AlgorithmConfig) -> sv.StateVector:
    """Stage 1 on ``n + 1`` qubits: ``U_f D^q H^n``, before measuring ``ax1``."""
    return run_preparation_circuit(g.n, cfg.phi)


def evaluate_stage(g: Graph, layout: Layout, balanced: sv.StateVector) -> sv.StateVector:
    """Stage 2: attach constraint and ``ax2`` qubits and run the CNOT pairs."""
    tail = sv.StateVector.zeros(layout.m_ext + 1)
    s = balanced.tensor(tail)
    for l, (a, b) in enumerate(g.edges):
        sv.apply_cx(s, a, layout.c(l))
        sv.apply_cx(s, b, layout.c(l))
    if layout.mode == "max":
        for l in range(layout.m, layout.m_ext):
            sv.apply_x(s, layout.c(l))
    return s


def apply_q(s: sv.StateVector, layout: Layout) -> sv.StateVector:
    """MAX (or MIN, with negated controls) cascade of controlled-V onto ``ax2``."""
    negate = layout.mode == "min"
    for l in range(layout.m_ext):
        sv.apply_controlled_v(s, layout.c(l), layout.ax2, layout.m_ext, negate_control=negate)
    return s


def rounds_for(g: Graph, cfg: AlgorithmConfig) -> int:
    if cfg.iterations is not None:
        return cfg.iterations
    return probability_trace(g, cfg).iterations


@dataclass
class CircuitDiagnostics:
    rounds: int
    stage1_restarts: int = 0
    stage3_restarts: int = 0
    pr_ax1: float = 0.0
    pr_ax2: list[float] = field(default_factory=list)  # per round, from the successful attempt
    qubits: int = 0


def run_full_circuit(
    g: Graph, cfg: AlgorithmConfig, rng: np.random.Generator
) -> tuple[Assignment, ConstraintVector, CircuitDiagnostics]:
    """Execute the circuit with sampled measurements and restarts.

    ``ax1 = 0`` re-runs preparation; ``ax2 = 0`` at any round restarts from
    preparation. After the final round the vertex register is measured.
    """
    layout = layout_for(g, cfg)
    rounds = rounds_for(g, cfg)
    diag = CircuitDiagnostics(rounds=rounds, qubits=layout.total_qubits)
    prepared = prepare(g, cfg)
    diag.pr_ax1 = prepared.prob_one(g.n)

    while True:
        if diag.stage1_restarts + diag.stage3_restarts > cfg.restart_cap:
            raise RestartLimitError(
                f"restart cap {cfg.restart_cap} exhausted",
                pr_ax2=diag.pr_ax2,
                stage1_restarts=diag.stage1_restarts,
                stage3_restarts=diag.stage3_restarts,
            )
        s = prepared.copy()
        ax1, s = sv.measure_qubit(s, g.n, rng)
        if ax1 == 0:
            diag.stage1_restarts += 1
            continue
        s = evaluate_stage(g, layout, sv.drop_qubit(s, g.n, 1))
        diag.pr_ax2 = []
        failed = False
        for _ in range(rounds):
            apply_q(s, layout)
            diag.pr_ax2.append(s.prob_one(layout.ax2) / s.norm())
            outcome, s = sv.measure_qubit(s, layout.ax2, rng)
            if outcome == 0:
                failed = True
                break
            sv.apply_x(s, layout.ax2)
        if failed:
            diag.stage3_restarts += 1
            continue
        bits = sv.measure_register(s, range(g.n), rng)
        x = Assignment(bits)
        return x, evaluate_constraints(g, x), diag


@dataclass
class ConditionedRun:
    """Dense state after post-selecting ``ax1 = 1`` and ``rounds`` successes of ``ax2``."""

    layout: Layout
    state: sv.StateVector
    pr_ax1: float
    pr_ax2: list[float]
    prep_phase: complex  # global phase a_q/|a_q| left on the balanced superposition

    def joint_distribution(self, tol: float = 0.0) -> dict[tuple[int, int], float]:
        """``{(x, z_ext): probability}`` read off the register (``ax2`` is back at 0)."""
        lay = self.layout
        p = self.state.probabilities()
        out: dict[tuple[int, int], float] = {}
        zbits = lay.m_ext + 1
        for idx in np.nonzero(p > tol)[0]:
            idx = int(idx)
            x = idx >> zbits
            z = (idx >> 1) & ((1 << lay.m_ext) - 1)
            out[(x, z)] = out.get((x, z), 0.0) + float(p[idx])
        return out

    def amplitude(self, x: int, z_ext: int, ax2: int = 0) -> complex:
        lay = self.layout
        return complex(self.state.amps[(x << (lay.m_ext + 1)) | (z_ext << 1) | ax2])


def conditioned_run(g: Graph, cfg: AlgorithmConfig, rounds: int) -> ConditionedRun:
    """Deterministic counterpart of :func:`run_full_circuit` that post-selects every measurement."""
    layout = layout_for(g, cfg)
    s = prepare(g, cfg)
    pr_ax1, s = sv.postselect(s, g.n, 1)
    s = evaluate_stage(g, layout, sv.drop_qubit(s, g.n, 1))
    pr_ax2 = []
    for _ in range(rounds):
        apply_q(s, layout)
        p, s = sv.postselect(s, layout.ax2, 1)
        pr_ax2.append(p)
        sv.apply_x(s, layout.ax2)
    a_q = make_prep_plan(g.n, cfg.phi).a_q
    return ConditionedRun(layout, s, pr_ax1, pr_ax2, a_q / abs(a_q))


def dense_trace(g: Graph, cfg: AlgorithmConfig, rounds: int | None = None) -> tuple[list[float], list[float]]:
    """Per-round ``Pr(ax2=1)`` and ``Pr(ax2=1 and optimal)`` measured on the dense state."""
    layout = layout_for(g, cfg)
    if rounds is None:
        rounds = min(rounds_for(g, cfg), resolve_r_max(layout.m_ext, cfg))
    s = prepare(g, cfg)
    _, s = sv.postselect(s, g.n, 1)
    s = evaluate_stage(g, layout, sv.drop_qubit(s, g.n, 1))
    idx = np.arange(s.amps.size, dtype=np.int64)
    zreg = (idx >> 1) & ((1 << layout.m_ext) - 1)
    ones = np.zeros(idx.size, dtype=np.int64)
    for l in range(layout.m_ext):
        ones += (zreg >> l) & 1
    dist = ones if layout.mode == "max" else layout.m_ext - ones
    support = np.abs(s.amps) > 0
    d_s = dist[support].max()
    target = (dist == d_s) & (s.bit_of(layout.ax2, idx) == 1)
    pr_ax2, pr_target = [], []
    for _ in range(rounds):
        apply_q(s, layout)
        probs = s.probabilities()
        pr_target.append(float(probs[target].sum()))
        p, s = sv.postselect(s, layout.ax2, 1)
        pr_ax2.append(p)
        sv.apply_x(s, layout.ax2)
    return pr_ax2, pr_target
