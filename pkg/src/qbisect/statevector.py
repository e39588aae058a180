"""Dense statevector with the handful of gates the bisection circuit needs.

Qubit 0 is the most significant bit of a basis index. Gate functions update
the state in place and return it, so calls can be chained; take a
``copy()`` first when the original is still needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Callable, Sequence, Union

import numpy as np

from . import kernels
from .errors import CapacityError, SimulationError

MAX_QUBITS = 24
UNITARY_TOL = 1e-12

H_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) / sqrt(2)
X_MATRIX = np.array([[0, 1], [1, 0]], dtype=np.complex128)

Marked = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


@dataclass
class StateVector:
    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise CapacityError(f"{self.num_qubits} qubits outside [1, {MAX_QUBITS}]")
        self.amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.num_qubits,):
            raise ValueError("amplitude array does not match qubit count")

    @classmethod
    def zeros(cls, num_qubits: int) -> StateVector:
        return cls.basis(num_qubits, 0)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> StateVector:
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise CapacityError(f"{num_qubits} qubits outside [1, {MAX_QUBITS}]")
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> StateVector:
        index = 0
        for b in bits:
            index = (index << 1) | int(b)
        return cls.basis(len(bits), index)

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def bit_of(self, qubit: int, indices: np.ndarray | None = None) -> np.ndarray:
        """Value of ``qubit`` for each basis index (all indices by default)."""
        if indices is None:
            indices = np.arange(self.amps.size, dtype=np.int64)
        return (indices >> (self.num_qubits - 1 - qubit)) & 1

    def prob_one(self, qubit: int) -> float:
        return float(self.probabilities()[self.bit_of(qubit) == 1].sum())

    def tensor(self, other: StateVector) -> StateVector:
        """``self ⊗ other``; ``other``'s qubits are appended after ours."""
        return StateVector(self.num_qubits + other.num_qubits, np.kron(self.amps, other.amps))


@dataclass(frozen=True)
class GateSpec:
    kind: str  # H, X, CX, CV, PHASE, U
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    params: dict = field(default_factory=dict)


def _check_qubits(s: StateVector, qubits: Sequence[int]) -> None:
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"qubit indices must be distinct: {list(qubits)}")
    for q in qubits:
        if not 0 <= q < s.num_qubits:
            raise IndexError(f"qubit {q} out of range for {s.num_qubits}-qubit state")


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ValueError("single-qubit gate must be 2x2")
    err = np.max(np.abs(u.conj().T @ u - np.eye(2)))
    if err > tol:
        raise ValueError(f"matrix is not unitary (max deviation {err:.3e})")
    return u


def v_matrix(m_ext: int, power: int = 1) -> np.ndarray:
    """``power``-th power of the principal ``m_ext``-th root of Pauli-X.

    With ``t = exp(i*pi/m_ext)`` this is ``0.5 * [[1+t^d, 1-t^d], [1-t^d, 1+t^d]]``.
    """
    if m_ext < 1:
        raise ValueError("m_ext must be >= 1")
    td = np.exp(1j * np.pi * power / m_ext)
    return 0.5 * np.array([[1 + td, 1 - td], [1 - td, 1 + td]], dtype=np.complex128)


def apply_1q(s: StateVector, qubit: int, u: np.ndarray) -> StateVector:
    _check_qubits(s, [qubit])
    kernels.apply_1q(s.amps, s.num_qubits, qubit, u)
    return s


def apply_x(s: StateVector, qubit: int) -> StateVector:
    return apply_1q(s, qubit, X_MATRIX)


def apply_hadamard_all(s: StateVector, qubits: Sequence[int]) -> StateVector:
    _check_qubits(s, qubits)
    for q in qubits:
        kernels.apply_1q(s.amps, s.num_qubits, q, H_MATRIX)
    return s


def apply_controlled(
    s: StateVector, control: int, target: int, u: np.ndarray, control_value: int = 1
) -> StateVector:
    if control == target:
        raise ValueError("control and target must differ")
    _check_qubits(s, [control, target])
    kernels.apply_controlled_1q(s.amps, s.num_qubits, control, target, u, control_value)
    return s


def apply_cx(s: StateVector, control: int, target: int) -> StateVector:
    return apply_controlled(s, control, target, X_MATRIX)


def apply_controlled_v(
    s: StateVector, control: int, target: int, m_ext: int, negate_control: bool = False
) -> StateVector:
    """Controlled ``m_ext``-th root of X.

    ``negate_control`` fires on control = 0, equivalent to sandwiching the
    control between two X gates.
    """
    if m_ext < 1:
        raise ValueError("m_ext must be >= 1")
    return apply_controlled(s, control, target, v_matrix(m_ext), 0 if negate_control else 1)


def _mask(s: StateVector, marked: Marked) -> np.ndarray:
    if callable(marked):
        mask = np.asarray(marked(np.arange(s.amps.size, dtype=np.int64)), dtype=bool)
    else:
        mask = np.asarray(marked, dtype=bool)
    if mask.shape != s.amps.shape:
        raise ValueError("marked set must cover every basis index")
    return mask


def apply_phase_on_set(s: StateVector, marked: Marked, phi: float) -> StateVector:
    """Multiply marked basis amplitudes by ``exp(i*phi)``.

    ``marked`` is a boolean mask over basis indices or a vectorised predicate
    taking the index array.
    """
    if not np.isfinite(phi):
        raise ValueError("phase must be finite")
    kernels.apply_phase(s.amps, _mask(s, marked), np.exp(1j * phi))
    return s


def apply_gate(s: StateVector, gate: GateSpec) -> StateVector:
    kind = gate.kind.upper()
    if kind == "H":
        return apply_hadamard_all(s, gate.targets)
    if kind == "X":
        for q in gate.targets:
            apply_x(s, q)
        return s
    if kind == "CX":
        return apply_cx(s, gate.controls[0], gate.targets[0])
    if kind == "CV":
        return apply_controlled_v(
            s, gate.controls[0], gate.targets[0], gate.params["m_ext"], gate.params.get("negate_control", False)
        )
    if kind == "PHASE":
        return apply_phase_on_set(s, gate.params["marked"], gate.params["phi"])
    if kind == "U":
        u = check_unitary(gate.params["matrix"])
        if gate.controls:
            return apply_controlled(s, gate.controls[0], gate.targets[0], u)
        return apply_1q(s, gate.targets[0], u)
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def postselect(s: StateVector, qubit: int, outcome: int) -> tuple[float, StateVector]:
    """Project ``qubit`` onto ``outcome``; returns ``(probability, state)``.

    Raises :class:`SimulationError` when the outcome has norm below 1e-12.
    """
    _check_qubits(s, [qubit])
    keep = s.bit_of(qubit) == outcome
    prob = float(np.sum(np.abs(s.amps[keep]) ** 2))
    if prob < 1e-24:
        raise SimulationError(f"outcome {outcome} on qubit {qubit} has zero probability")
    s.amps[~keep] = 0.0
    s.amps /= sqrt(prob)
    return prob, s


def measure_qubit(s: StateVector, qubit: int, rng: np.random.Generator) -> tuple[int, StateVector]:
    """Born-rule measurement of one qubit; collapses ``s`` in place."""
    _check_qubits(s, [qubit])
    total = s.norm()
    if total < 1e-12:
        raise SimulationError("cannot measure a degenerate state")
    p1 = s.prob_one(qubit) / total
    outcome = 1 if rng.random() < p1 else 0
    _, s = postselect(s, qubit, outcome)
    return outcome, s


def measure_register(s: StateVector, qubits: Sequence[int], rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(measure_qubit(s, q, rng)[0] for q in qubits)


def drop_qubit(s: StateVector, qubit: int, value: int) -> StateVector:
    """Remove a qubit known to be in basis state ``value`` (after measurement)."""
    _check_qubits(s, [qubit])
    if s.num_qubits == 1:
        raise ValueError("cannot drop the last qubit")
    keep = s.bit_of(qubit) == value
    other = np.sum(np.abs(s.amps[~keep]) ** 2)
    if other > 1e-18:
        raise SimulationError(f"qubit {qubit} is not in basis state {value}")
    return StateVector(s.num_qubits - 1, s.amps[keep].copy())
