"""Pure numpy implementations of the hot kernels.

Same signatures and bit conventions as the compiled ``_ckernels`` module
(qubit/vertex 0 is the most significant bit).
"""
from __future__ import annotations

from math import comb

import numpy as np


def _popcount(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.uint64)
    count = np.zeros(v.shape, dtype=np.int64)
    while np.any(v):
        count += (v & np.uint64(1)).astype(np.int64)
        v >>= np.uint64(1)
    return count


def balanced_states(n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    idx = np.arange(1 << n, dtype=np.int64)
    out = idx[_popcount(idx) == n // 2]
    assert out.size == comb(n, n // 2)
    return out


def cut_sizes(states: np.ndarray, edges: np.ndarray, n: int) -> np.ndarray:
    states = np.asarray(states, dtype=np.int64)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    out = np.zeros(states.shape[0], dtype=np.int64)
    for a, b in edges:
        out += ((states >> (n - 1 - a)) ^ (states >> (n - 1 - b))) & 1
    return out


def apply_1q(amps: np.ndarray, num_qubits: int, target: int, u: np.ndarray) -> None:
    v = amps.reshape(1 << target, 2, 1 << (num_qubits - 1 - target))
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :].copy()
    v[:, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
    v[:, 1, :] = u[1, 0] * a0 + u[1, 1] * a1


def apply_controlled_1q(
    amps: np.ndarray,
    num_qubits: int,
    control: int,
    target: int,
    u: np.ndarray,
    control_value: int = 1,
) -> None:
    lo, hi = sorted((control, target))
    v = amps.reshape(1 << lo, 2, 1 << (hi - lo - 1), 2, 1 << (num_qubits - 1 - hi))
    cv = 1 if control_value else 0
    if control < target:
        sub = v[:, cv, :, :, :]  # target axis is now 2
        a0 = sub[:, :, 0, :].copy()
        a1 = sub[:, :, 1, :].copy()
        sub[:, :, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
        sub[:, :, 1, :] = u[1, 0] * a0 + u[1, 1] * a1
    else:
        sub = v[:, :, :, cv, :]  # target axis is 1
        a0 = sub[:, 0, :, :].copy()
        a1 = sub[:, 1, :, :].copy()
        sub[:, 0, :, :] = u[0, 0] * a0 + u[0, 1] * a1
        sub[:, 1, :, :] = u[1, 0] * a0 + u[1, 1] * a1


def apply_phase(amps: np.ndarray, mask: np.ndarray, phase: complex) -> None:
    amps[mask.astype(bool)] *= phase
