"""Kernel dispatch: compiled Cython core when available, numpy otherwise.

Set ``QBISECT_PURE_PYTHON=1`` before import to force the fallback.
``BACKEND`` names the implementation in use ("cython" or "python").
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("QBISECT_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def balanced_states(n: int) -> np.ndarray:
    """Ascending int64 array of every n-bit integer with exactly n/2 set bits."""
    return _impl.balanced_states(int(n))


def cut_sizes(states: np.ndarray, edges: np.ndarray, n: int) -> np.ndarray:
    """Crossing-edge count for each state (vertex 0 is the most significant bit)."""
    states = np.ascontiguousarray(states, dtype=np.int64)
    edges = np.ascontiguousarray(np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return _impl.cut_sizes(states, edges, int(n))


def apply_1q(amps: np.ndarray, num_qubits: int, target: int, u: np.ndarray) -> None:
    _impl.apply_1q(amps, int(num_qubits), int(target), np.asarray(u, dtype=np.complex128))


def apply_controlled_1q(
    amps: np.ndarray,
    num_qubits: int,
    control: int,
    target: int,
    u: np.ndarray,
    control_value: int = 1,
) -> None:
    _impl.apply_controlled_1q(
        amps,
        int(num_qubits),
        int(control),
        int(target),
        np.asarray(u, dtype=np.complex128),
        int(control_value),
    )


def apply_phase(amps: np.ndarray, mask: np.ndarray, phase: complex) -> None:
    _impl.apply_phase(amps, np.ascontiguousarray(mask, dtype=np.uint8), complex(phase))
