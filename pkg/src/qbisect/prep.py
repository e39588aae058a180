"""Preparation of the uniform superposition over balanced assignments.

Fixed-phase amplitude amplification with ``D = W R0(phi) W^dagger Rtau(phi)``
(``W`` the Walsh-Hadamard transform, ``Rtau`` phasing the balanced states)
iterated ``q = floor(phi / sin(theta))`` times from ``W|0>``, where
``sin(theta)^2 = M/N`` with ``M = C(n, n/2)`` balanced states out of ``N = 2^n``.
An oracle ``U_f`` then flips an auxiliary qubit ``ax1`` on balanced states, so
measuring ``ax1 = 1`` leaves exactly the uniform balanced superposition.

The closed form uses Chebyshev polynomials of the second kind ``U_k(y)``
with ``y = 2 sin^2(theta) sin^2(phi/2) - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import asin, ceil, comb, cos, floor, pi, sin, sqrt, acos

import cmath

import numpy as np

from . import statevector as sv
from .errors import CapacityError

DEFAULT_PHI = 6.02193
PHI_OVER_PI = 1.9168
PREP_DENSE_CAP = 20
PREP_CLOSED_FORM_CAP = 30


def chebyshev_u(k: int, y: float) -> float:
    """``U_k(y)`` with ``U_{-1} = 0``, ``U_{-2} = -1``.

    Uses ``sin((k+1)d)/sin(d)`` away from ``y = +-1`` and the three-term
    recurrence near the endpoints, where the quotient loses precision.
    """
    if k == -1:
        return 0.0
    if k == -2:
        return -1.0
    if k < -2:
        raise ValueError("k must be >= -2")
    y = min(1.0, max(-1.0, y))
    delta = acos(y)
    if abs(sin(delta)) >= 1e-6:
        return sin((k + 1) * delta) / sin(delta)
    prev, cur = 0.0, 1.0
    for _ in range(k):
        prev, cur = cur, 2 * y * cur - prev
    return cur


def chebyshev_amplitudes(theta: float, phi: float, q: int) -> tuple[complex, complex]:
    """Amplitudes ``(a_q, b_q)`` of ``D^q W|0>`` on the balanced/unbalanced subspaces.

    ``a_q = (-1)^q sin(theta) (e^{iq phi} U_q + e^{i(q-1) phi} U_{q-1})`` and
    ``b_q = (-1)^q cos(theta) e^{iq phi} (U_q + U_{q-1})``; the ``(-1)^q``
    accounts for ``D`` carrying no leading minus sign.
    """
    if not 0 < theta <= pi / 2 + 1e-15:
        raise ValueError("theta must lie in (0, pi/2]")
    if q < 0:
        raise ValueError("q must be >= 0")
    y = 2 * sin(theta) ** 2 * sin(phi / 2) ** 2 - 1
    uq, uq1 = chebyshev_u(q, y), chebyshev_u(q - 1, y)
    sign = -1 if q % 2 else 1
    a = sign * sin(theta) * (cmath.exp(1j * q * phi) * uq + cmath.exp(1j * (q - 1) * phi) * uq1)
    b = sign * cos(theta) * cmath.exp(1j * q * phi) * (uq + uq1)
    return complex(a), complex(b)


@dataclass(frozen=True)
class PrepPlan:
    n: int
    N: int
    M: int
    theta: float
    phi: float
    q: int
    a_q: complex
    b_q: complex

    @property
    def success_prob(self) -> float:
        return abs(self.a_q) ** 2

    @property
    def sin_theta(self) -> float:
        return sqrt(self.M / self.N)

    @property
    def q_upper_bound(self) -> float:
        """``1.9168 * pi * sqrt(N/M)``."""
        return PHI_OVER_PI * pi * sqrt(self.N / self.M)


def make_prep_plan(n: int, phi: float = DEFAULT_PHI) -> PrepPlan:
    if n % 2 or n < 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if n > PREP_CLOSED_FORM_CAP:
        raise CapacityError(f"n = {n} exceeds {PREP_CLOSED_FORM_CAP}")
    N, M = 1 << n, comb(n, n // 2)
    sin_t = sqrt(M / N)
    theta = asin(sin_t)
    q = floor(phi / sin_t)
    a, b = chebyshev_amplitudes(theta, phi, q)
    return PrepPlan(n, N, M, theta, phi, q, a, b)


def prep_iteration_bound(n: int) -> int:
    """Stirling-approximated iteration bound ``ceil(1.9168 (pi^5 n / 2)^(1/4))``."""
    if n % 2 or n < 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    return ceil(PHI_OVER_PI * (pi**5 * n / 2) ** 0.25)


def balanced_mask(num_bits: int, indices: np.ndarray) -> np.ndarray:
    """True where the low ``num_bits`` bits of each index hold exactly half ones."""
    count = np.zeros(indices.shape, dtype=np.int64)
    for b in range(num_bits):
        count += (indices >> b) & 1
    return count == num_bits // 2


def apply_d(s: sv.StateVector, n: int, phi: float) -> sv.StateVector:
    """One ``D`` step on the first ``n`` qubits of ``s`` (trailing qubits untouched)."""
    shift = s.num_qubits - n
    idx = np.arange(s.amps.size, dtype=np.int64) >> shift
    vq = range(n)
    sv.apply_phase_on_set(s, balanced_mask(n, idx), phi)  # Rtau
    sv.apply_hadamard_all(s, vq)  # W^dagger = W
    sv.apply_phase_on_set(s, idx == 0, phi)  # R0
    sv.apply_hadamard_all(s, vq)
    return s


def apply_uf(s: sv.StateVector, n: int, ax1: int) -> sv.StateVector:
    """Flip ``ax1`` on every basis state whose first ``n`` qubits are balanced."""
    idx = np.arange(s.amps.size, dtype=np.int64)
    vpart = idx >> (s.num_qubits - n)
    bal = balanced_mask(n, vpart)
    bit = s.bit_of(ax1, idx)
    src = idx[bal & (bit == 0)]
    dst = src | (1 << (s.num_qubits - 1 - ax1))
    s.amps[src], s.amps[dst] = s.amps[dst].copy(), s.amps[src].copy()
    return s


def run_preparation_circuit(n: int, phi: float = DEFAULT_PHI, q: int | None = None) -> sv.StateVector:
    """Dense ``U_f D^q H^n |0...0>|0>`` on ``n + 1`` qubits (``ax1`` last).

    ``q`` defaults to the plan's ``floor(phi / sin(theta))``.
    """
    if n % 2 or n < 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if n > PREP_DENSE_CAP:
        raise CapacityError(f"dense preparation limited to n <= {PREP_DENSE_CAP}")
    if q is None:
        q = make_prep_plan(n, phi).q
    s = sv.StateVector.zeros(n + 1)
    sv.apply_hadamard_all(s, range(n))
    for _ in range(q):
        apply_d(s, n, phi)
    return apply_uf(s, n, n)
