# cython: language_level=3
"""Compiled inner loops for cut enumeration and statevector gate application.

Signatures mirror :mod:`qbisect._pykernels` exactly; ``qbisect.kernels``
picks one of the two at import time.

Bit convention: qubit/vertex 0 is the most significant bit of a basis index.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


def balanced_states(int n):
    """All n-bit integers with popcount n/2, ascending (Gosper's hack)."""
    cdef Py_ssize_t count = 1, i
    cdef int k = n // 2
    for i in range(k):
        count = count * (n - i) // (i + 1)
    out = np.empty(count, dtype=np.int64)
    cdef cnp.int64_t[::1] view = out
    cdef cnp.int64_t x = (1 << k) - 1
    cdef cnp.int64_t c, r
    for i in range(count):
        view[i] = x
        if x == 0:
            break
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r
    return out


def cut_sizes(cnp.int64_t[::1] states, cnp.int64_t[:, ::1] edges, int n):
    """Number of edges whose endpoints differ, for every state."""
    cdef Py_ssize_t ns = states.shape[0], m = edges.shape[0], i, l
    out = np.zeros(ns, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    cdef cnp.int64_t x, cnt
    cdef int sa, sb
    for i in range(ns):
        x = states[i]
        cnt = 0
        for l in range(m):
            sa = n - 1 - <int>edges[l, 0]
            sb = n - 1 - <int>edges[l, 1]
            cnt += ((x >> sa) ^ (x >> sb)) & 1
        res[i] = cnt
    return out


def apply_1q(cplx[::1] amps, int num_qubits, int target, cplx[:, :] u):
    """In-place single-qubit unitary on ``target``."""
    cdef Py_ssize_t dim = amps.shape[0], i, j
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << (num_qubits - 1 - target)
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef cplx a0, a1
    for i in range(dim):
        if i & tbit:
            continue
        j = i | tbit
        a0 = amps[i]
        a1 = amps[j]
        amps[i] = u00 * a0 + u01 * a1
        amps[j] = u10 * a0 + u11 * a1


def apply_controlled_1q(cplx[::1] amps, int num_qubits, int control, int target,
                        cplx[:, :] u, int control_value=1):
    """In-place single-qubit unitary on ``target`` where ``control`` reads ``control_value``."""
    cdef Py_ssize_t dim = amps.shape[0], i, j
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << (num_qubits - 1 - target)
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << (num_qubits - 1 - control)
    cdef Py_ssize_t cwant = cbit if control_value else 0
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef cplx a0, a1
    for i in range(dim):
        if (i & tbit) or (i & cbit) != cwant:
            continue
        j = i | tbit
        a0 = amps[i]
        a1 = amps[j]
        amps[i] = u00 * a0 + u01 * a1
        amps[j] = u10 * a0 + u11 * a1


def apply_phase(cplx[::1] amps, cnp.uint8_t[::1] mask, cplx phase):
    """Multiply every amplitude whose mask entry is nonzero by ``phase``."""
    cdef Py_ssize_t dim = amps.shape[0], i
    for i in range(dim):
        if mask[i]:
            amps[i] = amps[i] * phase
