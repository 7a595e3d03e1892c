"""Batched hot loops.

Every kernel exists twice: a scalar loop compiled with numba and a
vectorised numpy twin. Both produce identical results; the active one is
picked by :mod:`bmzi._accel`. Inputs are flattened 1-D float64/complex128
arrays, broadcasting is done by the public wrappers.
"""
import numpy as np

from bmzi._accel import ENABLE_NUMBA, jit_kernel

# eigenvalue within this distance of 1 means a pure state; entropy is 0
PURE_EIGEN_TOL = 1e-10


# --------------------------------------------------------------------------
# Born-rule probabilities of the output state for a batch of interferometers
# --------------------------------------------------------------------------

def _born_loop(theta1, theta2, phi, a0, a1):
    n = theta1.shape[0]
    p0 = np.empty(n)
    p1 = np.empty(n)
    for k in range(n):
        c1 = np.cos(theta1[k])
        s1 = np.sin(theta1[k])
        c2 = np.cos(theta2[k])
        s2 = np.sin(theta2[k])
        # first splitter
        u = c1 * a0[k] + 1j * s1 * a1[k]
        v = 1j * s1 * a0[k] + c1 * a1[k]
        # mirrors swap paths with a factor i, phase shifter acts on |1>
        u, v = 1j * v, 1j * u * np.exp(1j * phi[k])
        # second splitter
        b0 = c2 * u + 1j * s2 * v
        b1 = 1j * s2 * u + c2 * v
        p0[k] = b0.real * b0.real + b0.imag * b0.imag
        p1[k] = b1.real * b1.real + b1.imag * b1.imag
    return p0, p1


def _born_numpy(theta1, theta2, phi, a0, a1):
    c1, s1 = np.cos(theta1), np.sin(theta1)
    c2, s2 = np.cos(theta2), np.sin(theta2)
    u = c1 * a0 + 1j * s1 * a1
    v = 1j * s1 * a0 + c1 * a1
    u, v = 1j * v, 1j * u * np.exp(1j * phi)
    b0 = c2 * u + 1j * s2 * v
    b1 = 1j * s2 * u + c2 * v
    return b0.real * b0.real + b0.imag * b0.imag, b1.real * b1.real + b1.imag * b1.imag


# --------------------------------------------------------------------------
# von Neumann entropy of a qubit and of its dephased copy, from Bloch vectors
# --------------------------------------------------------------------------

def _h2_scalar(lam_max):
    # 0 log 0 := 0 via the purity branch, never through a limit
    if lam_max > 1.0 - PURE_EIGEN_TOL:
        return 0.0
    lam_min = 1.0 - lam_max
    return -lam_max * np.log2(lam_max) - lam_min * np.log2(lam_min)


binary_entropy = _h2_scalar
_h2_jit = jit_kernel(_h2_scalar)
if _h2_jit is not None:
    # the compiled loop below resolves this global at compile time
    _h2_scalar = _h2_jit


def _entropies_loop(x, y, z):
    n = x.shape[0]
    s_vn = np.empty(n)
    s_diag = np.empty(n)
    for k in range(n):
        r = np.sqrt(x[k] * x[k] + y[k] * y[k] + z[k] * z[k])
        s_vn[k] = _h2_scalar(0.5 * (1.0 + r))
        s_diag[k] = _h2_scalar(0.5 * (1.0 + abs(z[k])))
    return s_vn, s_diag


def _h2_numpy(lam_max):
    lam_max = np.asarray(lam_max, dtype=np.float64)
    pure = lam_max > 1.0 - PURE_EIGEN_TOL
    lmax = np.where(pure, 0.5, lam_max)
    lmin = 1.0 - lmax
    h = -lmax * np.log2(lmax) - lmin * np.log2(lmin)
    return np.where(pure, 0.0, h)


def _entropies_numpy(x, y, z):
    r = np.sqrt(x * x + y * y + z * z)
    return _h2_numpy(0.5 * (1.0 + r)), _h2_numpy(0.5 * (1.0 + np.abs(z)))


# --------------------------------------------------------------------------
# per-shot measurement with classical readout flips
# --------------------------------------------------------------------------

def _count_loop(u_born, u_flip, p0, e0, e1):
    n0 = 0
    for k in range(u_born.shape[0]):
        if u_born[k] < p0:
            if not u_flip[k] < e0:
                n0 += 1
        elif u_flip[k] < e1:
            n0 += 1
    return n0


def _count_numpy(u_born, u_flip, p0, e0, e1):
    true0 = u_born < p0
    read0 = np.where(true0, u_flip >= e0, u_flip < e1)
    return int(np.count_nonzero(read0))


_born_numba = jit_kernel(_born_loop)
_entropies_numba = jit_kernel(_entropies_loop)
_count_numba = jit_kernel(_count_loop)

if ENABLE_NUMBA:
    _born_impl, _entropies_impl, _count_impl = _born_numba, _entropies_numba, _count_numba
else:
    _born_impl, _entropies_impl, _count_impl = _born_numpy, _entropies_numpy, _count_numpy


def born_probabilities(theta1, theta2, phi, a0=1.0, a1=0.0):
    """Detector probabilities ``(p0, p1)`` for broadcastable parameter arrays.

    Evolves ``a0|0> + a1|1>`` through splitter, mirrors, phase shifter and
    splitter, then squares the output amplitudes.
    """
    arrs = np.broadcast_arrays(
        np.asarray(theta1, dtype=np.float64),
        np.asarray(theta2, dtype=np.float64),
        np.asarray(phi, dtype=np.float64),
        np.asarray(a0, dtype=np.complex128),
        np.asarray(a1, dtype=np.complex128),
    )
    shape = arrs[0].shape
    flat = [np.ascontiguousarray(a).ravel() for a in arrs]
    p0, p1 = _born_impl(*flat)
    return p0.reshape(shape), p1.reshape(shape)


def bloch_entropies(x, y, z):
    """Return ``(S(rho), S(diag rho))`` in bits for Bloch vectors ``(x, y, z)``."""
    x, y, z = np.broadcast_arrays(
        np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64), np.asarray(z, dtype=np.float64)
    )
    shape = x.shape
    s_vn, s_diag = _entropies_impl(
        np.ascontiguousarray(x).ravel(), np.ascontiguousarray(y).ravel(), np.ascontiguousarray(z).ravel()
    )
    return s_vn.reshape(shape), s_diag.reshape(shape)


def count_readouts(u_born, u_flip, p0, e0, e1):
    """Number of shots read as 0, given two streams of uniforms."""
    return int(_count_impl(np.ascontiguousarray(u_born, dtype=np.float64),
                           np.ascontiguousarray(u_flip, dtype=np.float64),
                           float(p0), float(e0), float(e1)))
