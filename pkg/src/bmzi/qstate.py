"""Two-level states, density matrices and unitaries.

Amplitudes are plain Python ``complex``; matrices are 2x2 ``complex128``
arrays frozen read-only inside small immutable wrappers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bmzi.errors import InvalidStateError, NonUnitaryError
from bmzi.kernels import binary_entropy

# tolerances shared by every module
CONSTRUCT_TOL = 1e-9
ASSERT_TOL = 1e-12
EIGEN_FLOOR = -1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY = np.eye(2, dtype=np.complex128)


def _frozen(m) -> np.ndarray:
    arr = np.array(m, dtype=np.complex128)
    if arr.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """``a0|0> + a1|1>`` with |0> the horizontal and |1> the vertical path."""

    a0: complex
    a1: complex

    def __post_init__(self):
        a0, a1 = complex(self.a0), complex(self.a1)
        if not (math.isfinite(a0.real) and math.isfinite(a0.imag)
                and math.isfinite(a1.real) and math.isfinite(a1.imag)):
            raise InvalidStateError("amplitudes must be finite")
        norm2 = abs(a0) ** 2 + abs(a1) ** 2
        if abs(norm2 - 1.0) > CONSTRUCT_TOL:
            raise InvalidStateError(f"state not normalised: |a0|^2+|a1|^2 = {norm2!r}")
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "a1", a1)

    @classmethod
    def normalized(cls, a0: complex, a1: complex) -> PureState:
        n = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        if n == 0.0 or not math.isfinite(n):
            raise InvalidStateError("cannot normalise a zero or non-finite vector")
        return cls(a0 / n, a1 / n)

    @classmethod
    def from_angles(cls, alpha_angle: float, beta_phase: float = 0.0) -> PureState:
        """``cos(a)|0> + e^{i chi} sin(a)|1>``; covers every state up to global phase."""
        return cls(complex(math.cos(alpha_angle)), complex(math.sin(alpha_angle)) * complex(
            math.cos(beta_phase), math.sin(beta_phase)))

    def vector(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=np.complex128)

    def populations(self) -> tuple[float, float]:
        return abs(self.a0) ** 2, abs(self.a1) ** 2


KET0 = PureState(1.0, 0.0)
KET1 = PureState(0.0, 1.0)


@dataclass(frozen=True, eq=False)
class Unitary2:
    m: np.ndarray

    def __post_init__(self):
        m = _frozen(self.m)
        dev = np.max(np.abs(m.conj().T @ m - IDENTITY))
        if dev > CONSTRUCT_TOL:
            raise NonUnitaryError(f"matrix is not unitary (max |U^dag U - I| = {dev:.3g})")
        object.__setattr__(self, "m", m)

    def __matmul__(self, other: Unitary2) -> Unitary2:
        return Unitary2(self.m @ other.m)

    def dagger(self) -> Unitary2:
        return Unitary2(self.m.conj().T)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    m: np.ndarray

    def __post_init__(self):
        m = _frozen(self.m)
        off = abs(m[0, 1] - m[1, 0].conjugate())
        if max(off, abs(m[0, 0].imag), abs(m[1, 1].imag)) > CONSTRUCT_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        tr = m[0, 0].real + m[1, 1].real
        if abs(tr - 1.0) > CONSTRUCT_TOL:
            raise InvalidStateError(f"density matrix trace is {tr!r}, not 1")
        if eigenvalues(m)[0] < EIGEN_FLOOR:
            raise InvalidStateError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "m", m)

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> DensityMatrix:
        return cls(np.array([[0.5 * (1.0 + z), 0.5 * complex(x, -y)],
                             [0.5 * complex(x, y), 0.5 * (1.0 - z)]]))

    @property
    def populations(self) -> tuple[float, float]:
        return float(self.m[0, 0].real), float(self.m[1, 1].real)

    def eigenvalues(self) -> tuple[float, float]:
        return eigenvalues(self.m)


def eigenvalues(m) -> tuple[float, float]:
    """Ascending eigenvalues of a 2x2 Hermitian matrix, from trace and determinant."""
    a, d = m[0, 0].real, m[1, 1].real
    b = m[0, 1]
    half_gap = 0.5 * math.sqrt((a - d) ** 2 + 4.0 * (b.real ** 2 + b.imag ** 2))
    mid = 0.5 * (a + d)
    return mid - half_gap, mid + half_gap


def apply_unitary(u: Unitary2, psi: PureState) -> PureState:
    m = u.m
    return PureState(
        complex(m[0, 0] * psi.a0 + m[0, 1] * psi.a1),
        complex(m[1, 0] * psi.a0 + m[1, 1] * psi.a1),
    )


def density_of(psi: PureState) -> DensityMatrix:
    v = psi.vector()
    return DensityMatrix(np.outer(v, v.conj()))


def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Keep only the path populations."""
    return DensityMatrix(np.diag(np.diag(rho.m)))


def vn_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits.

    Eigenvalues are clipped to ``[0, 1]`` first; a state whose larger
    eigenvalue exceeds ``1 - 1e-10`` is treated as pure and returns 0.
    """
    _, lam_max = rho.eigenvalues()
    return binary_entropy(min(max(lam_max, 0.5), 1.0))


def dephased_entropy(rho: DensityMatrix) -> float:
    """Entropy of ``dephase(rho)``, read straight off the populations."""
    return binary_entropy(min(max(*rho.populations, 0.5), 1.0))


def bloch_vector(rho: DensityMatrix) -> tuple[float, float, float]:
    m = rho.m
    return 2.0 * m[0, 1].real, -2.0 * m[0, 1].imag, m[0, 0].real - m[1, 1].real
