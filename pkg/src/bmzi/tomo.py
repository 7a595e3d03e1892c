"""Emulated hardware readout: shot sampling, Pauli tomography, mitigation.

Passing ``shots=None`` selects exact mode everywhere: counts become the
limiting (expected) frequencies, so statistical and systematic error can be
told apart in tests.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from bmzi import kernels
from bmzi.errors import SingularMatrixError
from bmzi.qstate import ASSERT_TOL, DensityMatrix, IDENTITY, Unitary2, bloch_vector

# calibration data of the single-qubit device used in the original experiment
ARMONK_CALIBRATION = {
    "frequency_ghz": 4.797,
    "t1_us": 272.47,
    "t2_us": 276.02,
    "gate_error": 0.156,
    "readout_error": 0.0406,
}

SINGULAR_DET = 1e-9


class Basis(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)
_SDG = np.array([[1, 0], [0, -1j]], dtype=np.complex128)

# pre-measurement rotation and how many gates it costs
ROTATIONS = {
    Basis.X: (Unitary2(_H), 1),
    Basis.Y: (Unitary2(_H @ _SDG), 2),
    Basis.Z: (Unitary2(IDENTITY), 0),
}


def _check_prob(name, v):
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


@dataclass(frozen=True)
class NoiseModel:
    """Readout flip probabilities and an optional depolarising rate per gate."""

    readout_e0: float = ARMONK_CALIBRATION["readout_error"]
    readout_e1: float = ARMONK_CALIBRATION["readout_error"]
    depolarizing_p: float = 0.0

    def __post_init__(self):
        _check_prob("readout_e0", self.readout_e0)
        _check_prob("readout_e1", self.readout_e1)
        _check_prob("depolarizing_p", self.depolarizing_p)

    @classmethod
    def ideal(cls) -> NoiseModel:
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def armonk(cls, include_gate_error: bool = False) -> NoiseModel:
        """Device calibration; the tabulated gate error is opt-in only."""
        gate = ARMONK_CALIBRATION["gate_error"] if include_gate_error else 0.0
        e = ARMONK_CALIBRATION["readout_error"]
        return cls(e, e, gate)


@dataclass(frozen=True)
class Counts:
    """Readout tally in one basis.

    In exact mode ``shots`` is None and ``n0``/``n1`` hold the limiting
    frequencies instead of integers.
    """

    basis: Basis
    n0: float
    n1: float
    shots: int | None

    def __post_init__(self):
        if self.shots is not None:
            if self.shots < 1:
                raise ValueError("shots must be >= 1")
            if self.n0 + self.n1 != self.shots or self.n0 < 0 or self.n1 < 0:
                raise ValueError("counts must be non-negative and add up to shots")

    def frequencies(self) -> tuple[float, float]:
        total = self.n0 + self.n1
        return self.n0 / total, self.n1 / total


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Columns: prepared state, rows: readout. ``m[i, j] = P(read i | prepared j)``."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=np.float64)
        if m.shape != (2, 2):
            raise ValueError("confusion matrix must be 2x2")
        if np.any(m < 0) or np.any(m > 1):
            raise ValueError("confusion matrix entries must lie in [0, 1]")
        if np.max(np.abs(m.sum(axis=0) - 1.0)) > ASSERT_TOL:
            raise ValueError("confusion matrix columns must sum to 1")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def exact(cls, noise: NoiseModel) -> ConfusionMatrix:
        e0, e1 = noise.readout_e0, noise.readout_e1
        return cls([[1.0 - e0, e1], [e0, 1.0 - e1]])


@dataclass(frozen=True)
class TomographyResult:
    rho: DensityMatrix
    raw_bloch: tuple[float, float, float]
    projected: bool


def depolarize(rho: DensityMatrix, p: float, gates: int = 1) -> DensityMatrix:
    """Apply ``rho -> (1-p) rho + p I/2`` once per gate."""
    if p == 0.0 or gates == 0:
        return rho
    keep = (1.0 - p) ** gates
    return DensityMatrix(keep * rho.m + (1.0 - keep) * 0.5 * IDENTITY)


def measurement_probability(rho: DensityMatrix, basis: Basis, depolarizing_p: float = 0.0) -> float:
    """Probability of the ``+1`` outcome (read as 0) in ``basis``, before readout error."""
    u, gates = ROTATIONS[basis]
    rho = depolarize(rho, depolarizing_p, gates)
    rotated = u.m @ rho.m @ u.m.conj().T
    return min(max(float(rotated[0, 0].real), 0.0), 1.0)


def sample_counts(rho: DensityMatrix, basis: Basis, shots: int | None, noise: NoiseModel,
                  seed: int) -> Counts:
    """Measure ``rho`` shot by shot, then flip each readout independently.

    A shot is a true 0 with the Born probability in the rotated basis; a true
    0 is then misread with probability ``readout_e0`` and a true 1 with
    ``readout_e1``. The same seed always gives the same counts.
    """
    basis = Basis(basis)
    return sample_probability(measurement_probability(rho, basis, noise.depolarizing_p),
                              basis, shots, noise, seed)


def sample_probability(p0: float, basis: Basis, shots: int | None, noise: NoiseModel,
                       seed: int) -> Counts:
    """Same as :func:`sample_counts` once the true-0 probability ``p0`` is known."""
    e0, e1 = noise.readout_e0, noise.readout_e1
    if shots is None:
        f0 = p0 * (1.0 - e0) + (1.0 - p0) * e1
        return Counts(basis, f0, 1.0 - f0, None)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    u = np.random.default_rng(seed).random((2, shots))
    n0 = kernels.count_readouts(u[0], u[1], p0, e0, e1)
    return Counts(basis, n0, shots - n0, shots)


def _calibration_state(j: int) -> DensityMatrix:
    m = np.zeros((2, 2), dtype=np.complex128)
    m[j, j] = 1.0
    return DensityMatrix(m)


def calibrate_confusion(noise: NoiseModel, shots: int | None, seed: int) -> ConfusionMatrix:
    """Estimate the readout confusion matrix by preparing |0> and |1>."""
    if shots is None:
        return ConfusionMatrix.exact(noise)
    readout_only = NoiseModel(noise.readout_e0, noise.readout_e1, 0.0)
    seeds = np.random.SeedSequence(seed).generate_state(2)
    cols = []
    for j in (0, 1):
        c = sample_counts(_calibration_state(j), Basis.Z, shots, readout_only, int(seeds[j]))
        cols.append((c.n0 / shots, c.n1 / shots))
    return ConfusionMatrix(np.array(cols).T)


def mitigate(counts: Counts, cm: ConfusionMatrix) -> tuple[float, float]:
    """Undo readout error by inverting the confusion matrix.

    Quasi-probabilities outside [0, 1] are clipped and the pair renormalised.
    """
    m = cm.m
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) <= SINGULAR_DET:
        raise SingularMatrixError(f"confusion matrix is singular (det = {det:.3g})")
    q0, q1 = counts.frequencies()
    p0 = (m[1, 1] * q0 - m[0, 1] * q1) / det
    p1 = (m[0, 0] * q1 - m[1, 0] * q0) / det
    p0, p1 = min(max(p0, 0.0), 1.0), min(max(p1, 0.0), 1.0)
    total = p0 + p1
    return p0 / total, p1 / total


def reconstruct(counts_x: Counts, counts_y: Counts, counts_z: Counts,
                cm: ConfusionMatrix | None = None) -> TomographyResult:
    """Linear-inversion tomography ``rho = (I + <X>X + <Y>Y + <Z>Z) / 2``.

    A Bloch vector longer than 1 is scaled back onto the sphere and the
    result is flagged as ``projected``.
    """
    bloch = []
    for counts, basis in ((counts_x, Basis.X), (counts_y, Basis.Y), (counts_z, Basis.Z)):
        if counts.basis is not basis:
            raise ValueError(f"expected {basis.name}-basis counts, got {counts.basis.name}")
        p0, p1 = mitigate(counts, cm) if cm is not None else counts.frequencies()
        bloch.append(p0 - p1)
    raw = tuple(float(v) for v in bloch)
    norm = math.sqrt(sum(v * v for v in raw))
    projected = norm > 1.0 + ASSERT_TOL
    x, y, z = (v / norm for v in raw) if projected else raw
    return TomographyResult(DensityMatrix.from_bloch(x, y, z), raw, projected)


def tomography(rho: DensityMatrix, shots: int | None, noise: NoiseModel, seed: int,
               cm: ConfusionMatrix | None = None) -> TomographyResult:
    """Sample all three bases of ``rho`` and reconstruct it."""
    seeds = np.random.SeedSequence(seed).generate_state(3)
    counts = [sample_counts(rho, b, shots, noise, int(s)) for b, s in zip(Basis, seeds)]
    return reconstruct(*counts, cm=cm)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity of two qubit states, ``tr(rho sigma) + 2 sqrt(det rho det sigma)``."""
    overlap = float(np.trace(rho.m @ sigma.m).real)
    dets = float(np.linalg.det(rho.m).real) * float(np.linalg.det(sigma.m).real)
    return min(max(overlap + 2.0 * math.sqrt(max(dets, 0.0)), 0.0), 1.0)


def bloch_error(result: TomographyResult, truth: DensityMatrix) -> float:
    return float(np.linalg.norm(np.subtract(bloch_vector(result.rho), bloch_vector(truth))))
