"""Wave and particle quantifiers, and the complementarity bookkeeping.

State-based quantities (coherences, predictability, entropy) take a
:class:`DensityMatrix` so reconstructed states go through the same code.
Fringe-based quantities (visibilities and their companions) take the
interferometer configuration, since they are defined by detector statistics.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from bmzi import kernels
from bmzi.errors import DegenerateSignalError, UndefinedVisibilityError
from bmzi.optics import BeamSplitter, MziConfig, detection_probabilities
from bmzi.qstate import DensityMatrix, dephased_entropy, vn_entropy

# cos(pi/2) leaves ~6e-17 behind, so exact zeros are detected with a floor
UNDEFINED_FLOOR = 1e-24
DEGENERATE_FLOOR = 1e-15


class DetectorChoice(enum.Enum):
    D0 = 0
    D1 = 1


@dataclass(frozen=True)
class ComplementarityReport:
    coherence: float
    predictability: float
    entropy: float
    residual: float


def _clip01(v: float) -> float:
    return min(max(v, 0.0), 1.0)


def l1_coherence(rho: DensityMatrix) -> float:
    return _clip01(2.0 * abs(rho.m[0, 1]))


def re_coherence(rho: DensityMatrix) -> float:
    """Relative entropy of coherence, ``S(diag rho) - S(rho)``, in bits."""
    return _clip01(dephased_entropy(rho) - vn_entropy(rho))


def vn_predictability(rho: DensityMatrix) -> float:
    return _clip01(1.0 - dephased_entropy(rho))


def gy_predictability(bs1: BeamSplitter) -> float:
    """Which-way predictability ``|T1^2 - R1^2|`` of the first splitter."""
    return abs(bs1.T ** 2 - bs1.R ** 2)


def _fringe_terms(cfg: MziConfig, det: DetectorChoice) -> tuple[float, float]:
    """Return ``(background, amplitude)`` with Pr(D_j) = background + amplitude*cos(phi)."""
    if not cfg.input_is_ket0:
        raise ValueError("closed-form visibilities assume the input |0>; use visibility_fringe")
    T1, R1, T2, R2 = cfg.bs1.T, cfg.bs1.R, cfg.bs2.T, cfg.bs2.R
    cross = 2.0 * T1 * R1 * T2 * R2
    if det is DetectorChoice.D0:
        return T1 * T1 * R2 * R2 + R1 * R1 * T2 * T2, cross
    return T1 * T1 * T2 * T2 + R1 * R1 * R2 * R2, cross


def _check_defined(background: float, det: DetectorChoice) -> None:
    if background < UNDEFINED_FLOOR:
        raise UndefinedVisibilityError(f"{det.name} never clicks for any phase; visibility undefined")


def visibility_analytic(cfg: MziConfig, det: DetectorChoice) -> float:
    background, amplitude = _fringe_terms(cfg, det)
    _check_defined(background, det)
    return _clip01(amplitude / background)


def biased_predictability(cfg: MziConfig, det: DetectorChoice) -> float:
    """Predictability that pairs with the chosen detector's visibility.

    For D0 this is ``|R1^2 T2^2 - R2^2 T1^2| / (R1^2 T2^2 + R2^2 T1^2)``; the
    D1 companion swaps in ``T1^2 T2^2`` and ``R1^2 R2^2``. Either way its square
    plus the squared visibility is 1.
    """
    T1, R1, T2, R2 = cfg.bs1.T, cfg.bs1.R, cfg.bs2.T, cfg.bs2.R
    if det is DetectorChoice.D0:
        a, b = R1 * R1 * T2 * T2, R2 * R2 * T1 * T1
    else:
        a, b = T1 * T1 * T2 * T2, R1 * R1 * R2 * R2
    background, _ = _fringe_terms(cfg, det)
    _check_defined(background, det)
    return _clip01(abs(a - b) / (a + b))


def weighted_visibility(cfg: MziConfig, det: DetectorChoice) -> float:
    """Visibility scaled by the detector's best-case click probability."""
    background, amplitude = _fringe_terms(cfg, det)
    _check_defined(background, det)
    return _clip01(amplitude / background) * (background + amplitude)


def visibility_fringe(cfg: MziConfig, det: DetectorChoice) -> float:
    """Exact fringe contrast for any input state.

    Pr(D_j) is a first-order trigonometric polynomial in the phase, so three
    samples fix it: ``A + B cos(phi) + C sin(phi)`` has contrast
    ``sqrt(B^2 + C^2) / A``.
    """
    j = det.value
    p_0 = detection_probabilities(cfg.with_phi(0.0))[j]
    p_pi = detection_probabilities(cfg.with_phi(math.pi))[j]
    p_half = detection_probabilities(cfg.with_phi(0.5 * math.pi))[j]
    mean = 0.5 * (p_0 + p_pi)
    _check_defined(mean, det)
    b = 0.5 * (p_0 - p_pi)
    c = p_half - mean
    return _clip01(math.hypot(b, c) / mean)


def phase_grid(grid_points: int) -> np.ndarray:
    """Uniform phases on ``[0, 2 pi)``; even sizes contain 0 and pi exactly."""
    return 2.0 * math.pi * np.arange(grid_points) / grid_points


def contrast(values) -> float:
    """``(max - min) / (max + min)`` of a sampled fringe."""
    hi, lo = float(np.max(values)), float(np.min(values))
    if hi + lo < DEGENERATE_FLOOR:
        raise DegenerateSignalError("fringe has no signal (max + min ~ 0)")
    return (hi - lo) / (hi + lo)


def visibility_numeric(cfg: MziConfig, det: DetectorChoice, grid_points: int = 720) -> float:
    """Fringe contrast read off a phase scan, as an experiment would."""
    if grid_points < 8:
        raise ValueError("grid_points must be at least 8")
    phis = phase_grid(grid_points)
    p0, p1 = kernels.born_probabilities(cfg.bs1.theta, cfg.bs2.theta, phis, cfg.input.a0, cfg.input.a1)
    return contrast(p0 if det is DetectorChoice.D0 else p1)


def ccr_report(rho: DensityMatrix) -> ComplementarityReport:
    """Coherence, predictability and mixedness; they sum to 1 bit for a pure state."""
    s_diag = dephased_entropy(rho)
    s_vn = vn_entropy(rho)
    c_re = _clip01(s_diag - s_vn)
    p_vn = _clip01(1.0 - s_diag)
    return ComplementarityReport(c_re, p_vn, s_vn, c_re + p_vn + s_vn - 1.0)
