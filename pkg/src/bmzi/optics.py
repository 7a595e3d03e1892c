"""Optical elements of the biased interferometer and the stage pipeline.

The layout is: splitter 1, two mirrors, phase shifter on the vertical arm,
splitter 2, detectors D0 (horizontal output) and D1 (vertical output).
Global phases are never stripped; compare states through densities or
amplitude magnitudes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from bmzi.errors import DomainError
from bmzi.qstate import ASSERT_TOL, KET0, PureState, Unitary2, apply_unitary

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class BeamSplitter:
    """Biased splitter with transmission ``T = cos(theta)``, reflection ``R = sin(theta)``."""

    theta: float

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= HALF_PI):
            raise DomainError(f"splitter angle {theta!r} outside [0, pi/2]")
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_coefficients(cls, T: float, R: float) -> BeamSplitter:
        # theta is the single source of truth, so T^2 + R^2 = 1 afterwards
        if T < 0 or R < 0:
            raise DomainError("transmission and reflection amplitudes must be non-negative")
        if T == 0 and R == 0:
            raise DomainError("T and R cannot both vanish")
        return cls(math.atan2(R, T))

    @classmethod
    def balanced(cls) -> BeamSplitter:
        return cls(0.25 * math.pi)

    @property
    def T(self) -> float:
        return math.cos(self.theta)

    @property
    def R(self) -> float:
        return math.sin(self.theta)


@dataclass(frozen=True)
class MziConfig:
    bs1: BeamSplitter
    bs2: BeamSplitter
    phi: float = 0.0
    input: PureState = field(default=KET0)

    @classmethod
    def from_angles(cls, theta1: float, theta2: float, phi: float = 0.0,
                    input: PureState = KET0) -> MziConfig:
        return cls(BeamSplitter(theta1), BeamSplitter(theta2), float(phi), input)

    def with_phi(self, phi: float) -> MziConfig:
        return MziConfig(self.bs1, self.bs2, float(phi), self.input)

    @property
    def input_is_ket0(self) -> bool:
        return abs(self.input.a1) <= ASSERT_TOL


@dataclass(frozen=True)
class StageStates:
    psi0: PureState
    psi1: PureState
    psi2: PureState
    psi3: PureState


def beam_splitter_unitary(bs: BeamSplitter) -> Unitary2:
    """``R_X(-2 theta)``: cos on the diagonal, ``i sin`` off it."""
    c, s = bs.T, bs.R
    return Unitary2([[c, 1j * s], [1j * s, c]])


_YZ = Unitary2([[0, 1j], [1j, 0]])


def mirror_unitary() -> Unitary2:
    """Both mirrors together (``Y Z``): swap the paths and multiply by i."""
    return _YZ


def phase_unitary(phi: float) -> Unitary2:
    ph = math.fmod(phi, 2.0 * math.pi)
    return Unitary2([[1, 0], [0, complex(math.cos(ph), math.sin(ph))]])


def circuit_unitary(cfg: MziConfig) -> Unitary2:
    return (beam_splitter_unitary(cfg.bs2) @ phase_unitary(cfg.phi)
            @ mirror_unitary() @ beam_splitter_unitary(cfg.bs1))


def run_stages(cfg: MziConfig) -> StageStates:
    psi0 = cfg.input
    psi1 = apply_unitary(beam_splitter_unitary(cfg.bs1), psi0)
    psi2 = apply_unitary(phase_unitary(cfg.phi), apply_unitary(mirror_unitary(), psi1))
    psi3 = apply_unitary(beam_splitter_unitary(cfg.bs2), psi2)
    return StageStates(psi0, psi1, psi2, psi3)


def _closed_form(T1, R1, T2, R2, cos_phi):
    cross = 2.0 * T1 * R1 * T2 * R2 * cos_phi
    p0 = T1 * T1 * R2 * R2 + R1 * R1 * T2 * T2 + cross
    p1 = T1 * T1 * T2 * T2 + R1 * R1 * R2 * R2 - cross
    return p0, p1


def detection_probabilities(cfg: MziConfig) -> tuple[float, float]:
    """Click probabilities of D0 and D1.

    For ``|0>`` input (up to a global phase) the interference formula in
    ``T1, R1, T2, R2, cos(phi)`` is used; any other input goes through the
    Born rule on the output state.
    """
    if cfg.input_is_ket0:
        return _closed_form(cfg.bs1.T, cfg.bs1.R, cfg.bs2.T, cfg.bs2.R, math.cos(cfg.phi))
    return run_stages(cfg).psi3.populations()


def detection_probabilities_grid(theta1, theta2, phi):
    """Vectorised interference formula for ``|0>`` input over broadcastable arrays."""
    theta1, theta2, phi = np.broadcast_arrays(
        np.asarray(theta1, dtype=np.float64), np.asarray(theta2, dtype=np.float64),
        np.asarray(phi, dtype=np.float64))
    return _closed_form(np.cos(theta1), np.sin(theta1), np.cos(theta2), np.sin(theta2), np.cos(phi))


def detection_probability_general(cfg: MziConfig) -> float:
    """Probability of a D0 click for an arbitrary normalised input."""
    return run_stages(cfg).psi3.populations()[0]


def prepare_via_double_bmzi(prep: MziConfig) -> PureState:
    """Output of a preparation interferometer, to be fed into the main one."""
    if not prep.input_is_ket0:
        raise ValueError("the preparation interferometer is fed with |0>")
    return run_stages(prep).psi3
