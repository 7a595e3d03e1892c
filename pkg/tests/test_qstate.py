import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bmzi.errors import InvalidStateError, NonUnitaryError
from bmzi.optics import BeamSplitter, MziConfig, beam_splitter_unitary, mirror_unitary, run_stages
from bmzi.qstate import (KET0, DensityMatrix, PureState, Unitary2, apply_unitary, bloch_vector, density_of, dephased_entropy,
                         dephase, vn_entropy)

from oracles import entropy_eigh

S2 = 1 / math.sqrt(2)
angles = st.floats(0, 2 * math.pi, allow_nan=False)


def test_identity_leaves_state():
    out = apply_unitary(Unitary2(np.eye(2)), KET0)
    assert out.a0 == 1 and out.a1 == 0


def test_rx_minus_half_pi_on_ket0():
    out = apply_unitary(beam_splitter_unitary(BeamSplitter(math.pi / 4)), KET0)
    assert abs(out.a0 - S2) < 1e-12 and abs(out.a1 - 1j * S2) < 1e-12


def test_mirrors_on_arm_state():
    T, R = math.cos(0.3), math.sin(0.3)
    out = apply_unitary(mirror_unitary(), PureState(T, 1j * R))
    assert abs(out.a0 - (-R)) < 1e-12 and abs(out.a1 - 1j * T) < 1e-12


def test_state_rejects_bad_norm():
    with pytest.raises(InvalidStateError):
        PureState(1.0, 0.1)
    with pytest.raises(InvalidStateError):
        PureState(float("nan"), 0.0)


def test_unitary_gate():
    with pytest.raises(NonUnitaryError):
        Unitary2([[1, 0], [0, 1 + 2e-9]])
    Unitary2([[1, 0], [0, 1 + 1e-10]])


@settings(max_examples=200)
@given(angles, angles, angles, angles, angles)
def test_norm_preserved(a, b, c, chi, gamma):
    # random SU(2) times a global phase
    u = np.exp(1j * gamma) * np.array([
        [np.exp(1j * a) * np.cos(c), np.exp(1j * b) * np.sin(c)],
        [-np.exp(-1j * b) * np.sin(c), np.exp(-1j * a) * np.cos(c)],
    ])
    psi = PureState.from_angles(c / 2, chi)
    out = apply_unitary(Unitary2(u), psi)
    assert abs(abs(out.a0) ** 2 + abs(out.a1) ** 2 - 1) < 1e-12


def test_density_of_basis_and_plus():
    assert np.allclose(density_of(KET0).m, np.diag([1, 0]), atol=0)
    plus = density_of(PureState(S2, S2)).m
    assert np.max(np.abs(plus - 0.5)) < 1e-15


def test_density_of_psi2_offdiagonal():
    theta = 0.4
    psi2 = run_stages(MziConfig.from_angles(theta, 0.2, 1.1)).psi2
    rho = density_of(psi2)
    assert abs(abs(rho.m[0, 1]) - math.cos(theta) * math.sin(theta)) < 1e-12
    assert abs(rho.m[0, 1] - rho.m[1, 0].conjugate()) == 0


def test_dephase_examples():
    assert np.array_equal(dephase(DensityMatrix(np.diag([1, 0]))).m, np.diag([1, 0]).astype(complex))
    assert np.allclose(dephase(DensityMatrix(np.full((2, 2), 0.5))).m, np.diag([0.5, 0.5]), atol=0)
    # T1^2 = 0.8: |0> carries R1^2 = 0.2
    theta = math.atan2(math.sqrt(0.2), math.sqrt(0.8))
    rho2 = density_of(run_stages(MziConfig.from_angles(theta, 0.0, 0.7)).psi2)
    d = dephase(rho2)
    assert abs(d.m[0, 0] - 0.2) < 1e-12 and abs(d.m[1, 1] - 0.8) < 1e-12
    assert d.m[0, 1] == 0 and d.m[1, 0] == 0


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_dephase_idempotent_trace_preserving(x, y, z):
    n = math.sqrt(x * x + y * y + z * z)
    if n > 1:
        x, y, z = x / n, y / n, z / n
    rho = DensityMatrix.from_bloch(x, y, z)
    once = dephase(rho)
    assert np.array_equal(dephase(once).m, once.m)
    assert abs(np.trace(once.m) - np.trace(rho.m)) < 1e-15


def test_entropy_examples():
    assert vn_entropy(density_of(PureState.from_angles(0.7, 2.0))) == 0.0
    assert vn_entropy(DensityMatrix(np.eye(2) / 2)) == 1.0
    assert abs(vn_entropy(DensityMatrix(np.diag([0.2, 0.8]))) - 0.72192809488736234787) < 1e-12


@settings(max_examples=300)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_entropy_bounds_and_oracle(x, y, z):
    n = math.sqrt(x * x + y * y + z * z)
    if n > 1:
        x, y, z = x / n, y / n, z / n
    rho = DensityMatrix.from_bloch(x, y, z)
    s = vn_entropy(rho)
    assert 0.0 <= s <= 1.0
    lam_max = rho.eigenvalues()[1]
    assert (s == 0.0) == (lam_max > 1 - 1e-10)
    if lam_max <= 1 - 1e-10:
        assert abs(s - entropy_eigh(rho.m)) < 1e-9


def test_bloch_examples():
    assert bloch_vector(DensityMatrix(np.diag([1, 0]))) == (0.0, 0.0, 1.0)
    x, y, z = bloch_vector(density_of(PureState(S2, 1j * S2)))
    assert abs(x) < 1e-15 and abs(y - 1) < 1e-15 and abs(z) < 1e-15
    psi2 = run_stages(MziConfig.from_angles(math.pi / 4, 0.3, 0.0)).psi2
    x, y, z = bloch_vector(density_of(psi2))
    assert abs(x * x + y * y - 1) < 1e-12 and abs(z) < 1e-12


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_bloch_roundtrip(x, y, z):
    n = math.sqrt(x * x + y * y + z * z)
    if n > 1:
        x, y, z = x / n, y / n, z / n
    rho = DensityMatrix.from_bloch(x, y, z)
    bx, by, bz = bloch_vector(rho)
    assert bx * bx + by * by + bz * bz <= 1 + 1e-10
    assert np.max(np.abs(DensityMatrix.from_bloch(bx, by, bz).m - rho.m)) < 1e-12


def test_density_matrix_validation():
    with pytest.raises(InvalidStateError):
        DensityMatrix([[0.5, 0.6], [0.1, 0.5]])
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.diag([0.6, 0.6]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.diag([1.1, -0.1]))


def test_matrices_are_read_only():
    rho = DensityMatrix(np.diag([1, 0]))
    with pytest.raises(ValueError):
        rho.m[0, 0] = 0


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_dephased_entropy_matches_dephase(x, y, z):
    r = math.sqrt(x * x + y * y + z * z)
    if r > 1:
        x, y, z = x / r, y / r, z / r
    rho = DensityMatrix.from_bloch(x, y, z)
    assert dephased_entropy(rho) == pytest.approx(vn_entropy(dephase(rho)), abs=1e-14)
