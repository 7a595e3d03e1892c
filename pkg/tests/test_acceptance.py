"""Acceptance criteria, one test each; results are summarised at session end."""
import math
import subprocess
import sys
import time

import numpy as np

from bmzi import kernels
from bmzi.errors import UndefinedVisibilityError
from bmzi.harness import Coupling, SweepSpec, figure_fig4, run_sweep
from bmzi.measures import (DetectorChoice, biased_predictability, ccr_report, re_coherence,
                           visibility_analytic, visibility_numeric, vn_predictability)
from bmzi.optics import (MziConfig, detection_probabilities_grid, detection_probability_general,
                         prepare_via_double_bmzi, run_stages)
from bmzi.qstate import DensityMatrix, PureState, density_of

from conftest import ACCEPTANCE_RESULTS
from oracles import circuit_matrix, random_density, six_term_p0

H = math.pi / 2


def record(n, title, ok, detail):
    ACCEPTANCE_RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}")
    assert ok, detail


def test_1_identity_suite():
    t0 = time.perf_counter()
    grid = np.linspace(0, H, 50)
    worst, checked = 0.0, 0
    for a in grid:
        for b in grid:
            cfg = MziConfig.from_angles(a, b)
            for det in DetectorChoice:
                try:
                    v = visibility_analytic(cfg, det)
                except UndefinedVisibilityError:
                    continue
                p = biased_predictability(cfg, det)
                worst = max(worst, abs(p * p + v * v - 1))
                checked += 1
    dt = time.perf_counter() - t0
    record(1, "P^2+V^2=1 on 50x50 grid", worst <= 1e-12 and dt < 1.0,
           f"{checked} points, max dev {worst:.2e}, {dt:.2f}s")


def test_2_ccr_suite():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst_mixed, worst_pure = -1.0, 0.0
    for k in range(10_000):
        pure = k % 2 == 0
        rho = DensityMatrix.from_bloch(*random_density(rng, pure=pure))
        rep = ccr_report(rho)
        total = rep.coherence + rep.predictability + rep.entropy
        worst_mixed = max(worst_mixed, total - 1)
        if pure:
            worst_pure = max(worst_pure, abs(total - 1))
    dt = time.perf_counter() - t0
    record(2, "C_re+P_vn+S_vn<=1 on 1e4 states", worst_mixed <= 1e-10 and worst_pure <= 1e-10 and dt < 1.0,
           f"max excess {worst_mixed:.2e}, pure dev {worst_pure:.2e}, {dt:.2f}s")


def test_3_closed_form_vs_born():
    t0 = time.perf_counter()
    g = np.linspace(0, H, 50)
    t1, t2, ph = np.meshgrid(g, g, np.linspace(0, 2 * math.pi, 50), indexing="ij")
    c0, c1 = detection_probabilities_grid(t1, t2, ph)
    b0, b1 = kernels.born_probabilities(t1, t2, ph)
    dev = max(np.max(np.abs(c0 - b0)), np.max(np.abs(c1 - b1)), np.max(np.abs(c0 + c1 - 1)))
    dt = time.perf_counter() - t0
    # independent dense-matrix oracle on a subsample
    idx = np.random.default_rng(3).integers(0, 50, size=(200, 3))
    orc = max(abs(abs(circuit_matrix(g[i], g[j], 2 * math.pi * k / 49)[0, 0]) ** 2 - c0[i, j, k])
              for i, j, k in idx)
    record(3, "closed form == Born rule on 50^3 grid", max(dev, orc) <= 1e-12 and dt < 5.0,
           f"max dev {max(dev, orc):.2e}, {dt:.2f}s")


def test_4_case_a_equal_splitters():
    t = run_sweep(SweepSpec("theta1", 0.0, H, 101, couple=Coupling.EQUAL))
    v_dev = max(abs(v - 1) for v in t["V0"] if v is not None)
    p_dev = max(abs(p) for p in t["P0"] if p is not None)
    c = t["C_re"]
    divergence = any(ci < 0.1 and v is not None and abs(v - 1) <= 1e-12 for ci, v in zip(c, t["V0"]))
    ok = v_dev <= 1e-12 and p_dev <= 1e-12 and min(c) <= 1e-12 and max(c) >= 1 - 1e-12 and divergence
    record(4, "theta1=theta2: V0=1, P0=0, C_re spans [0,1]", ok,
           f"V0 dev {v_dev:.1e}, P0 dev {p_dev:.1e}, C_re in [{min(c):.2g},{max(c):.3g}], divergence={divergence}")


def test_5_case_b_prepared_input():
    prep = MziConfig.from_angles(math.pi / 4, math.pi / 4, H)
    psi_in = prepare_via_double_bmzi(prep)
    target = PureState(1 / math.sqrt(2), 1 / math.sqrt(2))
    overlap = abs(np.vdot(target.vector(), psi_in.vector()))
    worst_state, worst_vis = 0.0, 0.0
    for th2 in np.linspace(0.05, H - 0.05, 25):
        cfg = MziConfig.from_angles(math.pi / 4, th2, 0.0, psi_in)
        rho2 = density_of(run_stages(cfg).psi2)
        worst_state = max(worst_state, abs(re_coherence(rho2) - 1), abs(vn_predictability(rho2)))
        v = visibility_numeric(cfg, DetectorChoice.D0, 720)
        worst_vis = max(worst_vis, abs(v - 2 * math.cos(th2) * math.sin(th2)))
    ok = abs(overlap - 1) < 1e-12 and worst_state <= 1e-12 and worst_vis <= 1e-4
    record(5, "alpha=beta input: C_re=1, P_vn=0, V=2T2R2", ok,
           f"state dev {worst_state:.1e}, visibility dev {worst_vis:.1e}")


def test_6_general_input_oracle():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(10_000):
        psi = PureState.normalized(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        t1, t2 = rng.uniform(0, H, 2)
        phi = rng.uniform(0, 2 * math.pi)
        cfg = MziConfig.from_angles(t1, t2, phi, psi)
        worst = max(worst, abs(detection_probability_general(cfg) - six_term_p0(psi.a0, psi.a1, t1, t2, phi)))
    record(6, "six-term Pr(D0) == Born rule on 1e4 draws", worst <= 1e-12, f"max dev {worst:.2e}")


def test_7_simulated_fig4():
    t0 = time.perf_counter()
    within, better = 0, 0
    for seed in range(100):
        t = figure_fig4(steps=33, shots=8192, seed=seed)
        sel = [i for i, th in enumerate(t["theta"]) if 0.1 <= th <= H - 0.1]
        err = {s: max(abs(t[f"{k}_{s}"][i] - t[k][i]) for k in ("C_re", "P_vn", "V0") for i in sel)
               for s in ("sim", "raw")}
        within += err["sim"] <= 0.05
        better += err["sim"] < err["raw"]
    dt = time.perf_counter() - t0
    record(7, "simulated equal-splitter scan, 100 seeds", within >= 95 and better >= 95 and dt < 60.0,
           f"within 0.05 in {within}/100, mitigated beats raw in {better}/100, {dt:.1f}s")


def test_8_cli_determinism(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        subprocess.run([sys.executable, "-m", "bmzi", "fig4", "--seed", "11", "--out", str(path)], check=True)
        outs.append(path.read_bytes())
    record(8, "fig4 CLI output byte-identical", outs[0] == outs[1] and len(outs[0]) > 0, f"{len(outs[0])} bytes")
