"""Command-line front end.

Precedence for every parameter: built-in default < ``--config`` JSON file <
explicit flag. Config keys are the flag names with dashes turned into
underscores (``{"theta1": 0.3, "noise_readout": [0.04, 0.04]}``). Angles are
radians. Exit codes: 0 success, 2 invalid arguments, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from bmzi import measures as M
from bmzi.errors import EmitError
from bmzi.harness import (Coupling, SweepSpec, SweepTable, SweepVariable, emit, exact_row, figure_fig2,
                          figure_fig4, noisy_stage_density, render, run_sweep)
from bmzi.optics import MziConfig, run_stages
from bmzi.qstate import PureState, bloch_vector, density_of
from bmzi.tomo import Basis, NoiseModel, bloch_error, calibrate_confusion, fidelity, reconstruct, sample_counts

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3

DEFAULTS = {
    "theta1": 0.25 * math.pi,
    "theta2": 0.25 * math.pi,
    "phi": 0.0,
    "alpha_angle": 0.0,
    "beta_phase": 0.0,
    "format": "csv",
    "out": None,
    "seed": 0,
    "shots": None,
    "noise_readout": None,
    "depolarizing": 0.0,
    "grid_points": 720,
    "variable": "theta1",
    "start": 0.0,
    "stop": 0.5 * math.pi,
    "steps": 33,
    "couple": "none",
    "phase_points": 64,
    "grid_n": 41,
    "calibration_shots": 65536,
    "stage": "inside",
    "no_mitigation": False,
}

# fig4 has its own defaults for the experiment emulation
FIG4_DEFAULTS = {"shots": 8192}


class UsageError(Exception):
    pass


def _readout_pair(text: str):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected E0,E1") from None
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected E0,E1")
    return parts


def _build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--config", default=S, help="JSON file with parameter defaults")
    out.add_argument("--format", choices=["csv", "json"], default=S)
    out.add_argument("--out", default=S, help="output path (stdout when omitted)")

    mzi = argparse.ArgumentParser(add_help=False)
    mzi.add_argument("--theta1", type=float, default=S, help="first splitter angle, T1 = cos(theta1)")
    mzi.add_argument("--theta2", type=float, default=S, help="second splitter angle")
    mzi.add_argument("--phi", type=float, default=S, help="phase shifter setting")
    mzi.add_argument("--alpha-angle", type=float, default=S,
                     help="input cos(a)|0> + e^{i chi} sin(a)|1>: the angle a")
    mzi.add_argument("--beta-phase", type=float, default=S, help="input relative phase chi")

    shots = argparse.ArgumentParser(add_help=False)
    shots.add_argument("--shots", type=int, default=S)
    shots.add_argument("--seed", type=int, default=S)
    shots.add_argument("--noise-readout", type=_readout_pair, default=S, metavar="E0,E1")
    shots.add_argument("--depolarizing", type=float, default=S, help="depolarising probability per gate")
    shots.add_argument("--phase-points", type=int, default=S, help="phases in a simulated fringe scan")
    shots.add_argument("--calibration-shots", type=int, default=S,
                       help="shots per confusion-matrix column; 0 uses the exact matrix")

    p = argparse.ArgumentParser(prog="bmzi", description="Biased Mach-Zehnder interferometer simulator")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("stages", parents=[out, mzi], help="amplitudes after each optical stage")
    sub.add_parser("probs", parents=[out, mzi], help="detector click probabilities")
    vis = sub.add_parser("visibility", parents=[out, mzi], help="fringe visibilities and companions")
    vis.add_argument("--grid-points", type=int, default=S)
    sub.add_parser("measures", parents=[out, mzi], help="coherence, predictability, visibility of one setting")
    sw = sub.add_parser("sweep", parents=[out, mzi, shots], help="one-dimensional parameter scan")
    sw.add_argument("--variable", choices=[v.value for v in SweepVariable], default=S)
    sw.add_argument("--start", type=float, default=S)
    sw.add_argument("--stop", type=float, default=S)
    sw.add_argument("--steps", type=int, default=S)
    sw.add_argument("--couple", choices=[c.value for c in Coupling], default=S)
    f2 = sub.add_parser("fig2", parents=[out], help="V0 and V1 over (T1, T2)")
    f2.add_argument("--grid-n", type=int, default=S)
    f4 = sub.add_parser("fig4", parents=[out, shots], help="equal-splitter scan with emulated experiment")
    f4.add_argument("--steps", type=int, default=S)
    tm = sub.add_parser("tomo", parents=[out, mzi, shots], help="emulated tomography of one stage")
    tm.add_argument("--stage", choices=["inside", "output"], default=S,
                    help="inside: after the phase shifter; output: after the second splitter")
    tm.add_argument("--no-mitigation", action="store_true", default=S)
    return p


def _resolve(args: argparse.Namespace) -> dict:
    params = dict(DEFAULTS)
    if args.command == "fig4":
        params.update(FIG4_DEFAULTS)
    given = vars(args)
    if "config" in given:
        try:
            with open(given["config"], encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise EmitError(exc.errno, f"cannot read config {given['config']}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {given['config']} is not valid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        params.update(cfg)
    params.update({k: v for k, v in given.items() if k not in ("config", "command")})
    return params


def _noise(params) -> NoiseModel:
    if params["noise_readout"] is None:
        base = NoiseModel()
        e0, e1 = base.readout_e0, base.readout_e1
    else:
        e0, e1 = params["noise_readout"]
    return NoiseModel(float(e0), float(e1), float(params["depolarizing"]))


def _cal_shots(params):
    n = params["calibration_shots"]
    return None if n in (None, 0) else int(n)


def _config(params) -> MziConfig:
    return MziConfig.from_angles(params["theta1"], params["theta2"], params["phi"],
                                 PureState.from_angles(params["alpha_angle"], params["beta_phase"]))


def _cmd_stages(params) -> SweepTable:
    st = run_stages(_config(params))
    rows = []
    for i, psi in enumerate((st.psi0, st.psi1, st.psi2, st.psi3)):
        p0, p1 = psi.populations()
        rows.append({"stage": i, "a0_re": psi.a0.real, "a0_im": psi.a0.imag,
                     "a1_re": psi.a1.real, "a1_im": psi.a1.imag, "pop0": p0, "pop1": p1})
    return SweepTable.from_rows(rows)


def _cmd_probs(params) -> SweepTable:
    row = exact_row(_config(params))
    return SweepTable.from_rows([{"p0": row["p0"], "p1": row["p1"]}])


def _maybe(fn, *a):
    try:
        return fn(*a)
    except ArithmeticError:
        return None


def _cmd_visibility(params) -> SweepTable:
    cfg = _config(params)
    n = params["grid_points"]
    row = {}
    for det in M.DetectorChoice:
        j = det.value
        if cfg.input_is_ket0:
            row[f"V{j}"] = _maybe(M.visibility_analytic, cfg, det)
            row[f"P{j}"] = _maybe(M.biased_predictability, cfg, det)
            row[f"V{j}_weighted"] = _maybe(M.weighted_visibility, cfg, det)
        else:
            row[f"V{j}"] = _maybe(M.visibility_fringe, cfg, det)
            row[f"P{j}"] = row[f"V{j}_weighted"] = None
        row[f"V{j}_numeric"] = _maybe(M.visibility_numeric, cfg, det, n)
    return SweepTable.from_rows([row])


def _cmd_measures(params) -> SweepTable:
    cfg = _config(params)
    row = {"theta1": cfg.bs1.theta, "theta2": cfg.bs2.theta, "phi": cfg.phi}
    row.update(exact_row(cfg))
    return SweepTable.from_rows([row])


def _cmd_sweep(params) -> SweepTable:
    spec = SweepSpec(
        variable=params["variable"], start=params["start"], stop=params["stop"], steps=params["steps"],
        theta1=params["theta1"], theta2=params["theta2"], phi=params["phi"],
        alpha_angle=params["alpha_angle"], beta_phase=params["beta_phase"], couple=params["couple"],
        shots=params["shots"], noise=_noise(params), seed=params["seed"],
        phase_points=params["phase_points"], calibration_shots=_cal_shots(params),
    )
    return run_sweep(spec)


def _cmd_fig2(params) -> SweepTable:
    t0, t1 = figure_fig2(params["grid_n"])
    return SweepTable({"T1": t0["T1"], "T2": t0["T2"], "V0": t0["V0"], "V1": t1["V1"]})


def _cmd_fig4(params) -> SweepTable:
    return figure_fig4(params["steps"], params["shots"], params["seed"], _noise(params),
                       params["phase_points"], _cal_shots(params))


def _cmd_tomo(params) -> SweepTable:
    cfg = _config(params)
    noise = _noise(params)
    shots, seed = params["shots"], params["seed"]
    if shots is None:
        shots = 8192
    inside = params["stage"] == "inside"
    rho = noisy_stage_density(cfg, inside, noise)
    truth = density_of(run_stages(cfg).psi2 if inside else run_stages(cfg).psi3)
    seeds = np.random.SeedSequence(seed).generate_state(4)
    counts = [sample_counts(rho, b, shots, noise, int(s)) for b, s in zip(Basis, seeds[:3])]
    cm = None if params["no_mitigation"] else calibrate_confusion(noise, _cal_shots(params), int(seeds[3]))
    res = reconstruct(*counts, cm=cm)
    x, y, z = bloch_vector(res.rho)
    rep = M.ccr_report(res.rho)
    row = {
        "x_raw": res.raw_bloch[0], "y_raw": res.raw_bloch[1], "z_raw": res.raw_bloch[2],
        "x": x, "y": y, "z": z, "projected": int(res.projected),
        "fidelity": fidelity(res.rho, truth), "bloch_error": bloch_error(res, truth),
        "C_l1": M.l1_coherence(res.rho), "C_re": rep.coherence, "P_vn": rep.predictability,
        "S_vn": rep.entropy,
    }
    return SweepTable.from_rows([row])


COMMANDS = {
    "stages": _cmd_stages, "probs": _cmd_probs, "visibility": _cmd_visibility,
    "measures": _cmd_measures, "sweep": _cmd_sweep, "fig2": _cmd_fig2, "fig4": _cmd_fig4,
    "tomo": _cmd_tomo,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        params = _resolve(args)
        table = COMMANDS[args.command](params)
        if params["out"] is None:
            sys.stdout.write(render(table, params["format"]))
        else:
            emit(table, params["format"], params["out"])
    except OSError as exc:
        print(f"bmzi: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError, TypeError, KeyError) as exc:
        print(f"bmzi: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
