"""Parameter sweeps, figure tables and their CSV/JSON emission.

Exact columns come from closed forms. When shots are requested, each row is
also measured through the emulated device (readout noise, tomography,
confusion-matrix mitigation) and reported in ``*_sim`` columns. Per-row
random streams derive from ``(seed, row index)``, so tables are reproducible
and rows are independent.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from bmzi import measures as M
from bmzi.errors import DegenerateSignalError, EmitError, UndefinedVisibilityError
from bmzi.kernels import born_probabilities
from bmzi.optics import HALF_PI, BeamSplitter, MziConfig, detection_probabilities, run_stages
from bmzi.qstate import DensityMatrix, PureState, density_of, dephased_entropy
from bmzi.tomo import Basis, NoiseModel, calibrate_confusion, depolarize, mitigate, reconstruct, \
    sample_counts, sample_probability

# gates before the tomography point (splitter, Z, Y, phase) and in total
GATES_TO_INSIDE = 4
GATES_TOTAL = 5


class SweepVariable(str, enum.Enum):
    THETA1 = "theta1"
    THETA2 = "theta2"
    PHI = "phi"
    ALPHA_ANGLE = "alpha_angle"


class Coupling(str, enum.Enum):
    NONE = "none"
    EQUAL = "equal"                  # theta2 = theta1
    COMPLEMENTARY = "complementary"  # theta2 = pi/2 - theta1, i.e. T1 = R2


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional scan of the interferometer. Angles are in radians."""

    variable: SweepVariable
    start: float
    stop: float
    steps: int
    theta1: float = 0.25 * math.pi
    theta2: float = 0.25 * math.pi
    phi: float = 0.0
    alpha_angle: float = 0.0
    beta_phase: float = 0.0
    couple: Coupling = Coupling.NONE
    shots: int | None = None
    noise: NoiseModel | None = None
    seed: int = 0
    phase_points: int = 64
    calibration_shots: int | None = 65536

    def __post_init__(self):
        object.__setattr__(self, "variable", SweepVariable(self.variable))
        object.__setattr__(self, "couple", Coupling(self.couple))
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        if not self.start < self.stop:
            raise ValueError("start must be smaller than stop")
        if self.couple is not Coupling.NONE and self.variable is SweepVariable.THETA2:
            raise ValueError("theta2 cannot be swept while coupled to theta1")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.phase_points < 8:
            raise ValueError("phase_points must be >= 8")
        if self.calibration_shots is not None and self.calibration_shots < 1:
            raise ValueError("calibration_shots must be >= 1 (None for the exact matrix)")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def config_at(self, value: float) -> MziConfig:
        p = {"theta1": self.theta1, "theta2": self.theta2, "phi": self.phi,
             "alpha_angle": self.alpha_angle}
        p[self.variable.value] = float(value)
        if self.couple is Coupling.EQUAL:
            p["theta2"] = p["theta1"]
        elif self.couple is Coupling.COMPLEMENTARY:
            p["theta2"] = HALF_PI - p["theta1"]
        return MziConfig.from_angles(p["theta1"], p["theta2"], p["phi"],
                                     PureState.from_angles(p["alpha_angle"], self.beta_phase))


@dataclass
class SweepTable:
    """Named columns of equal length; ``None`` marks an undefined cell."""

    columns: dict[str, list] = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows: list[dict]) -> SweepTable:
        if not rows:
            return cls({})
        return cls({k: [r[k] for r in rows] for k in rows[0]})

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()), []))

    def __getitem__(self, name: str) -> list:
        return self.columns[name]

    def rows(self):
        names = list(self.columns)
        for i in range(self.n_rows):
            yield {k: self.columns[k][i] for k in names}


def _or_none(fn, *args):
    try:
        return fn(*args)
    except (UndefinedVisibilityError, DegenerateSignalError):
        return None


def exact_row(cfg: MziConfig) -> dict:
    """Closed-form quantities for one configuration; state measures refer to psi2."""
    p0, p1 = detection_probabilities(cfg)
    if cfg.input_is_ket0:
        v0 = _or_none(M.visibility_analytic, cfg, M.DetectorChoice.D0)
        v1 = _or_none(M.visibility_analytic, cfg, M.DetectorChoice.D1)
        bp0 = _or_none(M.biased_predictability, cfg, M.DetectorChoice.D0)
        bp1 = _or_none(M.biased_predictability, cfg, M.DetectorChoice.D1)
    else:
        # the detector-paired predictabilities are only defined for |0> input
        v0 = _or_none(M.visibility_fringe, cfg, M.DetectorChoice.D0)
        v1 = _or_none(M.visibility_fringe, cfg, M.DetectorChoice.D1)
        bp0 = bp1 = None
    rho2 = density_of(run_stages(cfg).psi2)
    rep = M.ccr_report(rho2)
    return {
        "p0": p0, "p1": p1, "V0": v0, "V1": v1, "P0": bp0, "P1": bp1,
        "P_gy": M.gy_predictability(cfg.bs1), "C_l1": M.l1_coherence(rho2),
        "C_re": rep.coherence, "P_vn": rep.predictability, "S_vn": rep.entropy,
        "ccr_residual": rep.residual,
    }


def _row_seeds(seed: int, row: int, n: int) -> list[int]:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(0, row))
    return [int(s) for s in ss.generate_state(n)]


def _calibration_seed(seed: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(1,)).generate_state(1)[0])


def noisy_stage_density(cfg: MziConfig, inside: bool, noise: NoiseModel) -> DensityMatrix:
    """Density of psi2 (``inside``) or psi3 with per-gate depolarisation."""
    stages = run_stages(cfg)
    psi = stages.psi2 if inside else stages.psi3
    return depolarize(density_of(psi), noise.depolarizing_p, GATES_TO_INSIDE if inside else GATES_TOTAL)


@dataclass
class _RowShots:
    tomo_counts: list
    detect_counts: object
    scan_counts: list


def _measure_row(cfg: MziConfig, shots, noise: NoiseModel, seeds: list[int], phase_points: int) -> _RowShots:
    rho2 = noisy_stage_density(cfg, True, noise)
    tomo_counts = [sample_counts(rho2, b, shots, noise, s) for b, s in zip(Basis, seeds[:3])]
    detect = sample_counts(noisy_stage_density(cfg, False, noise), Basis.Z, shots, noise, seeds[3])
    # fringe scan: Z-basis populations of the output state for every phase
    p0, _ = born_probabilities(cfg.bs1.theta, cfg.bs2.theta, M.phase_grid(phase_points),
                               cfg.input.a0, cfg.input.a1)
    keep = (1.0 - noise.depolarizing_p) ** GATES_TOTAL
    p0 = keep * p0 + 0.5 * (1.0 - keep)
    scan = [sample_probability(min(max(float(p), 0.0), 1.0), Basis.Z, shots, noise, s)
            for p, s in zip(p0, seeds[4:])]
    return _RowShots(tomo_counts, detect, scan)


def _scan_visibilities(scan, cm):
    probs = np.array([mitigate(c, cm) if cm is not None else c.frequencies() for c in scan])
    return _or_none(M.contrast, probs[:, 0]), _or_none(M.contrast, probs[:, 1])


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Evaluate every grid point of ``spec``.

    Undefined visibilities become ``None``; a sweep never aborts on them.
    """
    rows = []
    noise = spec.noise if spec.noise is not None else NoiseModel()
    cm = None
    if spec.shots is not None:
        cm = calibrate_confusion(noise, spec.calibration_shots, _calibration_seed(spec.seed))
    for i, value in enumerate(spec.grid()):
        cfg = spec.config_at(value)
        row = {
            "theta1": cfg.bs1.theta, "theta2": cfg.bs2.theta, "phi": cfg.phi,
            "alpha_angle": spec.alpha_angle if spec.variable is not SweepVariable.ALPHA_ANGLE else float(value),
        }
        row.update(exact_row(cfg))
        if spec.shots is not None:
            seeds = _row_seeds(spec.seed, i, 4 + spec.phase_points)
            meas = _measure_row(cfg, spec.shots, noise, seeds, spec.phase_points)
            tomo = reconstruct(*meas.tomo_counts, cm=cm)
            rep = M.ccr_report(tomo.rho)
            p0s, p1s = mitigate(meas.detect_counts, cm)
            v0s, v1s = _scan_visibilities(meas.scan_counts, cm)
            row.update({
                "p0_sim": p0s, "p1_sim": p1s, "V0_sim": v0s, "V1_sim": v1s,
                "C_l1_sim": M.l1_coherence(tomo.rho), "C_re_sim": rep.coherence,
                "P_vn_sim": rep.predictability, "S_vn_sim": rep.entropy,
            })
        rows.append(row)
    return SweepTable.from_rows(rows)


def figure_fig2(grid_n: int, t_values=None) -> tuple[SweepTable, SweepTable]:
    """Visibility maps over the transmission amplitudes ``(T1, T2)``.

    Rows run over T1 (outer) and T2 (inner). Pass ``t_values`` to use a custom
    axis instead of ``linspace(0, 1, grid_n)``.
    """
    if t_values is None:
        if grid_n < 2:
            raise ValueError("grid_n must be >= 2")
        t_values = np.linspace(0.0, 1.0, grid_n)
    t_values = [float(t) for t in t_values]
    if any(not 0.0 <= t <= 1.0 for t in t_values):
        raise ValueError("transmission amplitudes must lie in [0, 1]")
    rows0, rows1 = [], []
    for t1 in t_values:
        for t2 in t_values:
            cfg = MziConfig(BeamSplitter.from_coefficients(t1, math.sqrt(1.0 - t1 * t1)),
                            BeamSplitter.from_coefficients(t2, math.sqrt(1.0 - t2 * t2)))
            rows0.append({"T1": t1, "T2": t2, "V0": _or_none(M.visibility_analytic, cfg, M.DetectorChoice.D0)})
            rows1.append({"T1": t1, "T2": t2, "V1": _or_none(M.visibility_analytic, cfg, M.DetectorChoice.D1)})
    return SweepTable.from_rows(rows0), SweepTable.from_rows(rows1)


def figure_fig4(steps: int = 33, shots: int | None = 8192, seed: int = 0,
                noise: NoiseModel | None = None, phase_points: int = 64,
                calibration_shots: int | None = 65536) -> SweepTable:
    """Equal-splitter scan ``theta1 = theta2 = theta`` with input |0>.

    Theory columns hold the coherence and predictability of psi2 and the D0
    visibility. The ``*_sim`` columns repeat the measurement on the emulated
    device: tomography of psi2 gives the populations that enter the
    pure-state coherence/predictability formulas, and a mitigated phase scan
    of D0 frequencies gives the visibility. ``*_raw`` columns use the same
    counts without mitigation.

    The confusion matrix is calibrated once per table and shared by every
    row, so its own sampling error is systematic; it gets ``calibration_shots``
    shots (None: exact matrix). Near the ends of the scan the D0 fringe is
    small and its minimum is where that error shows up first.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if shots is not None and shots < 1:
        raise ValueError("shots must be >= 1")
    noise = noise if noise is not None else NoiseModel()
    if shots is None:
        calibration_shots = None
    cm = calibrate_confusion(noise, calibration_shots, _calibration_seed(seed))
    rows = []
    for i, theta in enumerate(np.linspace(0.0, HALF_PI, steps)):
        cfg = MziConfig.from_angles(theta, theta)
        rho2 = density_of(run_stages(cfg).psi2)
        row = {
            "theta": float(theta), "T": cfg.bs1.T,
            "C_re": M.re_coherence(rho2), "P_vn": M.vn_predictability(rho2),
            "V0": _or_none(M.visibility_analytic, cfg, M.DetectorChoice.D0),
        }
        meas = _measure_row(cfg, shots, noise, _row_seeds(seed, i, 4 + phase_points), phase_points)
        for suffix, matrix in (("sim", cm), ("raw", None)):
            tomo = reconstruct(*meas.tomo_counts, cm=matrix)
            s_diag = dephased_entropy(tomo.rho)
            row[f"C_re_{suffix}"] = s_diag
            row[f"P_vn_{suffix}"] = 1.0 - s_diag
            row[f"V0_{suffix}"] = _scan_visibilities(meas.scan_counts, matrix)[0]
        rows.append(row)
    return SweepTable.from_rows(rows)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _json_value(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def render(table: SweepTable, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(table.columns))
        for row in table.rows():
            w.writerow([_cell(v) for v in row.values()])
        return buf.getvalue()
    if fmt == "json":
        data = {k: [_json_value(v) for v in col] for k, col in table.columns.items()}
        return json.dumps(data, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}; use csv or json")


def emit(table: SweepTable, fmt: str, path) -> None:
    """Write ``table`` as CSV (17 significant digits, empty cell for null) or JSON."""
    text = render(table, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise EmitError(exc.errno, f"cannot write table to {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> SweepTable:
    """Parse a table written by :func:`emit`; empty cells come back as None."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = {h: [] for h in header}
        for rec in reader:
            for h, cell in zip(header, rec):
                cols[h].append(None if cell == "" else float(cell))
    return SweepTable(cols)
