"""Scenario evaluation, parameter sweeps, figure data and scenario config files."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np

from .channels import partial_cnot_channel, thermal_qubit_channel
from .infobound import achieved_information, bound_theorem1, mutual_information
from .matcore import KET0, KET1, SZ, max_abs, proj
from .states import free_energy_of_coherence
from .switch import (
    ControlState,
    ScenarioParams,
    apply_switch,
    closed_form_final_state,
    simulate_full,
    switch_action,
)

LN2 = math.log(2)
H_CONTROL = -SZ

CSV_HEADER = (
    "s", "lambda", "q", "p", "i_in_bits", "i_achieved_bits",
    "i_bound_bits", "i_ac_bits", "fcoh_nats", "bound_satisfied",
)
BOUND_SLACK = 1e-9
PATH_TOL = 1e-10


class PathDisagreement(RuntimeError):
    pass


def snap(x: float, eps: float = 1e-13) -> float:
    """Zero out round-off around 0 in reported information quantities."""
    return 0.0 if abs(x) < eps else x


def fmt(x) -> str:
    """Canonical CSV rendering: 12 significant digits, ``true``/``false``."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.12g}"


@dataclass(frozen=True)
class ResultRow:
    s: float
    lambda_or_alpha: float
    q: float
    p: float
    i_in_bits: float
    i_achieved_bits: float
    i_bound_bits: float
    i_ac_bits: float
    fcoh_nats: float
    bound_satisfied: bool

    def values(self) -> tuple:
        return (
            self.s, self.lambda_or_alpha, self.q, self.p, self.i_in_bits,
            self.i_achieved_bits, self.i_bound_bits, self.i_ac_bits,
            self.fcoh_nats, self.bound_satisfied,
        )


def bound_lambda(control: ControlState) -> float:
    """Switch-ON weight fed to the bound.

    Pure controls are not covered by the mixed-control formula except at the
    endpoints; there the loosest member (``lambda = 1``) is used.
    """
    return control.value if control.kind == "mixed_lambda" else 1.0


def run_scenario(params: ScenarioParams, check_paths: bool = False) -> ResultRow:
    """Simulate one scenario and evaluate the bound for it.

    With ``check_paths`` the dilation and closed-form routes are computed too
    and must agree with the Kraus route within ``PATH_TOL``.
    """
    final = apply_switch(params)
    if check_paths:
        for name, other in (("dilation", simulate_full(params)), ("closed form", closed_form_final_state(params))):
            diff = max_abs(final.matrix - other.matrix)
            if diff > PATH_TOL:
                raise PathDisagreement(f"{name} path differs from Kraus path by {diff:.3e}")
    achieved = snap(achieved_information(final) / LN2)
    i_ac = snap(mutual_information(final, ["A"], ["C"]) / LN2)
    b = bound_theorem1(params.s, bound_lambda(params.control), params.q, params.p, params.rho_a0, params.rho_a1)
    bound = b.bound_value / LN2
    sigma = params.control.matrix()
    return ResultRow(
        s=params.s,
        lambda_or_alpha=params.control.value,
        q=params.q,
        p=params.p,
        i_in_bits=b.i_in / LN2,
        i_achieved_bits=achieved,
        i_bound_bits=bound,
        i_ac_bits=i_ac,
        fcoh_nats=free_energy_of_coherence(sigma, H_CONTROL, kT=1.0),
        bound_satisfied=bool(achieved <= bound + BOUND_SLACK),
    )


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian product of scenario parameters; rows are emitted in row-major
    order ``s, control, q, p``."""

    s_values: tuple
    control_values: tuple
    q_values: tuple
    p_values: tuple = (0.5,)
    control_kind: str = "mixed_lambda"
    rho_a0: np.ndarray = field(default_factory=lambda: proj(KET0))
    rho_a1: np.ndarray = field(default_factory=lambda: proj(KET1))
    axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        for name in ("s_values", "control_values", "q_values", "p_values"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise ValueError(f"{name} is empty")
            object.__setattr__(self, name, vals)
        # builds and validates every point
        self.points()

    def __len__(self):
        return len(self.s_values) * len(self.control_values) * len(self.q_values) * len(self.p_values)

    def points(self) -> list[ScenarioParams]:
        return [
            ScenarioParams(
                s=s, q=q, control=ControlState(self.control_kind, c), p=p,
                rho_a0=self.rho_a0, rho_a1=self.rho_a1, axis=self.axis,
            )
            for s, c, q, p in product(self.s_values, self.control_values, self.q_values, self.p_values)
        ]


def evaluate(grid: SweepGrid, jobs: int = 1) -> list[ResultRow]:
    points = grid.points()
    if jobs <= 1:
        return [run_scenario(p) for p in points]
    # executor.map preserves input order regardless of completion order
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(run_scenario, points, chunksize=max(1, len(points) // (4 * jobs))))


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([fmt(v) for v in r.values()])
    return buf.getvalue()


def run_sweep(grid: SweepGrid, out_path, jobs: int = 1) -> list[ResultRow]:
    """Evaluate every grid point and write the CSV to ``out_path``."""
    out_path = Path(out_path)
    rows = evaluate(grid, jobs)
    try:
        out_path.write_text(rows_to_csv(rows))
    except OSError as exc:
        raise OSError(f"cannot write {out_path}: {exc}") from exc
    return rows


# -- figures -----------------------------------------------------------------

def unit_grid(step: float) -> list[float]:
    n = int(round(1.0 / step))
    return [round(i * step, 12) for i in range(n + 1)]


def _write_table(path: Path, header: Sequence[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in r])
    path.write_text(buf.getvalue())


def fig2_rows(step: float = 0.02) -> list[tuple]:
    grid = SweepGrid(unit_grid(step), (0.0, 1.0), (0.5, 1.0), (0.5,))
    return [(r.s, r.lambda_or_alpha, r.q, r.i_bound_bits, r.i_achieved_bits) for r in evaluate(grid)]


def violation_rows(step: float = 0.02, q: float = 0.5, lam: float = 1.0, p: float = 0.5) -> list[tuple]:
    """Partial-CNOT channel switched with the partial-swap thermal channel.

    Columns: s, bound (bits), achieved MI with the partial CNOT (bits),
    achieved MI with two partial swaps (bits).
    """
    rows = []
    for s in unit_grid(step):
        params = ScenarioParams(s=s, q=q, control=ControlState.mixed(lam), p=p)
        sigma = params.control.matrix()
        cnot_out = switch_action(partial_cnot_channel(s), thermal_qubit_channel(s, q), sigma, params.input_am())
        b = bound_theorem1(s, lam, q, p, params.rho_a0, params.rho_a1)
        rows.append((
            s,
            b.bound_value / LN2,
            achieved_information(cnot_out) / LN2,
            achieved_information(apply_switch(params)) / LN2,
        ))
    return rows


def matched_parameter(control: ControlState) -> float:
    """Common x-axis for the two control families, matching their endpoints.

    ``lambda`` is used as is; ``alpha`` maps to ``2 min(alpha, 1 - alpha)`` so
    that alpha = 1/2 sits at lambda = 1 and alpha in {0, 1} at lambda = 0.
    """
    if control.kind == "mixed_lambda":
        return control.value
    return 2 * min(control.value, 1 - control.value)


def control_family_rows(q: float = 1.0, s_step: float = 0.1, lam_step: float = 0.05, alpha_step: float = 0.025) -> list[tuple]:
    """Achieved MI for mixed-lambda and pure-alpha control over a grid of s."""
    rows = []
    for s in unit_grid(s_step):
        for kind, values in (("mixed_lambda", unit_grid(lam_step)), ("pure_alpha", unit_grid(alpha_step))):
            for v in values:
                ctl = ControlState(kind, v)
                out = apply_switch(ScenarioParams(s=s, q=q, control=ctl))
                rows.append((s, kind, v, matched_parameter(ctl), achieved_information(out) / LN2))
    return rows


FIGURES = {
    "fig2": (("s", "lambda", "q", "i_bound_bits", "i_achieved_bits"), fig2_rows),
    "figA1": (("s", "i_bound_bits", "i_achieved_bits", "i_achieved_swap_bits"), violation_rows),
    "figA2": (("s", "control", "value", "matched_lambda", "i_achieved_bits"), control_family_rows),
}


def figure(fig_id: str, out_dir) -> Path:
    """Write ``<out_dir>/<fig_id>.csv`` and return its path."""
    if fig_id not in FIGURES:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {sorted(FIGURES)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header, make = FIGURES[fig_id]
    path = out_dir / f"{fig_id}.csv"
    _write_table(path, header, make())
    return path


# -- config files ------------------------------------------------------------

def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    cfg = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {n}: expected 'key = value', got {line!r}")
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"line {n}: unknown key {key!r}")
        cfg[key] = value
    if "lambda" in cfg and "alpha" in cfg:
        raise ValueError("config sets both lambda and alpha")
    return cfg


CONFIG_KEYS = {"s", "lambda", "alpha", "q", "p", "axis", "rho_a0", "rho_a1"}


def parse_state(value: str) -> np.ndarray:
    """A 2x2 matrix from 4 comma-separated ``re,im`` pairs in row-major order."""
    nums = [float(x) for x in value.replace(";", ",").split(",") if x.strip()]
    if len(nums) != 8:
        raise ValueError(f"state needs 8 numbers (4 re/im pairs), got {len(nums)}")
    entries = [complex(nums[i], nums[i + 1]) for i in range(0, 8, 2)]
    return np.array(entries, dtype=complex).reshape(2, 2)


def parse_values(value: str) -> list[float]:
    """Either a comma-separated list or ``start:stop:step`` (stop inclusive)."""
    if ":" in value:
        start, stop, step = (float(x) for x in value.split(":"))
        n = int(round((stop - start) / step))
        return [round(start + i * step, 12) for i in range(n + 1)]
    return [float(x) for x in value.split(",") if x.strip()]


def _fixed_fields(cfg: dict) -> dict:
    out = {}
    if "axis" in cfg:
        ax = np.array(parse_values(cfg["axis"]))
        out["axis"] = tuple(ax / np.linalg.norm(ax))
    for key in ("rho_a0", "rho_a1"):
        if key in cfg:
            out[key] = parse_state(cfg[key])
    return out


def scenario_from_config(cfg: dict, **overrides) -> ScenarioParams:
    """Single scenario; keyword overrides (``s``, ``lam``, ``q``, ``p``) win over the file."""
    vals = {k: float(v) for k, v in cfg.items() if k in ("s", "q", "p", "lambda", "alpha")}
    for k, v in overrides.items():
        if v is not None:
            vals["lambda" if k == "lam" else k] = float(v)
    if overrides.get("lam") is not None:
        vals.pop("alpha", None)
    if "alpha" in vals and overrides.get("lam") is None:
        control = ControlState.pure(vals["alpha"])
    else:
        control = ControlState.mixed(vals.get("lambda", 1.0))
    return ScenarioParams(
        s=vals.get("s", 1.0), q=vals.get("q", 0.5), control=control, p=vals.get("p", 0.5),
        **_fixed_fields(cfg),
    )


def grid_from_config(cfg: dict) -> SweepGrid:
    kind, key = ("pure_alpha", "alpha") if "alpha" in cfg else ("mixed_lambda", "lambda")
    return SweepGrid(
        s_values=tuple(parse_values(cfg.get("s", "0:1:0.1"))),
        control_values=tuple(parse_values(cfg.get(key, "1"))),
        q_values=tuple(parse_values(cfg.get("q", "0.5"))),
        p_values=tuple(parse_values(cfg.get("p", "0.5"))),
        control_kind=kind,
        **_fixed_fields(cfg),
    )


def load_config(path) -> dict:
    return parse_config(Path(path).read_text())
