"""Experiment grids: torque-scenario studies, wave-forced distance sweeps,
and heading sweeps, each reported against a single-flap baseline.

Rows are emitted in lexicographic grid order and every run is deterministic
for a given plan and model, independent of the worker count.
"""

from __future__ import annotations

import csv
import json
import math
import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from .energy import CaseResult, Model, run_torque_case, run_wave_case
from .errors import InvalidInputError
from .forcing import Scenario, TorqueScenario, WaveCondition
from .hydro import solve_dispersion

DEFAULT_DISTANCES = (10.0, 15.0, 33.0, 45.0, 55.0, 70.0, 86.0)
DEFAULT_TORQUE_PERIODS = (7.5, 8.5, 9.5, 10.5)
DEFAULT_WAVE_PERIODS = tuple(7.5 + 0.5 * i for i in range(9))  # 7.5 .. 11.5
DEFAULT_TORQUE_AMPLITUDES = (0.6e6, 0.8e6, 1.0e6, 1.2e6)
DEFAULT_WAVE_HEIGHTS = (1.75, 3.25)
DEFAULT_HEADINGS = tuple(float(b) for b in range(0, 50, 5))  # 0 .. 45
DEFAULT_SCENARIOS = (
    Scenario.RIGHT_ONLY_LEFT_FIXED,
    Scenario.RIGHT_ONLY_LEFT_FREE,
    Scenario.IN_PHASE,
    Scenario.OUT_OF_PHASE,
    Scenario.ARBITRARY_PHASE,
)


@dataclass(frozen=True)
class SweepPlan:
    """Axes of the experiment grids; defaults copy the studied case sets."""

    distances: tuple[float, ...] = DEFAULT_DISTANCES
    torque_periods: tuple[float, ...] = DEFAULT_TORQUE_PERIODS
    wave_periods: tuple[float, ...] = DEFAULT_WAVE_PERIODS
    torque_amplitudes: tuple[float, ...] = DEFAULT_TORQUE_AMPLITUDES
    wave_heights: tuple[float, ...] = DEFAULT_WAVE_HEIGHTS
    headings: tuple[float, ...] = DEFAULT_HEADINGS
    scenarios: tuple[Scenario, ...] = DEFAULT_SCENARIOS
    heading_distance: float = 45.0
    heading_period: float = 8.5
    heading_height: float = 1.75

    def __post_init__(self):
        for name in (
            "distances",
            "torque_periods",
            "wave_periods",
            "torque_amplitudes",
            "wave_heights",
            "scenarios",
        ):
            values = getattr(self, name)
            if len(values) == 0:
                raise InvalidInputError(f"sweep plan axis {name} is empty")
            if name != "scenarios" and any(v <= 0.0 for v in values):
                raise InvalidInputError(f"sweep plan axis {name} must be positive")
        if len(self.headings) == 0:
            raise InvalidInputError("sweep plan axis headings is empty")
        if any(not 0.0 <= b < 90.0 for b in self.headings):
            raise InvalidInputError("headings must lie in [0, 90) degrees")


@dataclass
class SweepReport:
    """Ordered rows of one study plus the column names they share."""

    study: str
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(
                f"# {self.study} sweep; columns carry units in their names "
                "(_m metres, _s seconds, _Nm newton-metres, _rad radians, _W watts, "
                "_deg degrees); ratios and fractions are dimensionless\n"
            )
            writer = csv.DictWriter(fh, fieldnames=list(self.columns))
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _csv_value(row.get(k)) for k in self.columns})

    def to_json(self, path, axes: tuple[str, ...] = ()) -> None:
        payload: dict = {"study": self.study, "config": self.config}
        if axes:
            nested: dict = {}
            for row in self.rows:
                node = nested
                for ax in axes[:-1]:
                    node = node.setdefault(_axis_key(row[ax]), {})
                node[_axis_key(row[axes[-1]])] = row
            payload["rows"] = nested
        else:
            payload["rows"] = self.rows
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _csv_value(value):
    if isinstance(value, float):
        return format(value, ".12g")
    return value


def _axis_key(value) -> str:
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


def classify_band(d_over_lambda: float) -> str:
    """Separation regime label; ratios are rounded to two decimals first."""
    r = round(d_over_lambda, 2)
    if 0.06 <= r <= 0.11:
        return "0.06-0.11"
    if 0.25 <= r <= 0.80:
        return "0.25-0.80"
    return "outside"


def _metrics_fields(prefix: str, result: CaseResult, index: int) -> dict:
    return {
        f"{prefix}_rms_rad": float(result.metrics.rms_rotation[index]),
        f"{prefix}_amplitude_rad": float(result.metrics.amplitude[index]),
        f"{prefix}_phase_rad": float(result.metrics.phase[index]),
        f"{prefix}_power_W": float(result.power[index]),
    }


def _ratio(value: float, reference: float) -> float:
    return value / reference if reference != 0.0 else math.nan


TORQUE_COLUMNS = (
    "scenario",
    "distance_m",
    "period_s",
    "torque_Nm",
    "d_over_lambda",
    "left_rms_rad",
    "left_amplitude_rad",
    "left_phase_rad",
    "left_power_W",
    "right_rms_rad",
    "right_amplitude_rad",
    "right_phase_rad",
    "right_power_W",
    "single_rms_rad",
    "single_amplitude_rad",
    "single_power_W",
    "left_rms_ratio",
    "right_rms_ratio",
    "steady",
    "error",
)


def _torque_point(args):
    model, variant, distance, period, amplitude = args
    try:
        result = run_torque_case(model, TorqueScenario(variant, amplitude, period, distance))
    except Exception as exc:  # noqa: BLE001 - per-point quarantine
        return None, f"{type(exc).__name__}: {exc}"
    return result, None


def run_torque_study(plan: SweepPlan, model: Model, workers: int = 1) -> SweepReport:
    """Grid of torque scenarios compared against the single-flap baseline.

    The single baseline is computed once per (period, amplitude) pair and
    shared across scenarios and distances.
    """
    baselines = {
        (period, amplitude): run_torque_case(
            model, TorqueScenario(Scenario.SINGLE, amplitude, period)
        )
        for period in plan.torque_periods
        for amplitude in plan.torque_amplitudes
    }
    grid = [
        (model, variant, d, period, amplitude)
        for variant in plan.scenarios
        for d in plan.distances
        for period in plan.torque_periods
        for amplitude in plan.torque_amplitudes
    ]
    outcomes = _map_points(_torque_point, grid, workers)

    report = SweepReport("torque", TORQUE_COLUMNS)
    for (variant, d, period, amplitude), (result, error) in zip(
        ((g[1], g[2], g[3], g[4]) for g in grid), outcomes
    ):
        lam = 2.0 * math.pi / solve_dispersion(period, model.environment)
        row: dict = {
            "scenario": variant.value,
            "distance_m": float(d),
            "period_s": float(period),
            "torque_Nm": float(amplitude),
            "d_over_lambda": d / lam,
            "error": error or "",
        }
        if result is not None:
            base = baselines[(period, amplitude)]
            single_rms = float(base.metrics.rms_rotation[0])
            row.update(_metrics_fields("left", result, 0))
            row.update(_metrics_fields("right", result, 1))
            row.update(
                {
                    "single_rms_rad": single_rms,
                    "single_amplitude_rad": float(base.metrics.amplitude[0]),
                    "single_power_W": float(base.power[0]),
                    "left_rms_ratio": _ratio(row["left_rms_rad"], single_rms),
                    "right_rms_ratio": _ratio(row["right_rms_rad"], single_rms),
                    "steady": result.metrics.steady and base.metrics.steady,
                }
            )
        report.rows.append(row)
    return report


WAVE_COLUMNS = (
    "distance_m",
    "period_s",
    "height_m",
    "d_over_lambda",
    "band",
    "front_rms_rad",
    "front_amplitude_rad",
    "front_phase_rad",
    "front_power_W",
    "back_rms_rad",
    "back_amplitude_rad",
    "back_phase_rad",
    "back_power_W",
    "single_rms_rad",
    "single_amplitude_rad",
    "single_power_W",
    "front_rms_ratio",
    "back_rms_ratio",
    "total_power_W",
    "steady",
    "error",
)


def _wave_point(args):
    model, distance, period, height, heading = args
    try:
        result = run_wave_case(model, WaveCondition(height, period, heading), distance, dual=True)
    except Exception as exc:  # noqa: BLE001 - per-point quarantine
        return None, f"{type(exc).__name__}: {exc}"
    return result, None


def run_wave_study(plan: SweepPlan, model: Model, workers: int = 1) -> SweepReport:
    """Wave-forced dual runs over (distance, period, height) with baselines."""
    baselines = {
        (period, height): run_wave_case(
            model, WaveCondition(height, period), distance=0.0, dual=False
        )
        for period in plan.wave_periods
        for height in plan.wave_heights
    }
    grid = [
        (model, d, period, height, 0.0)
        for d in plan.distances
        for period in plan.wave_periods
        for height in plan.wave_heights
    ]
    outcomes = _map_points(_wave_point, grid, workers)

    report = SweepReport("wave", WAVE_COLUMNS)
    for (d, period, height), (result, error) in zip(
        ((g[1], g[2], g[3]) for g in grid), outcomes
    ):
        lam = 2.0 * math.pi / solve_dispersion(period, model.environment)
        ratio = d / lam
        row: dict = {
            "distance_m": float(d),
            "period_s": float(period),
            "height_m": float(height),
            "d_over_lambda": ratio,
            "band": classify_band(ratio),
            "error": error or "",
        }
        if result is not None:
            base = baselines[(period, height)]
            single_rms = float(base.metrics.rms_rotation[0])
            row.update(_metrics_fields("front", result, 0))
            row.update(_metrics_fields("back", result, 1))
            row.update(
                {
                    "single_rms_rad": single_rms,
                    "single_amplitude_rad": float(base.metrics.amplitude[0]),
                    "single_power_W": float(base.power[0]),
                    "front_rms_ratio": _ratio(row["front_rms_rad"], single_rms),
                    "back_rms_ratio": _ratio(row["back_rms_rad"], single_rms),
                    "total_power_W": result.total_power,
                    "steady": result.metrics.steady and base.metrics.steady,
                }
            )
        report.rows.append(row)
    return report


HEADING_COLUMNS = (
    "heading_deg",
    "distance_m",
    "period_s",
    "height_m",
    "front_rms_rad",
    "front_amplitude_rad",
    "front_phase_rad",
    "front_power_W",
    "back_rms_rad",
    "back_amplitude_rad",
    "back_phase_rad",
    "back_power_W",
    "total_power_W",
    "power_loss_fraction",
    "steady",
    "error",
)


def run_heading_study(plan: SweepPlan, model: Model, workers: int = 1) -> SweepReport:
    """Heading sweep at fixed wave condition and separation distance.

    The loss fraction of each row is relative to the zero-heading run of
    the same configuration (the zero-heading row itself is exactly 0).
    """
    d = plan.heading_distance
    grid = [
        (model, d, plan.heading_period, plan.heading_height, float(beta))
        for beta in plan.headings
    ]
    outcomes = _map_points(_wave_point, grid, workers)

    zero = next(
        (res for (args, (res, err)) in zip(grid, outcomes) if args[4] == 0.0 and res is not None),
        None,
    )
    if zero is None:
        zero_result, zero_error = _wave_point((model, d, plan.heading_period, plan.heading_height, 0.0))
        if zero_result is None:
            raise InvalidInputError(f"zero-heading baseline failed: {zero_error}")
        zero = zero_result
    zero_power = zero.total_power

    report = SweepReport("heading", HEADING_COLUMNS)
    for (args, (result, error)) in zip(grid, outcomes):
        beta = args[4]
        row: dict = {
            "heading_deg": beta,
            "distance_m": float(d),
            "period_s": float(plan.heading_period),
            "height_m": float(plan.heading_height),
            "error": error or "",
        }
        if result is not None:
            row.update(_metrics_fields("front", result, 0))
            row.update(_metrics_fields("back", result, 1))
            row.update(
                {
                    "total_power_W": result.total_power,
                    "power_loss_fraction": (
                        0.0 if beta == 0.0 else 1.0 - _ratio(result.total_power, zero_power)
                    ),
                    "steady": result.metrics.steady,
                }
            )
        report.rows.append(row)
    return report


def _map_points(fn, grid: list, workers: int) -> list:
    if workers > 1 and len(grid) > 1:
        with multiprocessing.Pool(workers) as pool:
            return pool.map(fn, grid)
    return [fn(args) for args in grid]
