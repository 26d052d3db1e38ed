"""Mechanical power extraction, power matrices, wave-resource JPDs, and AEP.

Power is taken by a linear rotational damper: P = C_pto * <theta_dot^2> per
flap, averaged over the steady measurement window. A power matrix evaluates
that over (Hs, Te) bins; weighting by a joint probability distribution of
sea states and the hours in a year gives annual energy production.
"""

from __future__ import annotations

import csv
import multiprocessing
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import (
    IntegrationConfig,
    ResponseMetrics,
    ResponseRecord,
    SystemMatrices,
    assemble_system,
    integrate,
    measure_window,
    response_metrics,
)
from .errors import InvalidInputError
from .forcing import (
    ExcitationTransfer,
    Scenario,
    TorqueScenario,
    WaveCondition,
    build_single_wave_forcing,
    build_torque_scenario,
    build_wave_forcing,
)
from .hydro import Environment, FlapProperties, HydroCoefficients

HOURS_PER_YEAR = 8766.0  # mean Gregorian year


@dataclass(frozen=True)
class PTOModel:
    """Linear power take-off damper C_pto [N m s/rad] per flap.

    ``included_in_damping`` means C_pto is already part of the hydrodynamic
    damping C used by the dynamics (and must not exceed it); otherwise it is
    added on top of C before assembling the system.
    """

    damping: float
    included_in_damping: bool = True

    def __post_init__(self):
        if self.damping < 0.0:
            raise InvalidInputError(f"PTO damping must be >= 0, got {self.damping}")


def effective_coefficients(coeffs: HydroCoefficients, pto: PTOModel) -> HydroCoefficients:
    """Coefficients actually fed to the dynamics once the PTO is accounted for."""
    if pto.included_in_damping:
        if pto.damping > coeffs.damping:
            raise InvalidInputError(
                f"PTO damping {pto.damping:.4g} exceeds the system damping "
                f"{coeffs.damping:.4g} it is supposed to be part of"
            )
        return coeffs
    return replace(coeffs, damping=coeffs.damping + pto.damping)


@dataclass(frozen=True)
class Model:
    """Everything needed to simulate one case except the case itself."""

    environment: Environment
    flap: FlapProperties
    coefficients: object  # AnalyticCoefficientSource or TableCoefficientSource
    transfer: ExcitationTransfer
    pto: PTOModel
    integration: IntegrationConfig = IntegrationConfig()

    def system_for(self, period: float, distance: float, dual: bool) -> SystemMatrices:
        if dual:
            coeffs = self.coefficients.pair(period, distance, self.environment)
        else:
            coeffs = self.coefficients.single(period, self.environment)
        return assemble_system(self.flap, effective_coefficients(coeffs, self.pto), 2 if dual else 1)


@dataclass(frozen=True)
class Design:
    """A model pinned to one layout: separation distance, heading, flap count."""

    model: Model
    distance: float  # m
    heading_deg: float = 0.0
    dual: bool = True

    def __post_init__(self):
        if self.dual and not self.distance > 0.0:
            raise InvalidInputError(f"dual designs need a positive distance, got {self.distance}")

    def describe(self) -> dict:
        return {
            "distance_m": self.distance if self.dual else None,
            "heading_deg": self.heading_deg,
            "dual": self.dual,
            "coefficients": self.model.coefficients.describe(),
            "transfer": self.model.transfer.describe(),
            "pto_damping_Nm_s_per_rad": self.model.pto.damping,
            "pto_included_in_damping": self.model.pto.included_in_damping,
        }


@dataclass(frozen=True)
class CaseResult:
    """Record, metrics, and mean PTO power [W] per flap for one simulated case."""

    record: ResponseRecord
    metrics: ResponseMetrics
    power: np.ndarray  # (n,) W

    @property
    def total_power(self) -> float:
        return float(np.sum(self.power))


def mean_power(
    record: ResponseRecord, pto: PTOModel, cfg: IntegrationConfig = IntegrationConfig()
) -> np.ndarray:
    """Mean PTO power per flap [W] over the final measurement window."""
    win = measure_window(record, cfg)
    v = record.velocity[win]
    return pto.damping * np.mean(v**2, axis=0)


def run_wave_case(model: Model, wave: WaveCondition, distance: float, dual: bool) -> CaseResult:
    """Simulate one regular-wave case (dual pair or single flap) to steady state."""
    system = model.system_for(wave.period, distance, dual)
    if dual:
        forcing = build_wave_forcing(wave, distance, model.transfer, model.environment)
    else:
        forcing = build_single_wave_forcing(wave, model.transfer, model.environment)
    record = integrate(system, forcing, model.integration)
    metrics = response_metrics(record, forcing.omega, model.integration)
    return CaseResult(record, metrics, mean_power(record, model.pto, model.integration))


def run_torque_case(model: Model, scenario: TorqueScenario) -> CaseResult:
    """Simulate one torque-forced case to steady state."""
    dual = scenario.variant is not Scenario.SINGLE
    system = model.system_for(scenario.period, scenario.distance, dual)
    forcing = build_torque_scenario(scenario, model.environment)
    record = integrate(system, forcing, model.integration)
    metrics = response_metrics(record, forcing.omega, model.integration)
    return CaseResult(record, metrics, mean_power(record, model.pto, model.integration))


@dataclass(frozen=True)
class JPD:
    """Joint probability of sea states: occurrence fraction per (Hs, Te) bin.

    A partial matrix (fractions summing below 1) is allowed; the total may
    not exceed 1.
    """

    hs_bins: np.ndarray  # m, bin centers
    te_bins: np.ndarray  # s, bin centers
    occurrence: np.ndarray  # (nH, nT) fractions

    def __post_init__(self):
        hs = np.atleast_1d(np.asarray(self.hs_bins, dtype=float))
        te = np.atleast_1d(np.asarray(self.te_bins, dtype=float))
        occ = np.atleast_2d(np.asarray(self.occurrence, dtype=float))
        if hs.size == 0 or te.size == 0:
            raise InvalidInputError("JPD must have at least one bin on each axis")
        if np.any(np.diff(hs) <= 0.0) or np.any(np.diff(te) <= 0.0):
            raise InvalidInputError("JPD bin centers must be strictly increasing")
        if occ.shape != (hs.size, te.size):
            raise InvalidInputError(
                f"JPD occurrence shape {occ.shape} does not match bins ({hs.size}, {te.size})"
            )
        if np.any(occ < 0.0):
            raise InvalidInputError("JPD occurrence fractions must be >= 0")
        total = float(occ.sum())
        if total > 1.0 + 1e-9:
            raise InvalidInputError(f"JPD occurrence fractions sum to {total:.6f} > 1")
        object.__setattr__(self, "hs_bins", hs)
        object.__setattr__(self, "te_bins", te)
        object.__setattr__(self, "occurrence", occ)

    @property
    def total_occurrence(self) -> float:
        return float(self.occurrence.sum())


JPD_HEADER_CELL = r"hs_m\te_s"


def load_jpd(path) -> JPD:
    """Load a JPD CSV: header ``hs_m\\te_s,<te centers>``, one row per Hs center."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise InvalidInputError(f"{path}: empty JPD file")
    header = rows[0]
    if header[0].strip() != JPD_HEADER_CELL:
        raise InvalidInputError(
            f"{path}: first header cell must be {JPD_HEADER_CELL!r}, got {header[0]!r}"
        )
    try:
        te = np.array([float(c) for c in header[1:]])
    except ValueError as exc:
        raise InvalidInputError(f"{path}:1: bad period header: {exc}") from None
    if te.size == 0:
        raise InvalidInputError(f"{path}: JPD header has no period bins")
    hs = []
    occ = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != te.size + 1:
            raise InvalidInputError(
                f"{path}:{lineno}: expected {te.size + 1} columns, got {len(row)}"
            )
        try:
            hs.append(float(row[0]))
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{lineno}: bad Hs value: {exc}") from None
        fractions = []
        for col, cell in enumerate(row[1:], start=2):
            try:
                value = float(cell)
            except ValueError as exc:
                raise InvalidInputError(f"{path}:{lineno}: column {col}: {exc}") from None
            if value < 0.0:
                raise InvalidInputError(
                    f"{path}:{lineno}: column {col}: occurrence {value} is negative"
                )
            fractions.append(value)
        occ.append(fractions)
    if not hs:
        raise InvalidInputError(f"{path}: JPD has no Hs rows")
    # cells may come in any order; sort both axes so reordering a file
    # never changes the parsed distribution
    hs_arr = np.array(hs)
    occ_arr = np.array(occ)
    if np.unique(hs_arr).size != hs_arr.size:
        raise InvalidInputError(f"{path}: duplicate Hs rows")
    if np.unique(te).size != te.size:
        raise InvalidInputError(f"{path}: duplicate Te columns")
    row_order = np.argsort(hs_arr)
    col_order = np.argsort(te)
    try:
        return JPD(hs_arr[row_order], te[col_order], occ_arr[np.ix_(row_order, col_order)])
    except InvalidInputError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None


@dataclass(frozen=True)
class PowerMatrix:
    """Mean mechanical power per (Hs, Te) cell, per flap and total."""

    hs_bins: np.ndarray
    te_bins: np.ndarray
    power_per_flap: np.ndarray  # (nH, nT, n_flaps) W
    power_total: np.ndarray  # (nH, nT) W
    steady: np.ndarray  # (nH, nT) bool
    computed: np.ndarray  # (nH, nT) bool, False for skipped cells
    errors: tuple[str, ...]  # "i,j: message" for quarantined failures
    config: dict


def _wave_cell(args) -> tuple[int, int, np.ndarray, bool, str | None]:
    """Worker for one power-matrix cell; exceptions are quarantined per cell."""
    design, i, j, hs, te = args
    wave = WaveCondition(hs, te, design.heading_deg)
    try:
        result = run_wave_case(design.model, wave, design.distance, design.dual)
    except Exception as exc:  # noqa: BLE001 - cell failures must not kill the sweep
        n = 2 if design.dual else 1
        return i, j, np.zeros(n), False, f"{type(exc).__name__}: {exc}"
    return i, j, result.power, result.metrics.steady, None


def compute_power_matrix(
    design: Design,
    hs_bins: np.ndarray,
    te_bins: np.ndarray,
    occurrence: np.ndarray | None = None,
    workers: int = 1,
) -> PowerMatrix:
    """Evaluate the mean-power matrix cell by cell.

    When ``occurrence`` is given, cells with zero occurrence are skipped
    (partial power matrix); their power stays 0 and ``computed`` is False.
    Cells are independent; the reduction is ordered by cell index so the
    result is identical for any worker count.
    """
    hs_bins = np.atleast_1d(np.asarray(hs_bins, dtype=float))
    te_bins = np.atleast_1d(np.asarray(te_bins, dtype=float))
    if occurrence is not None:
        occurrence = np.asarray(occurrence, dtype=float)
        if occurrence.shape != (hs_bins.size, te_bins.size):
            raise InvalidInputError(
                f"occurrence shape {occurrence.shape} does not match the requested bins"
            )
    n_flaps = 2 if design.dual else 1
    shape = (hs_bins.size, te_bins.size)
    per_flap = np.zeros(shape + (n_flaps,))
    steady = np.zeros(shape, dtype=bool)
    computed = np.zeros(shape, dtype=bool)
    failures: list[str] = []

    tasks = [
        (design, i, j, float(hs_bins[i]), float(te_bins[j]))
        for i in range(hs_bins.size)
        for j in range(te_bins.size)
        if occurrence is None or occurrence[i, j] > 0.0
    ]
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_wave_cell, tasks)
    else:
        results = [_wave_cell(t) for t in tasks]

    for i, j, power, is_steady, error in results:
        if error is not None:
            failures.append(f"cell hs={hs_bins[i]:g} te={te_bins[j]:g}: {error}")
            continue
        per_flap[i, j] = power
        steady[i, j] = is_steady
        computed[i, j] = True
    return PowerMatrix(
        hs_bins=hs_bins,
        te_bins=te_bins,
        power_per_flap=per_flap,
        power_total=per_flap.sum(axis=2),
        steady=steady,
        computed=computed,
        errors=tuple(failures),
        config=design.describe(),
    )


@dataclass(frozen=True)
class AEPReport:
    """Annual energy per cell [Wh] and in total [GWh] for one design."""

    hs_bins: np.ndarray
    te_bins: np.ndarray
    energy_wh: np.ndarray  # (nH, nT)
    total_gwh: float
    config: dict


def annual_energy(pm: PowerMatrix, jpd: JPD, hours_per_year: float = HOURS_PER_YEAR) -> AEPReport:
    """JPD-weighted annual energy of a power matrix."""
    if not (
        pm.hs_bins.size == jpd.hs_bins.size
        and pm.te_bins.size == jpd.te_bins.size
        and np.allclose(pm.hs_bins, jpd.hs_bins, rtol=1e-12, atol=0.0)
        and np.allclose(pm.te_bins, jpd.te_bins, rtol=1e-12, atol=0.0)
    ):
        raise InvalidInputError("power matrix and JPD bin axes do not match")
    energy_wh = pm.power_total * jpd.occurrence * hours_per_year
    return AEPReport(
        hs_bins=pm.hs_bins,
        te_bins=pm.te_bins,
        energy_wh=energy_wh,
        total_gwh=float(energy_wh.sum()) / 1e9,
        config=dict(pm.config),
    )


def _fmt(x) -> str:
    return format(float(x), ".12g")


def write_power_matrix_csv(pm: PowerMatrix, jpd: JPD | None, path) -> None:
    """Long-form CSV of a power matrix, one row per cell, units in headers."""
    n_flaps = pm.power_per_flap.shape[2]
    flap_cols = (
        ["power_front_W", "power_back_W"] if n_flaps == 2 else ["power_W"]
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["hs_m", "te_s", *flap_cols, "power_total_W", "occurrence_fraction", "energy_Wh", "steady", "computed"]
        )
        total_energy = 0.0
        for i in range(pm.hs_bins.size):
            for j in range(pm.te_bins.size):
                occ = float(jpd.occurrence[i, j]) if jpd is not None else 0.0
                energy = pm.power_total[i, j] * occ * HOURS_PER_YEAR
                total_energy += energy
                writer.writerow(
                    [
                        _fmt(pm.hs_bins[i]),
                        _fmt(pm.te_bins[j]),
                        *(_fmt(pm.power_per_flap[i, j, f]) for f in range(n_flaps)),
                        _fmt(pm.power_total[i, j]),
                        _fmt(occ),
                        _fmt(energy),
                        int(pm.steady[i, j]),
                        int(pm.computed[i, j]),
                    ]
                )
        fh.write(f"# total_annual_energy_GWh={_fmt(total_energy / 1e9)}\n")


def power_matrix_payload(pm: PowerMatrix, jpd: JPD | None) -> dict:
    """JSON-ready dict of a power matrix with its configuration descriptor."""
    payload = {
        "config": dict(pm.config),
        "hs_bins_m": [float(x) for x in pm.hs_bins],
        "te_bins_s": [float(x) for x in pm.te_bins],
        "power_total_W": [[float(x) for x in row] for row in pm.power_total],
        "power_per_flap_W": [
            [[float(x) for x in cell] for cell in row] for row in pm.power_per_flap
        ],
        "steady": [[bool(x) for x in row] for row in pm.steady],
        "computed": [[bool(x) for x in row] for row in pm.computed],
        "errors": list(pm.errors),
    }
    if jpd is not None:
        report = annual_energy(pm, jpd)
        payload["occurrence"] = [[float(x) for x in row] for row in jpd.occurrence]
        payload["energy_Wh"] = [[float(x) for x in row] for row in report.energy_wh]
        payload["total_annual_energy_GWh"] = report.total_gwh
    return payload
