"""Wave kinematics and hydrodynamic coefficient provisioning.

Linear dispersion (deep and finite depth), bilinear coefficient tables
loaded from CSV, and an analytic decaying-oscillatory coupling kernel for
self-contained runs where no tabulated coefficients are available.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInputError, NumericalError

DEEP = "deep"

_DISPERSION_TOL = 1e-12
_DISPERSION_MAX_ITER = 100


@dataclass(frozen=True)
class Environment:
    """Site constants: gravity [m/s^2] and water depth [m] or ``"deep"``."""

    gravity: float = 9.81
    water_depth: float | str = DEEP

    def __post_init__(self):
        if not self.gravity > 0.0:
            raise InvalidInputError(f"gravity must be positive, got {self.gravity}")
        if not self.is_deep:
            try:
                depth = float(self.water_depth)
            except (TypeError, ValueError):
                raise InvalidInputError(
                    f"water depth must be a number or 'deep', got {self.water_depth!r}"
                ) from None
            if not depth > 0.0:
                raise InvalidInputError(
                    f"water depth must be positive or 'deep', got {self.water_depth}"
                )
            object.__setattr__(self, "water_depth", depth)

    @property
    def is_deep(self) -> bool:
        return isinstance(self.water_depth, str) and self.water_depth == DEEP


@dataclass(frozen=True)
class FlapProperties:
    """Dry mass moment of inertia [kg m^2] and restoring stiffness [N m/rad]."""

    inertia_dry: float
    stiffness: float

    def __post_init__(self):
        if not self.inertia_dry > 0.0:
            raise InvalidInputError(f"dry inertia must be positive, got {self.inertia_dry}")
        if not self.stiffness > 0.0:
            raise InvalidInputError(f"stiffness must be positive, got {self.stiffness}")

    @property
    def natural_frequency(self) -> float:
        """Dry natural frequency sqrt(k/I) [rad/s] (no added inertia)."""
        return math.sqrt(self.stiffness / self.inertia_dry)


@dataclass(frozen=True)
class HydroCoefficients:
    """Added inertia, damping, and symmetric cross-flap coupling terms.

    Single-flap use keeps both coupling terms exactly zero. One value serves
    both off-diagonal slots of the dual-flap system matrices.
    """

    added_inertia: float  # kg m^2
    damping: float  # N m s/rad
    coupling_inertia: float = 0.0  # kg m^2
    coupling_damping: float = 0.0  # N m s/rad

    def __post_init__(self):
        if self.added_inertia < 0.0:
            raise InvalidInputError(f"added inertia must be >= 0, got {self.added_inertia}")
        if not self.damping > 0.0:
            raise InvalidInputError(f"damping must be positive, got {self.damping}")

    def without_coupling(self) -> "HydroCoefficients":
        return replace(self, coupling_inertia=0.0, coupling_damping=0.0)


def wavelength_deep(period: float, env: Environment = Environment()) -> float:
    """Deep-water wavelength g*T^2/(2*pi) [m]."""
    if not period > 0.0:
        raise InvalidInputError(f"period must be positive, got {period}")
    return env.gravity * period**2 / (2.0 * math.pi)


def solve_dispersion(period: float, env: Environment = Environment()) -> float:
    """Wavenumber k [rad/m] from the linear dispersion relation.

    Solves omega^2 = g*k*tanh(k*h) by safeguarded Newton iteration seeded
    with the deep-water wavenumber (a bisection fallback keeps the iterate
    inside a bracket). For ``"deep"`` water returns 2*pi/wavelength_deep
    directly.

    Raises
    ------
    NumericalError
        If the residual |omega^2 - g*k*tanh(k*h)| / omega^2 has not dropped
        below 1e-12 after 100 iterations.
    """
    if not period > 0.0:
        raise InvalidInputError(f"period must be positive, got {period}")
    if env.is_deep:
        return 2.0 * math.pi / wavelength_deep(period, env)

    g = env.gravity
    h = float(env.water_depth)
    omega = 2.0 * math.pi / period
    omega2 = omega * omega

    def residual(k):
        return omega2 - g * k * math.tanh(k * h)

    # residual is strictly decreasing in k; the true root is >= the deep-water k
    lo = omega2 / g  # deep-water wavenumber
    hi = lo
    while residual(hi) > 0.0:
        hi *= 2.0
    k = lo

    for _ in range(_DISPERSION_MAX_ITER):
        f = residual(k)
        if abs(f) / omega2 < _DISPERSION_TOL:
            return k
        if f > 0.0:
            lo = k
        else:
            hi = k
        th = math.tanh(k * h)
        dfdk = -g * (th + k * h * (1.0 - th * th))
        k_next = k - f / dfdk
        if not lo <= k_next <= hi:
            k_next = 0.5 * (lo + hi)
        k = k_next

    raise NumericalError(
        f"dispersion solve did not converge for T={period} s, h={h} m: "
        f"relative residual {abs(residual(k)) / omega2:.3e}"
    )


def wavelength(period: float, env: Environment = Environment()) -> float:
    """Wavelength 2*pi/k [m] from the same dispersion solve used everywhere."""
    return 2.0 * math.pi / solve_dispersion(period, env)


@dataclass(frozen=True)
class CoefficientTable:
    """Hydrodynamic coefficients tabulated on a (period, distance) grid.

    Arrays are indexed ``[i_period, i_distance]``. Queries outside the grid
    clamp to the nearest edge; there is no extrapolation.
    """

    period_grid: np.ndarray  # s, strictly increasing
    distance_grid: np.ndarray  # m, strictly increasing
    added_inertia: np.ndarray
    damping: np.ndarray
    coupling_inertia: np.ndarray
    coupling_damping: np.ndarray

    def __post_init__(self):
        periods = np.asarray(self.period_grid, dtype=float)
        distances = np.asarray(self.distance_grid, dtype=float)
        if periods.size == 0 or distances.size == 0:
            raise InvalidInputError("coefficient table must have at least one grid point")
        if np.any(np.diff(periods) <= 0.0) or np.any(np.diff(distances) <= 0.0):
            raise InvalidInputError("coefficient table grids must be strictly increasing")
        shape = (periods.size, distances.size)
        for name in ("added_inertia", "damping", "coupling_inertia", "coupling_damping"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise InvalidInputError(
                    f"coefficient table field {name} has shape {arr.shape}, expected {shape}"
                )
            object.__setattr__(self, name, arr)
        if np.any(self.added_inertia < 0.0):
            raise InvalidInputError("coefficient table added inertia must be >= 0")
        if np.any(self.damping <= 0.0):
            raise InvalidInputError("coefficient table damping must be positive")
        object.__setattr__(self, "period_grid", periods)
        object.__setattr__(self, "distance_grid", distances)


def _clamped_segment(grid: np.ndarray, x: float) -> tuple[int, int, float]:
    """Index pair and interpolation fraction for x on a sorted grid, clamped."""
    if grid.size == 1:
        return 0, 0, 0.0
    x = min(max(x, grid[0]), grid[-1])
    i = int(np.searchsorted(grid, x, side="right")) - 1
    i = min(max(i, 0), grid.size - 2)
    t = (x - grid[i]) / (grid[i + 1] - grid[i])
    return i, i + 1, t


def coefficients_at(table: CoefficientTable, period: float, distance: float) -> HydroCoefficients:
    """Bilinear interpolation of the table at (period, distance), clamped at edges."""
    i0, i1, tp = _clamped_segment(table.period_grid, period)
    j0, j1, td = _clamped_segment(table.distance_grid, distance)

    def interp(arr):
        row0 = (1.0 - td) * arr[i0, j0] + td * arr[i0, j1]
        row1 = (1.0 - td) * arr[i1, j0] + td * arr[i1, j1]
        return (1.0 - tp) * row0 + tp * row1

    return HydroCoefficients(
        added_inertia=interp(table.added_inertia),
        damping=interp(table.damping),
        coupling_inertia=interp(table.coupling_inertia),
        coupling_damping=interp(table.coupling_damping),
    )


def load_coefficient_table(path) -> CoefficientTable:
    """Load a coefficient table CSV: period_s,distance_m,Ia,C,Ia_lr,C_lr.

    One row per grid cell; the grids are inferred from the distinct period
    and distance values and every (period, distance) cell must be present.
    """
    expected = ["period_s", "distance_m", "Ia", "C", "Ia_lr", "C_lr"]
    cells: dict[tuple[float, float], tuple[float, float, float, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidInputError(f"{path}: empty coefficient table file") from None
        if [c.strip() for c in header] != expected:
            raise InvalidInputError(
                f"{path}: bad header {header!r}, expected {','.join(expected)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 6:
                raise InvalidInputError(f"{path}:{lineno}: expected 6 columns, got {len(row)}")
            try:
                values = [float(c) for c in row]
            except ValueError as exc:
                raise InvalidInputError(f"{path}:{lineno}: {exc}") from None
            key = (values[0], values[1])
            if key in cells:
                raise InvalidInputError(
                    f"{path}:{lineno}: duplicate cell for period={key[0]}, distance={key[1]}"
                )
            cells[key] = tuple(values[2:])
    if not cells:
        raise InvalidInputError(f"{path}: coefficient table has no data rows")

    periods = np.array(sorted({p for p, _ in cells}))
    distances = np.array(sorted({d for _, d in cells}))
    shape = (periods.size, distances.size)
    fields = [np.empty(shape) for _ in range(4)]
    for i, p in enumerate(periods):
        for j, d in enumerate(distances):
            if (p, d) not in cells:
                raise InvalidInputError(
                    f"{path}: missing cell for period={p} s, distance={d} m"
                )
            for arr, v in zip(fields, cells[(p, d)]):
                arr[i, j] = v
    return CoefficientTable(periods, distances, *fields)


def analytic_coupling(
    base: HydroCoefficients,
    distance: float,
    wavenumber: float,
    alpha: float,
    eps: float = 0.1,
) -> HydroCoefficients:
    """Cross-flap coupling from a decaying oscillatory kernel.

    The diagonal terms of ``base`` are kept; the coupling terms are

        C_lr  = -alpha * C   * cos(k*d) / sqrt(max(k*d, eps))
        Ia_lr = -alpha * I_a * sin(k*d) / sqrt(max(k*d, eps))

    Negative coupling damping at small k*d reduces the net in-phase damping,
    so closely spaced flaps moving together respond more than an isolated
    one. ``alpha`` in [0, 1] scales the interaction strength; alpha = 0
    means isolated flaps.
    """
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInputError(f"coupling gain alpha must be in [0, 1], got {alpha}")
    if not distance > 0.0:
        raise InvalidInputError(f"distance must be positive, got {distance}")
    if not wavenumber > 0.0:
        raise InvalidInputError(f"wavenumber must be positive, got {wavenumber}")
    kd = wavenumber * distance
    scale = alpha / math.sqrt(max(kd, eps))
    return replace(
        base,
        coupling_damping=-scale * base.damping * math.cos(kd),
        coupling_inertia=-scale * base.added_inertia * math.sin(kd),
    )


@dataclass(frozen=True)
class AnalyticCoefficientSource:
    """Coefficient provider backed by the analytic coupling kernel.

    ``base`` holds the (period-independent) diagonal added inertia and
    damping; pair queries add coupling terms from the kernel at the
    wavenumber of the requested period.
    """

    base: HydroCoefficients
    alpha: float
    eps: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidInputError(f"coupling gain alpha must be in [0, 1], got {self.alpha}")

    def single(self, period: float, env: Environment) -> HydroCoefficients:
        return self.base.without_coupling()

    def pair(self, period: float, distance: float, env: Environment) -> HydroCoefficients:
        k = solve_dispersion(period, env)
        return analytic_coupling(self.base, distance, k, self.alpha, self.eps)

    def describe(self) -> dict:
        return {
            "source": "analytic",
            "added_inertia_kg_m2": self.base.added_inertia,
            "damping_Nm_s_per_rad": self.base.damping,
            "alpha": self.alpha,
            "eps": self.eps,
        }


@dataclass(frozen=True)
class TableCoefficientSource:
    """Coefficient provider backed by a tabulated (period, distance) grid.

    The single-flap coefficients are the diagonal entries at the largest
    tabulated distance (far-field isolation) with coupling zeroed.
    """

    table: CoefficientTable
    label: str = "table"

    def single(self, period: float, env: Environment) -> HydroCoefficients:
        far = float(self.table.distance_grid[-1])
        return coefficients_at(self.table, period, far).without_coupling()

    def pair(self, period: float, distance: float, env: Environment) -> HydroCoefficients:
        return coefficients_at(self.table, period, distance)

    def describe(self) -> dict:
        return {"source": self.label}
