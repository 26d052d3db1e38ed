"""Builders for torque-scenario and regular-wave forcing.

Torque scenarios drive one or both flaps with prescribed amplitudes and
phase differences (flaps labeled left = index 0, right = index 1). Wave
forcing converts a regular wave into per-flap torques through a
torque-per-wave-amplitude transfer, a back-flap transmission factor, and a
heading-angle model (front = index 0, back = index 1).
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import FlapForcing, ForcingSpec
from .errors import InvalidInputError
from .hydro import Environment, solve_dispersion

LEFT, RIGHT = 0, 1
FRONT, BACK = 0, 1


class Scenario(enum.Enum):
    """Torque-forcing case labels."""

    SINGLE = "single"
    RIGHT_ONLY_LEFT_FIXED = "right-only-left-fixed"
    RIGHT_ONLY_LEFT_FREE = "right-only-left-free"
    IN_PHASE = "in-phase"
    OUT_OF_PHASE = "out-of-phase"
    ARBITRARY_PHASE = "arbitrary-phase"


@dataclass(frozen=True)
class TorqueScenario:
    """One torque-forced case: scenario variant, amplitude, period, spacing."""

    variant: Scenario
    amplitude: float  # N m
    period: float  # s
    distance: float = 0.0  # m, unused for SINGLE

    def __post_init__(self):
        if not self.amplitude > 0.0:
            raise InvalidInputError(f"torque amplitude must be positive, got {self.amplitude}")
        if not self.period > 0.0:
            raise InvalidInputError(f"period must be positive, got {self.period}")
        if self.variant is Scenario.ARBITRARY_PHASE and not self.distance > 0.0:
            raise InvalidInputError("arbitrary-phase scenario needs a positive distance")


def build_torque_scenario(s: TorqueScenario, env: Environment = Environment()) -> ForcingSpec:
    """ForcingSpec for one of the torque-forcing cases.

    The arbitrary-phase case lags the right flap by the travel phase
    2*pi*d/lambda of a wave covering the separation distance.
    """
    omega = 2.0 * math.pi / s.period
    t0 = s.amplitude
    if s.variant is Scenario.SINGLE:
        return ForcingSpec(omega, (FlapForcing(t0, 0.0),))
    if s.variant is Scenario.RIGHT_ONLY_LEFT_FIXED:
        flaps = (FlapForcing(0.0, 0.0, fixed=True), FlapForcing(t0, 0.0))
    elif s.variant is Scenario.RIGHT_ONLY_LEFT_FREE:
        flaps = (FlapForcing(0.0, 0.0), FlapForcing(t0, 0.0))
    elif s.variant is Scenario.IN_PHASE:
        flaps = (FlapForcing(t0, 0.0), FlapForcing(t0, 0.0))
    elif s.variant is Scenario.OUT_OF_PHASE:
        flaps = (FlapForcing(t0, 0.0), FlapForcing(t0, math.pi))
    elif s.variant is Scenario.ARBITRARY_PHASE:
        k = solve_dispersion(s.period, env)
        flaps = (FlapForcing(t0, 0.0), FlapForcing(t0, k * s.distance))
    else:  # pragma: no cover
        raise InvalidInputError(f"unknown scenario {s.variant}")
    return ForcingSpec(omega, flaps)


@dataclass(frozen=True)
class WaveCondition:
    """Regular wave: height H (crest-to-trough, m), period (s), heading (deg).

    Heading 0 is normal incidence (wave propagation perpendicular to the
    flap width); 90 degrees would be wave crests parallel to propagation
    past the flap face and produces no excitation, so it is rejected.
    """

    height: float
    period: float
    heading_deg: float = 0.0

    def __post_init__(self):
        if not self.height > 0.0:
            raise InvalidInputError(f"wave height must be positive, got {self.height}")
        if not self.period > 0.0:
            raise InvalidInputError(f"wave period must be positive, got {self.period}")
        if not 0.0 <= self.heading_deg < 90.0:
            raise InvalidInputError(
                f"heading must be in [0, 90) degrees, got {self.heading_deg}"
            )

    @property
    def amplitude(self) -> float:
        """Wave amplitude H/2 [m]."""
        return 0.5 * self.height


@dataclass(frozen=True)
class ExcitationTransfer:
    """Wave-to-torque transfer: Gamma(T) [N m per m of wave amplitude].

    ``eta`` sets how strongly the front flap shades the back one: the
    back-flap amplitude is scaled by tau = 1 - eta * exp(-d/lambda), so the
    front/back forcing gap eta*exp(-d/lambda) fades with distance. d = 0
    means coincident flaps and gets tau = 1 exactly.
    """

    period_grid: np.ndarray  # s
    gamma: np.ndarray  # N m / m
    eta: float = 0.1

    def __post_init__(self):
        periods = np.atleast_1d(np.asarray(self.period_grid, dtype=float))
        gamma = np.atleast_1d(np.asarray(self.gamma, dtype=float))
        if periods.size == 0:
            raise InvalidInputError("transfer table must have at least one period")
        if gamma.shape != periods.shape:
            raise InvalidInputError("transfer table grids and values differ in length")
        if periods.size > 1 and np.any(np.diff(periods) <= 0.0):
            raise InvalidInputError("transfer period grid must be strictly increasing")
        if np.any(gamma <= 0.0):
            raise InvalidInputError("transfer values must be positive")
        if not 0.0 <= self.eta < 1.0:
            raise InvalidInputError(f"transmission strength eta must be in [0, 1), got {self.eta}")
        object.__setattr__(self, "period_grid", periods)
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def constant(cls, gamma: float, eta: float = 0.1) -> "ExcitationTransfer":
        return cls(np.array([1.0]), np.array([gamma]), eta)

    def transmission(self, distance: float, wavelength: float) -> float:
        """Back-flap amplitude factor tau(d) in (0, 1]."""
        if distance < 0.0:
            raise InvalidInputError(f"distance must be >= 0, got {distance}")
        if distance == 0.0:
            return 1.0
        return 1.0 - self.eta * math.exp(-distance / wavelength)

    def describe(self) -> dict:
        if self.period_grid.size == 1:
            return {"gamma_Nm_per_m": float(self.gamma[0]), "eta": self.eta}
        return {"gamma_table_points": int(self.period_grid.size), "eta": self.eta}


def transfer_at(xfer: ExcitationTransfer, period: float) -> float:
    """Gamma at the requested period: linear interpolation, clamped at edges."""
    if not period > 0.0:
        raise InvalidInputError(f"period must be positive, got {period}")
    return float(np.interp(period, xfer.period_grid, xfer.gamma))


def load_transfer_table(path, eta: float = 0.1) -> ExcitationTransfer:
    """Load a transfer table CSV: period_s,gamma_Nm_per_m."""
    expected = ["period_s", "gamma_Nm_per_m"]
    periods: list[float] = []
    gammas: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidInputError(f"{path}: empty transfer table file") from None
        if [c.strip() for c in header] != expected:
            raise InvalidInputError(f"{path}: bad header {header!r}, expected {','.join(expected)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise InvalidInputError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                periods.append(float(row[0]))
                gammas.append(float(row[1]))
            except ValueError as exc:
                raise InvalidInputError(f"{path}:{lineno}: {exc}") from None
    if not periods:
        raise InvalidInputError(f"{path}: transfer table has no data rows")
    order = np.argsort(periods)
    return ExcitationTransfer(np.asarray(periods)[order], np.asarray(gammas)[order], eta)


def build_wave_forcing(
    wave: WaveCondition,
    distance: float,
    xfer: ExcitationTransfer,
    env: Environment = Environment(),
) -> ForcingSpec:
    """Dual-flap forcing from a regular wave at separation ``distance``.

    Front flap: amplitude Gamma(T) * (H/2) * cos(beta), phase 0. Back flap:
    the same amplitude scaled by the transmission factor tau(d), with phase
    -k * d * cos(beta) because the wave arrives later at the back flap and
    the effective separation along propagation is d * cos(beta).
    """
    if distance < 0.0:
        raise InvalidInputError(f"distance must be >= 0, got {distance}")
    omega = 2.0 * math.pi / wave.period
    k = solve_dispersion(wave.period, env)
    lam = 2.0 * math.pi / k
    cos_b = math.cos(math.radians(wave.heading_deg))
    front_amp = transfer_at(xfer, wave.period) * wave.amplitude * cos_b
    tau = xfer.transmission(distance, lam)
    flaps = (
        FlapForcing(front_amp, 0.0),
        FlapForcing(tau * front_amp, -k * distance * cos_b),
    )
    return ForcingSpec(omega, flaps)


def build_single_wave_forcing(
    wave: WaveCondition, xfer: ExcitationTransfer, env: Environment = Environment()
) -> ForcingSpec:
    """Single-flap forcing from the same wave model (front flap only)."""
    omega = 2.0 * math.pi / wave.period
    cos_b = math.cos(math.radians(wave.heading_deg))
    amp = transfer_at(xfer, wave.period) * wave.amplitude * cos_b
    return ForcingSpec(omega, (FlapForcing(amp, 0.0),))
