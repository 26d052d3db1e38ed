"""Equations of motion: assembly, time integration, and frequency-domain oracle.

The dual-flap system is

    (diag(I, I) + [[Ia, Ia_lr], [Ia_lr, Ia]]) theta'' +
    [[C, C_lr], [C_lr, C]] theta' + diag(k, k) theta = T0 sin(w t + phi)

per flap; the single-flap case is the same with the coupling terms dropped.
Time integration uses fixed-step classical RK4 run to harmonic steady state;
``freq_domain_solve`` solves the same system with a harmonic ansatz and
serves as an independent oracle for the integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalError
from .hydro import FlapProperties, HydroCoefficients


@dataclass(frozen=True)
class SystemMatrices:
    """Total inertia matrix, damping matrix, and stiffness vector."""

    inertia: np.ndarray  # (n, n) kg m^2
    damping: np.ndarray  # (n, n) N m s/rad
    stiffness: np.ndarray  # (n,) N m/rad

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.inertia, dtype=float))
        c = np.atleast_2d(np.asarray(self.damping, dtype=float))
        k = np.atleast_1d(np.asarray(self.stiffness, dtype=float))
        n = k.size
        if m.shape != (n, n) or c.shape != (n, n):
            raise InvalidInputError(
                f"matrix shapes disagree: inertia {m.shape}, damping {c.shape}, dof {n}"
            )
        if not np.allclose(m, m.T, rtol=0.0, atol=0.0):
            raise InvalidInputError("inertia matrix must be symmetric")
        if np.any(np.linalg.eigvalsh(m) <= 0.0):
            raise InvalidInputError("total inertia matrix must be positive definite")
        if np.any(np.diag(c) <= 0.0):
            raise InvalidInputError("diagonal damping must be positive")
        object.__setattr__(self, "inertia", m)
        object.__setattr__(self, "damping", c)
        object.__setattr__(self, "stiffness", k)

    @property
    def dof(self) -> int:
        return self.stiffness.size


def assemble_system(
    props: FlapProperties, coeffs: HydroCoefficients, dof: int
) -> SystemMatrices:
    """Populate the system matrices for one flap or a symmetric pair.

    dof = 1 ignores the coupling terms; dof = 2 places the symmetric
    coupling value in both off-diagonal slots.
    """
    if dof not in (1, 2):
        raise InvalidInputError(f"dof must be 1 or 2, got {dof}")
    diag_inertia = props.inertia_dry + coeffs.added_inertia
    if dof == 1:
        return SystemMatrices(
            inertia=np.array([[diag_inertia]]),
            damping=np.array([[coeffs.damping]]),
            stiffness=np.array([props.stiffness]),
        )
    if abs(coeffs.coupling_inertia) >= diag_inertia:
        raise InvalidInputError(
            f"coupling inertia {coeffs.coupling_inertia:.4g} makes the total inertia "
            f"matrix non-positive-definite (diagonal {diag_inertia:.4g})"
        )
    return SystemMatrices(
        inertia=np.array(
            [
                [diag_inertia, coeffs.coupling_inertia],
                [coeffs.coupling_inertia, diag_inertia],
            ]
        ),
        damping=np.array(
            [
                [coeffs.damping, coeffs.coupling_damping],
                [coeffs.coupling_damping, coeffs.damping],
            ]
        ),
        stiffness=np.array([props.stiffness, props.stiffness]),
    )


@dataclass(frozen=True)
class FlapForcing:
    """Harmonic torque on one flap: T0 sin(w t + phi), or a fixed constraint."""

    amplitude: float  # N m
    phase: float = 0.0  # rad
    fixed: bool = False

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise InvalidInputError(f"torque amplitude must be >= 0, got {self.amplitude}")
        if self.fixed and self.amplitude != 0.0:
            raise InvalidInputError("a fixed flap cannot carry forcing")


@dataclass(frozen=True)
class ForcingSpec:
    """Shared angular frequency plus per-flap amplitude/phase/fixed flags."""

    omega: float  # rad/s
    flaps: tuple[FlapForcing, ...]

    def __post_init__(self):
        if not self.omega > 0.0:
            raise InvalidInputError(f"angular frequency must be positive, got {self.omega}")
        if len(self.flaps) not in (1, 2):
            raise InvalidInputError(f"expected 1 or 2 flaps, got {len(self.flaps)}")
        object.__setattr__(self, "flaps", tuple(self.flaps))

    @property
    def dof(self) -> int:
        return len(self.flaps)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def amplitudes(self) -> np.ndarray:
        return np.array([f.amplitude for f in self.flaps])

    def phases(self) -> np.ndarray:
        return np.array([f.phase for f in self.flaps])

    def free_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.flaps) if not f.fixed]

    def scaled(self, factor: float) -> "ForcingSpec":
        flaps = tuple(
            FlapForcing(f.amplitude * factor, f.phase, f.fixed) for f in self.flaps
        )
        return ForcingSpec(self.omega, flaps)


@dataclass(frozen=True)
class IntegrationConfig:
    """Fixed-step RK4 settings and steady-state detection thresholds."""

    steps_per_period: int = 200
    ramp_periods: int = 10
    measure_periods: int = 10
    max_periods: int = 200
    convergence_tol: float = 1e-4

    def __post_init__(self):
        for name in ("steps_per_period", "ramp_periods", "measure_periods", "max_periods"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not self.convergence_tol > 0.0:
            raise InvalidInputError(
                f"convergence_tol must be positive, got {self.convergence_tol}"
            )
        if self.max_periods < self.ramp_periods + self.measure_periods:
            raise InvalidInputError("max_periods must cover ramp plus measure periods")


@dataclass(frozen=True)
class ResponseRecord:
    """Uniformly sampled rotation/velocity series for every flap.

    A fixed flap's columns are identically zero. ``steady`` is False when
    the per-cycle RMS drift never dropped below the configured tolerance.
    """

    time: np.ndarray  # (S,) s
    rotation: np.ndarray  # (S, n) rad
    velocity: np.ndarray  # (S, n) rad/s
    omega: float  # rad/s
    steady: bool
    cycles: int

    @property
    def dof(self) -> int:
        return self.rotation.shape[1]


def integrate(
    system: SystemMatrices, forcing: ForcingSpec, cfg: IntegrationConfig = IntegrationConfig()
) -> ResponseRecord:
    """Integrate to harmonic steady state with fixed-step classical RK4.

    dt = (2*pi/omega)/steps_per_period, zero initial conditions. Runs at
    least ramp_periods + measure_periods full periods, then continues until
    the per-cycle rotation RMS changes by less than convergence_tol
    (relative) for every free flap, or max_periods is reached (in which
    case the record is flagged steady=False). Fixed flaps are eliminated
    from the integrated system and reported as zero series.
    """
    n = system.dof
    if forcing.dof != n:
        raise InvalidInputError(
            f"forcing has {forcing.dof} flaps but the system has {n} degrees of freedom"
        )
    free = forcing.free_indices()
    omega = forcing.omega
    steps = cfg.steps_per_period
    dt = (2.0 * math.pi / omega) / steps

    if not free:
        # everything constrained: a single zero cycle
        time = np.arange(steps + 1) * dt
        zeros = np.zeros((steps + 1, n))
        return ResponseRecord(time, zeros, zeros.copy(), omega, True, 1)

    m = system.inertia[np.ix_(free, free)]
    c = system.damping[np.ix_(free, free)]
    k = system.stiffness[free]
    amp = forcing.amplitudes()[free]
    phase = forcing.phases()[free]

    nf = len(free)
    minv = np.linalg.inv(m)
    # first-order form y = [theta, theta_dot], y' = a_mat @ y + forcing term
    a_mat = np.zeros((2 * nf, 2 * nf))
    a_mat[:nf, nf:] = np.eye(nf)
    a_mat[nf:, :nf] = -minv * k[np.newaxis, :]
    a_mat[nf:, nf:] = -minv @ c

    def rhs(t, y):
        dy = a_mat @ y
        dy[nf:] += minv @ (amp * np.sin(omega * t + phase))
        return dy

    y = np.zeros(2 * nf)
    samples = [y.copy()]
    half = 0.5 * dt
    sixth = dt / 6.0
    prev_rms = None
    steady = False
    cycles = 0

    # overflow of an unstable system is detected per cycle, not per step
    with np.errstate(over="ignore", invalid="ignore"):
        for cycle in range(cfg.max_periods):
            start = cycle * steps
            for j in range(steps):
                t = (start + j) * dt
                k1 = rhs(t, y)
                k2 = rhs(t + half, y + half * k1)
                k3 = rhs(t + half, y + half * k2)
                k4 = rhs(t + dt, y + dt * k3)
                y = y + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                samples.append(y.copy())
            cycles = cycle + 1
            block = np.asarray(samples[start + 1 : start + steps + 1])
            if not np.isfinite(block).all():
                bad = start + 1 + int(np.argmin(np.isfinite(block).all(axis=1)))
                raise NumericalError(
                    f"state became non-finite at step {bad} (t={bad * dt:.3f} s); "
                    "the system is likely unstable (negative effective damping)"
                )
            rms = np.sqrt(np.mean(block[:, :nf] ** 2, axis=0))
            if prev_rms is not None and cycles >= cfg.ramp_periods + cfg.measure_periods:
                drift = np.abs(rms - prev_rms)
                if np.all(drift <= cfg.convergence_tol * np.maximum(rms, prev_rms)):
                    steady = True
                    break
            prev_rms = rms

    arr = np.asarray(samples)
    total = arr.shape[0]
    time = np.arange(total) * dt
    rotation = np.zeros((total, n))
    velocity = np.zeros((total, n))
    for col, idx in enumerate(free):
        rotation[:, idx] = arr[:, col]
        velocity[:, idx] = arr[:, nf + col]
    return ResponseRecord(time, rotation, velocity, omega, steady, cycles)


def freq_domain_solve(system: SystemMatrices, forcing: ForcingSpec) -> np.ndarray:
    """Steady-state complex rotation amplitudes from the harmonic ansatz.

    With theta(t) = Im{Theta exp(i w t)} and forcing T0 sin(w t + phi) =
    Im{T0 exp(i phi) exp(i w t)}, the system reduces to

        (-w^2 M + i w C + K) Theta = T0 exp(i phi)

    Fixed flaps are removed by deleting their row and column before the
    solve; their returned amplitude is 0. The magnitude of each entry is
    the rotation amplitude and its argument the phase in the same sine
    convention as the integrator.
    """
    n = system.dof
    if forcing.dof != n:
        raise InvalidInputError(
            f"forcing has {forcing.dof} flaps but the system has {n} degrees of freedom"
        )
    free = forcing.free_indices()
    theta = np.zeros(n, dtype=complex)
    if not free:
        return theta
    omega = forcing.omega
    m = system.inertia[np.ix_(free, free)]
    c = system.damping[np.ix_(free, free)]
    k = np.diag(system.stiffness[free])
    z = -(omega**2) * m + 1j * omega * c + k
    f = forcing.amplitudes()[free] * np.exp(1j * forcing.phases()[free])
    try:
        sol = np.linalg.solve(z, f)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"harmonic system matrix is singular: {exc}") from None
    if not np.isfinite(sol).all():
        raise NumericalError("harmonic solve produced non-finite amplitudes")
    for col, idx in enumerate(free):
        theta[idx] = sol[col]
    return theta


def harmonic_fit(
    time: np.ndarray,
    series: np.ndarray,
    omega: float,
    window: slice | None = None,
) -> tuple[float, float]:
    """Least-squares amplitude and phase of a harmonic at frequency omega.

    Fits A*sin(w t) + B*cos(w t) over the window (default: whole series)
    and returns (sqrt(A^2+B^2), atan2(B, A)); the fitted signal is
    amplitude*sin(w t + phase) with phase in (-pi, pi]. The window must
    span at least three full periods.
    """
    if window is None:
        window = slice(None)
    t = np.asarray(time, dtype=float)[window]
    y = np.asarray(series, dtype=float)[window]
    if t.size != y.size:
        raise InvalidInputError("time and series windows differ in length")
    if t.size < 4:
        raise InvalidInputError(f"window of {t.size} samples is too short to fit")
    dt = t[1] - t[0]
    span = t[-1] - t[0] + dt
    min_span = 3.0 * (2.0 * math.pi / omega)
    if span < min_span * (1.0 - 1e-9):
        raise InvalidInputError(
            f"fit window spans {span:.4g} s but at least 3 periods ({min_span:.4g} s) are required"
        )
    design = np.column_stack([np.sin(omega * t), np.cos(omega * t)])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    amplitude = math.hypot(a, b)
    phase = math.atan2(b, a)
    if phase <= -math.pi:
        phase += 2.0 * math.pi
    return amplitude, phase


@dataclass(frozen=True)
class ResponseMetrics:
    """Per-flap steady-state statistics over the measurement window."""

    rms_rotation: np.ndarray  # (n,) rad
    amplitude: np.ndarray  # (n,) rad
    phase: np.ndarray  # (n,) rad in (-pi, pi]
    steady: bool
    cycles_used: int

    @property
    def dof(self) -> int:
        return self.rms_rotation.size


def measure_window(record: ResponseRecord, cfg: IntegrationConfig) -> slice:
    """Index slice of the final measure_periods full periods of a record."""
    span = cfg.measure_periods * cfg.steps_per_period
    total = record.time.size
    if total <= span:
        raise InvalidInputError(
            f"record of {total} samples is shorter than the {span}-sample measure window"
        )
    return slice(total - span, total)


def response_metrics(
    record: ResponseRecord, omega: float, cfg: IntegrationConfig = IntegrationConfig()
) -> ResponseMetrics:
    """RMS, amplitude, and phase per flap over the final measurement window."""
    win = measure_window(record, cfg)
    rot = record.rotation[win]
    rms = np.sqrt(np.mean(rot**2, axis=0))
    n = record.dof
    amplitude = np.zeros(n)
    phase = np.zeros(n)
    for i in range(n):
        amplitude[i], phase[i] = harmonic_fit(record.time, record.rotation[:, i], omega, win)
    return ResponseMetrics(rms, amplitude, phase, record.steady, record.cycles)


def wrap_phase(phi: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = math.remainder(phi, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def phase_distance(a: float, b: float) -> float:
    """Smallest absolute difference between two angles."""
    return abs(wrap_phase(a - b))


def input_power(record: ResponseRecord, forcing: ForcingSpec, cfg: IntegrationConfig) -> float:
    """Mean power fed in by the forcing over the measurement window [W]."""
    win = measure_window(record, cfg)
    t = record.time[win]
    tau = forcing.amplitudes()[np.newaxis, :] * np.sin(
        forcing.omega * t[:, np.newaxis] + forcing.phases()[np.newaxis, :]
    )
    return float(np.mean(np.sum(tau * record.velocity[win], axis=1)))


def dissipated_power(
    record: ResponseRecord, system: SystemMatrices, cfg: IntegrationConfig
) -> float:
    """Mean power removed by the damping matrix over the measurement window [W]."""
    win = measure_window(record, cfg)
    v = record.velocity[win]
    return float(np.mean(np.sum((v @ system.damping) * v, axis=1)))
