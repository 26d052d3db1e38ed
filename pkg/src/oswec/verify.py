"""Built-in oracle suite: randomized well-posed systems checked for
time-domain vs frequency-domain agreement, energy balance, and linearity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    FlapForcing,
    ForcingSpec,
    IntegrationConfig,
    SystemMatrices,
    dissipated_power,
    freq_domain_solve,
    input_power,
    integrate,
    phase_distance,
    response_metrics,
)

AMPLITUDE_TOL = 0.01  # relative
PHASE_TOL = 0.02  # rad
ENERGY_TOL = 0.01  # relative
LINEARITY_TOL = 1e-6  # relative
_TINY_AMPLITUDE = 1e-12  # rad; below this a fitted phase is meaningless


@dataclass
class VerifyCase:
    """One randomized system/forcing pair and its check outcomes."""

    index: int
    params: dict
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class VerifyOutcome:
    cases: list[VerifyCase]
    property_failures: dict[str, int]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)


def _random_case(rng: np.random.Generator) -> tuple[SystemMatrices, ForcingSpec, dict]:
    dof = 1 if rng.random() < 0.5 else 2
    inertia = 10.0 ** rng.uniform(6.0, 7.3)
    omega_n = rng.uniform(0.4, 1.2)
    stiffness = inertia * omega_n**2
    zeta = rng.uniform(0.02, 1.0)
    damping = 2.0 * zeta * inertia * omega_n
    omega = rng.uniform(0.5, 2.0) * omega_n
    params = {
        "dof": dof,
        "inertia_kg_m2": inertia,
        "stiffness_Nm_per_rad": stiffness,
        "damping_Nm_s_per_rad": damping,
        "damping_ratio": zeta,
        "omega_rad_s": omega,
    }
    if dof == 1:
        system = SystemMatrices(
            np.array([[inertia]]), np.array([[damping]]), np.array([stiffness])
        )
        amp = rng.uniform(1e5, 2e6)
        phase = rng.uniform(-math.pi, math.pi)
        params.update({"torque_Nm": [amp], "phase_rad": [phase]})
        forcing = ForcingSpec(omega, (FlapForcing(amp, phase),))
        return system, forcing, params
    coupling_inertia = rng.uniform(-0.4, 0.4) * inertia
    coupling_damping = rng.uniform(-0.7, 0.7) * damping
    system = SystemMatrices(
        np.array([[inertia, coupling_inertia], [coupling_inertia, inertia]]),
        np.array([[damping, coupling_damping], [coupling_damping, damping]]),
        np.array([stiffness, stiffness]),
    )
    amps = rng.uniform(1e5, 2e6, size=2)
    phases = rng.uniform(-math.pi, math.pi, size=2)
    params.update(
        {
            "coupling_inertia_kg_m2": coupling_inertia,
            "coupling_damping_Nm_s_per_rad": coupling_damping,
            "torque_Nm": list(amps),
            "phase_rad": list(phases),
        }
    )
    forcing = ForcingSpec(
        omega, (FlapForcing(amps[0], phases[0]), FlapForcing(amps[1], phases[1]))
    )
    return system, forcing, params


def run_verification(
    n_cases: int = 20,
    seed: int = 0,
    integration: IntegrationConfig = IntegrationConfig(),
    flip_damping_sign: bool = False,
) -> VerifyOutcome:
    """Check every property on ``n_cases`` randomized systems.

    ``flip_damping_sign`` is a fault-injection hook for testing the checker
    itself: it negates the damping matrix inside the energy-balance
    accounting, which must make that property fail.
    """
    rng = np.random.default_rng(seed)
    cases = []
    property_failures = {"oracle-amplitude": 0, "oracle-phase": 0, "energy-balance": 0, "linearity": 0}
    for index in range(n_cases):
        system, forcing, params = _random_case(rng)
        case = VerifyCase(index, params)
        record = integrate(system, forcing, integration)
        metrics = response_metrics(record, forcing.omega, integration)
        theta = freq_domain_solve(system, forcing)

        for i in range(system.dof):
            expected_amp = abs(theta[i])
            got_amp = metrics.amplitude[i]
            denom = max(expected_amp, _TINY_AMPLITUDE)
            if abs(got_amp - expected_amp) / denom > AMPLITUDE_TOL:
                case.failures.append(
                    f"oracle-amplitude flap {i}: time-domain {got_amp:.6e} vs "
                    f"frequency-domain {expected_amp:.6e}"
                )
                property_failures["oracle-amplitude"] += 1
            if expected_amp > _TINY_AMPLITUDE:
                dphi = phase_distance(metrics.phase[i], np.angle(theta[i]))
                if dphi > PHASE_TOL:
                    case.failures.append(
                        f"oracle-phase flap {i}: time-domain {metrics.phase[i]:.4f} vs "
                        f"frequency-domain {float(np.angle(theta[i])):.4f} (gap {dphi:.4f} rad)"
                    )
                    property_failures["oracle-phase"] += 1

        p_in = input_power(record, forcing, integration)
        p_out = _signed_dissipated(record, system, integration, flip_damping_sign)
        denom = max(abs(p_in), abs(p_out), 1e-12)
        if abs(p_in - p_out) / denom > ENERGY_TOL:
            case.failures.append(
                f"energy-balance: input {p_in:.6e} W vs dissipated {p_out:.6e} W"
            )
            property_failures["energy-balance"] += 1

        scaled = integrate(system, forcing.scaled(2.0), integration)
        scaled_metrics = response_metrics(scaled, forcing.omega, integration)
        for i in range(system.dof):
            base_amp = metrics.amplitude[i]
            if base_amp <= _TINY_AMPLITUDE:
                continue
            ratio = scaled_metrics.amplitude[i] / base_amp
            if abs(ratio - 2.0) > 2.0 * LINEARITY_TOL:
                case.failures.append(
                    f"linearity flap {i}: doubling forcing scaled the amplitude by {ratio:.8f}"
                )
                property_failures["linearity"] += 1
        cases.append(case)
    return VerifyOutcome(cases, property_failures)


def _signed_dissipated(record, system, integration, flipped: bool) -> float:
    value = dissipated_power(record, system, integration)
    return -value if flipped else value


def format_report(outcome: VerifyOutcome) -> str:
    """Per-property pass/fail lines followed by any failing case parameters."""
    lines = []
    n = len(outcome.cases)
    for prop, count in outcome.property_failures.items():
        status = "PASS" if count == 0 else "FAIL"
        lines.append(f"{status} {prop}: {n - _cases_failing(outcome, prop)}/{n} cases ok")
    for case in outcome.cases:
        if not case.passed:
            lines.append(f"case {case.index} FAILED with parameters {case.params}:")
            for failure in case.failures:
                lines.append(f"  - {failure}")
    return "\n".join(lines)


def _cases_failing(outcome: VerifyOutcome, prop: str) -> int:
    return sum(1 for c in outcome.cases if any(f.startswith(prop) for f in c.failures))
