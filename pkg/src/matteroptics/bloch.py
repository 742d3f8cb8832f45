"""Two-level optical Bloch equations for the coherence/inversion pair.

State is (R, W): R the complex coherence amplitude, W the real
inversion (W = -1 in the ground state). With drive Omega (the local
Rabi amplitude 2 d E_loc/hbar), detuning Delta and phenomenological
rates gamma_T (transverse) and gamma_L (longitudinal):

    dR/dt = (i Delta - gamma_T) R - (i/2) Omega W
    dW/dt = -gamma_L (1 + W) + 2 Im[conj(Omega) R]

Undamped, the Bloch-vector length W^2 + 4|R|^2 is a constant of the
motion. Time stepping is classic fourth-order Runge-Kutta on plain
scalars: the validated regime keeps dt * rates <= 0.1, where an
explicit stepper is accurate, deterministic and trivially portable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    ConfigurationError,
    ParameterError,
    PoleError,
    SingularDetuningError,
    SteadyStateError,
)
from .models import characteristic_volume
from .optics import local_detuning
from .serialize import csv_num
from .units import PhysicalParams

# Constructor sanity bound on |W| and |R|. The physical bounds are 1;
# an explicit integrator at the largest permitted step overshoots them
# by its own local error, far below this but well above 1e-9, so the
# constructor only rejects states that are wrong rather than merely
# inexact. Acceptance-grade bound checks live with the integration
# tests, at tolerances matched to the step size used.
_BOUND_SLACK = 1e-3


@dataclass(frozen=True)
class BlochState:
    """Coherence R (complex), inversion W (real), time (s)."""

    coherence: complex
    inversion: float
    time: float = 0.0

    def __post_init__(self):
        w = self.inversion
        if not (math.isfinite(w) and math.isfinite(abs(self.coherence))):
            raise ParameterError("Bloch state must be finite")
        if abs(w) > 1.0 + _BOUND_SLACK:
            raise ParameterError(f"inversion {w!r} outside [-1, 1]")
        if abs(self.coherence) > 1.0 + _BOUND_SLACK:
            raise ParameterError(f"|coherence| = {abs(self.coherence)!r} exceeds 1")

    def vector_length_sq(self) -> float:
        """W^2 + 4|R|^2, conserved when both rates vanish."""
        return self.inversion**2 + 4.0 * abs(self.coherence) ** 2


@dataclass(frozen=True)
class BlochRates:
    """Longitudinal damping gamma_l and transverse relaxation gamma_t, rad/s."""

    gamma_l: float
    gamma_t: float

    def __post_init__(self):
        for name in ("gamma_l", "gamma_t"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ParameterError(f"{name} must be finite and >= 0, got {v!r}")


def inversion_drive_term(drive: complex, coherence: complex) -> float:
    """Field-coherence beat driving the inversion, in product form.

    i*(Omega*conj(R) - conj(Omega)*R) == 2*Im[conj(Omega)*R]; the left
    side is how the beat appears when written in raising/lowering
    components, the right side is the compact form used in bloch_rhs.
    Kept separate so the equivalence stays independently testable.
    """
    return (1j * (drive * coherence.conjugate() - drive.conjugate() * coherence)).real


def bloch_rhs(
    state: BlochState, drive: complex, detuning: float, rates: BlochRates
) -> tuple[complex, float]:
    """(dR/dt, dW/dt) at the given state."""
    r = state.coherence
    w = state.inversion
    dr = (1j * detuning - rates.gamma_t) * r - 0.5j * drive * w
    dw = -rates.gamma_l * (1.0 + w) + 2.0 * (drive.conjugate() * r).imag
    return dr, dw


def _as_drive_function(drive) -> Callable[[float], complex]:
    if callable(drive):
        return drive
    value = complex(drive)
    return lambda t: value


def integrate(
    initial: BlochState,
    drive,
    detuning: float,
    rates: BlochRates,
    dt: float,
    n_steps: int,
) -> list[BlochState]:
    """RK4 trajectory of n_steps states after the initial one.

    drive is a complex constant or a function t -> complex. Requires
    dt * max(|detuning|, |drive|, gamma_l, gamma_t) <= 0.1, checked
    upfront for the rates and per step for the sampled drive.
    """
    if not (dt > 0.0 and math.isfinite(dt)):
        raise ConfigurationError(f"dt must be positive and finite, got {dt!r}")
    if n_steps < 1:
        raise ConfigurationError(f"n_steps must be >= 1, got {n_steps}")
    fastest = max(abs(detuning), rates.gamma_l, rates.gamma_t)
    if dt * fastest > 0.1:
        raise ConfigurationError(
            f"dt*max(|detuning|, rates) = {dt * fastest!r} exceeds 0.1; "
            "reduce dt for a resolved trajectory"
        )
    omega = _as_drive_function(drive)

    def rhs(r, w, t):
        om = omega(t)
        dr = (1j * detuning - rates.gamma_t) * r - 0.5j * om * w
        dw = -rates.gamma_l * (1.0 + w) + 2.0 * (om.conjugate() * r).imag
        return dr, dw

    trajectory = [initial]
    r = complex(initial.coherence)
    w = float(initial.inversion)
    t = initial.time
    for i in range(n_steps):
        if dt * abs(omega(t)) > 0.1:
            raise ConfigurationError(
                f"dt*|drive| = {dt * abs(omega(t))!r} exceeds 0.1 at step {i}"
            )
        k1r, k1w = rhs(r, w, t)
        k2r, k2w = rhs(r + 0.5 * dt * k1r, w + 0.5 * dt * k1w, t + 0.5 * dt)
        k3r, k3w = rhs(r + 0.5 * dt * k2r, w + 0.5 * dt * k2w, t + 0.5 * dt)
        k4r, k4w = rhs(r + dt * k3r, w + dt * k3w, t + dt)
        r = r + (dt / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        w = w + (dt / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        t = initial.time + (i + 1) * dt
        trajectory.append(BlochState(coherence=r, inversion=w, time=t))
    return trajectory


def steady_state(drive: complex, detuning: float, rates: BlochRates) -> BlochState:
    """Closed-form fixed point of the damped Bloch equations.

    S = |Omega|^2 gamma_T / (Delta^2 + gamma_T^2) is the incoherent
    pumping rate; W = -gamma_L/(gamma_L + S) and R = (Omega/2) W /
    (Delta + i gamma_T). Requires both rates positive: without damping
    every Bloch sphere orbit is stationary on average and no unique
    fixed point exists.
    """
    if not (rates.gamma_l > 0.0 and rates.gamma_t > 0.0):
        raise SteadyStateError(
            "steady state requires gamma_l > 0 and gamma_t > 0 "
            f"(got {rates.gamma_l!r}, {rates.gamma_t!r})"
        )
    drive = complex(drive)
    pump = abs(drive) ** 2 * rates.gamma_t / (detuning**2 + rates.gamma_t**2)
    w = -rates.gamma_l / (rates.gamma_l + pump)
    r = (0.5 * drive) * w / complex(detuning, rates.gamma_t)
    return BlochState(coherence=r, inversion=w, time=0.0)


def local_rabi(
    drive_mac: complex, params: PhysicalParams, density: float, corrected: bool = True
) -> complex:
    """Rabi amplitude seen by an atom inside the medium.

    The microscopic field exceeds the macroscopic one by the dipole
    back-action of the surrounding medium, which closes to the factor
    1/(1 + V0 rho): Omega_loc = Omega_mac / (1 + V0 rho). corrected =
    False returns the macroscopic drive unchanged (dilute treatment).
    """
    if not corrected or density == 0.0:
        return complex(drive_mac)
    denom = 1.0 + characteristic_volume(params) * density
    if abs(denom) <= 1e-12:
        raise PoleError(
            "local-field denominator 1 + V0*rho vanishes; no steady "
            "local drive exists at this density",
            density=density,
        )
    return complex(drive_mac) / denom


def adiabatic_excited_fraction(
    rabi: complex, params: PhysicalParams, density: float
) -> float:
    """Excited-state fraction |Omega / (2 (Delta_l + i gamma/2))|^2.

    The population a ground-state atom keeps in the excited level when
    that level is adiabatically slaved to the drive; small values
    justify eliminating the excited state from the dynamics.
    """
    delta_l = local_detuning(params, density)
    half_gamma = 0.5 * params.gamma
    denom_sq = delta_l**2 + half_gamma**2
    if denom_sq == 0.0:
        raise SingularDetuningError(
            "local detuning and linewidth both vanish; the adiabatic "
            "solution is singular at this density"
        )
    return abs(rabi) ** 2 / (4.0 * denom_sq)


def write_trajectory_csv(trajectory: Sequence[BlochState], fh) -> None:
    """Columns t_s, re_R, im_R, W, one row per stored step."""
    fh.write("t_s,re_R,im_R,W\n")
    for s in trajectory:
        fh.write(
            f"{csv_num(s.time)},{csv_num(s.coherence.real)},"
            f"{csv_num(s.coherence.imag)},{csv_num(s.inversion)}\n"
        )
