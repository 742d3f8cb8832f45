"""Effective dipole potentials and the beam-splitter scalar parameters.

The full mean-field potential carries the local-field correction through
the density-shifted detuning; three documented limits drop parts of that
correction. All four coincide at zero density. Potentials are returned
as energies (erg); division by hbar happens at the propagator boundary.

The spontaneous emission rate is set to zero inside these potentials:
they are the real, coherent-regime forms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PoleError, SingularDetuningError
from .units import HBAR, PhysicalParams, detuning
from .optics import EPS_POLE, polarizability


class ModelKind(enum.Enum):
    """Which effective potential to use; config/CLI names in .value."""

    FULL = "full"
    SINGLE_PARTICLE = "single"
    GROSS_PITAEVSKII_TYPE = "gp"
    WALLIS_TYPE = "wallis"

    @classmethod
    def from_name(cls, name: str) -> "ModelKind":
        for kind in cls:
            if kind.value == name:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ParameterError(f"unknown model '{name}'; expected one of: {valid}")


@dataclass(frozen=True)
class RamanNathParams:
    """Scalar beam-splitter parameters (V0, g0, tau) at peak density rho_0.

    tau = 2*g0/(1 + v0*rho_0)^2 by definition; construction recomputes the
    identity and rejects inconsistent values.
    """

    v0: float  # cm^3
    g0: float
    tau: float
    rho_0: float  # 1/cm^3, the peak density tau was evaluated at

    def __post_init__(self):
        denom = 1.0 + self.v0 * self.rho_0
        if abs(denom) <= EPS_POLE:
            raise PoleError(
                f"|1 + V0*rho_0| = {abs(denom):.3e} at the beam-splitter pole",
                density=self.rho_0,
            )
        tau_check = 2.0 * self.g0 / denom**2
        scale = max(abs(self.tau), abs(tau_check))
        if scale > 0.0 and abs(self.tau - tau_check) > 1e-15 * scale:
            raise ParameterError(
                f"inconsistent tau: got {self.tau!r}, identity gives {tau_check!r}"
            )


def characteristic_volume(params: PhysicalParams) -> float:
    """Characteristic volume V0 = (4*pi/3)(d^2/(hbar*Delta)), cm^3.

    Density effects on the light-atom coupling become significant when
    V0*rho ~ 1. Odd in the detuning: sign(V0) = sign(Delta).
    """
    delta = detuning(params)
    if delta == 0.0:
        raise SingularDetuningError("characteristic volume undefined at zero detuning")
    return (4.0 * math.pi / 3.0) * params.dipole**2 / (HBAR * delta)


def _guard_denominator(denom, density, label: str) -> None:
    # Works for scalars and arrays; reports the density closest to the pole.
    mag = np.abs(denom)
    amin = float(np.min(mag))
    if amin <= EPS_POLE:
        rho = np.broadcast_to(np.asarray(density, dtype=float), np.shape(mag))
        at = float(rho.reshape(-1)[int(np.argmin(mag))]) if rho.size else None
        raise PoleError(f"{label} pole: |denominator| = {amin:.3e}", density=at)


def effective_potential(kind: ModelKind, rabi_sq, density, params: PhysicalParams):
    """Effective dipole potential (erg) for `kind` at |Omega|^2 = rabi_sq.

    FULL                  hbar |O|^2 / (4 Delta (1 + V0 rho)^2)
    SINGLE_PARTICLE       hbar |O|^2 / (4 Delta)
    GROSS_PITAEVSKII_TYPE (|O|^2/Delta)(hbar/4 - (2 pi/3)(d^2/Delta) rho)
    WALLIS_TYPE           (hbar/4)|O|^2 / (Delta (1 - (8 pi/3) alpha rho))

    rabi_sq (rad^2/s^2) and density (1/cm^3) may be scalars or numpy
    arrays (broadcast together). Exactly linear in rabi_sq for every
    kind. The two screened kinds error at their denominator poles
    (reachable for Delta < 0).
    """
    delta = detuning(params)
    if delta == 0.0:
        raise SingularDetuningError("effective potential undefined at zero detuning")
    scalar_in = np.ndim(rabi_sq) == 0 and np.ndim(density) == 0
    rabi = np.asarray(rabi_sq, dtype=float)
    rho = np.asarray(density, dtype=float)

    if kind is ModelKind.SINGLE_PARTICLE:
        out = HBAR * rabi / (4.0 * delta)
    elif kind is ModelKind.FULL:
        v0 = characteristic_volume(params)
        denom = 1.0 + v0 * rho
        _guard_denominator(denom, rho, "full-model")
        out = HBAR * rabi / (4.0 * delta * denom**2)
    elif kind is ModelKind.GROSS_PITAEVSKII_TYPE:
        out = (rabi / delta) * (
            HBAR / 4.0 - (2.0 * math.pi / 3.0) * (params.dipole**2 / delta) * rho
        )
    elif kind is ModelKind.WALLIS_TYPE:
        alpha = polarizability(params)
        denom = 1.0 - (8.0 * math.pi / 3.0) * alpha * rho
        _guard_denominator(denom, rho, "screened-model")
        out = (HBAR / 4.0) * rabi / (delta * denom)
    else:
        raise ParameterError(f"unknown model kind {kind!r}")

    return float(out) if scalar_in else out


def raman_nath_params(params: PhysicalParams) -> RamanNathParams:
    """Scalar parameters of the standing-wave beam splitter.

    g0 = Omega_0^2 w_L sqrt(pi) / (16 Delta v_g) is the zero-density
    accumulated phase scale; tau = 2 g0 / (1 + V0 rho_0)^2 is the
    Bessel-series argument at peak density.
    """
    delta = detuning(params)
    if delta == 0.0:
        raise SingularDetuningError("beam-splitter parameters undefined at zero detuning")
    v0 = characteristic_volume(params)
    denom = 1.0 + v0 * params.rho_0
    if abs(denom) <= EPS_POLE:
        raise PoleError(
            f"|1 + V0*rho_0| = {abs(denom):.3e} at the beam-splitter pole",
            density=params.rho_0,
        )
    g0 = params.rabi_peak**2 * params.w_l * math.sqrt(math.pi) / (16.0 * delta * params.v_g)
    tau = 2.0 * g0 / denom**2
    return RamanNathParams(v0=v0, g0=g0, tau=tau, rho_0=params.rho_0)


@dataclass(frozen=True)
class SignificantDensity:
    """Density scales at which dipole-dipole effects become significant.

    exact: 1/|V0|, the density where V0*rho = 1.
    scaling: the order-of-magnitude estimate (|Delta|/gamma) k_l^3/pi;
             None when gamma = 0 (estimate undefined).
    """

    exact: float
    scaling: float | None


def significant_density(params: PhysicalParams) -> SignificantDensity:
    v0 = characteristic_volume(params)
    exact = 1.0 / abs(v0)
    if params.gamma == 0.0:
        return SignificantDensity(exact=exact, scaling=None)
    scaling = (abs(detuning(params)) / params.gamma) * params.k_l**3 / math.pi
    return SignificantDensity(exact=exact, scaling=scaling)
