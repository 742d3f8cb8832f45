"""Density-dependent optical response of the gas.

Local-field physics in Gaussian-CGS form: the field acting on one atom
inside the medium is E_loc = E_mac + (4*pi/3) P, which resums into the
Lorentz-Lorenz susceptibility chi = alpha*rho / (1 - (4*pi/3) alpha*rho)
and the Clausius-Mossotti refractive index
n^2 = (1 + (8*pi/3) alpha*rho) / (1 - (4*pi/3) alpha*rho).

Every function takes density as an explicit argument so it can be mapped
over spatial density profiles. All functions are pure: same inputs give
bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError, PoleError, SingularDetuningError
from .units import HBAR, C_LIGHT, PhysicalParams, detuning

# Guard distance on medium-response denominators. The natural scale of
# each denominator is 1 (its zero-density value), so the absolute and
# relative guards coincide. Evaluation closer to a pole than this errors
# instead of returning a huge value that downstream formulas would amplify.
EPS_POLE = 1e-12


@dataclass(frozen=True)
class MediumResponse:
    """Optics bundle (alpha, chi, n^2, local detuning) at one density."""

    alpha: float  # cm^3
    chi: float
    n_squared: float
    local_detuning: float  # rad/s
    density: float  # 1/cm^3

    def __post_init__(self):
        if self.density < 0.0:
            raise ParameterError(f"density must be nonnegative, got {self.density!r}")
        if not (math.isfinite(self.chi) and math.isfinite(self.n_squared)):
            raise ParameterError("chi and n_squared must be finite")


def polarizability(params: PhysicalParams) -> float:
    """Linear atomic polarizability alpha = -d^2/(hbar*Delta), cm^3.

    Negative for blue detuning (Delta > 0), positive for red.
    """
    delta = detuning(params)
    if delta == 0.0:
        raise SingularDetuningError("polarizability undefined at zero detuning")
    return -params.dipole**2 / (HBAR * delta)


def susceptibility(alpha: float, density: float) -> float:
    """Lorentz-Lorenz susceptibility chi = alpha*rho / (1 - (4*pi/3) alpha*rho)."""
    if density == 0.0:
        return 0.0  # not -0.0, which alpha*density would give for alpha < 0
    x = (4.0 * math.pi / 3.0) * alpha * density
    denom = 1.0 - x
    if abs(denom) <= EPS_POLE:
        raise PoleError(
            f"Clausius-Mossotti pole: |1 - (4*pi/3) alpha rho| = {abs(denom):.3e}",
            density=density,
        )
    return alpha * density / denom


def refractive_index_sq(alpha: float, density: float) -> float:
    """Clausius-Mossotti n^2 = (1 + (8*pi/3) a*r) / (1 - (4*pi/3) a*r).

    Satisfies n^2 = 1 + 4*pi*chi to relative 1e-12 wherever both are
    defined, and n^2 = 1 exactly at zero density.
    """
    x = (4.0 * math.pi / 3.0) * alpha * density
    denom = 1.0 - x
    if abs(denom) <= EPS_POLE:
        raise PoleError(
            f"Clausius-Mossotti pole: |1 - (4*pi/3) alpha rho| = {abs(denom):.3e}",
            density=density,
        )
    return (1.0 + 2.0 * x) / denom


def local_detuning(params: PhysicalParams, density: float) -> float:
    """Density-shifted detuning Delta_l = Delta + (4*pi/3)(d^2/hbar) rho, rad/s.

    The shift is linear in rho with positive slope; equivalently
    Delta * (1 + V0*rho) with V0 the characteristic volume.
    """
    return detuning(params) + (4.0 * math.pi / 3.0) * params.dipole**2 * density / HBAR


def local_field(e_mac: complex, polarization: complex) -> complex:
    """Lorentz-Lorenz local field E_loc = E_mac + (4*pi/3) P."""
    return e_mac + (4.0 * math.pi / 3.0) * polarization


def polarization(chi: float, e_mac: complex) -> complex:
    """Positive-frequency polarization amplitude P+ = chi * E_mac+."""
    return chi * e_mac


def medium_response(params: PhysicalParams, density: float) -> MediumResponse:
    """Evaluate the full optics bundle at one density."""
    alpha = polarizability(params)
    return MediumResponse(
        alpha=alpha,
        chi=susceptibility(alpha, density),
        n_squared=refractive_index_sq(alpha, density),
        local_detuning=local_detuning(params, density),
        density=density,
    )


def contact_interaction_bound(saturation: float, params: PhysicalParams) -> float:
    """Lower bound (3/8) s / (a_s * k_a) on the dipole-to-collision energy ratio.

    s is the saturation |Omega/Delta|^2 of the transition and k_a = omega_a/c.
    A large bound means ground-state collisions are negligible next to the
    light-induced dipole-dipole interaction.
    """
    if saturation <= 0.0:
        raise ParameterError(f"saturation must be positive, got {saturation!r}")
    if params.scattering_length <= 0.0:
        raise ParameterError(
            f"scattering_length must be positive here, got {params.scattering_length!r}"
        )
    k_a = params.omega_a / C_LIGHT
    return 0.375 * saturation / (params.scattering_length * k_a)


def collisions_negligible(
    saturation: float, params: PhysicalParams, threshold: float = 10.0
) -> bool:
    """True when the contact-interaction bound exceeds `threshold`."""
    return contact_interaction_bound(saturation, params) > threshold


def adiabatic_validity(params: PhysicalParams, density: float) -> float:
    """Ratio |Delta_l| / gamma; infinite in the coherent limit gamma = 0."""
    dl = abs(local_detuning(params, density))
    if params.gamma == 0.0:
        return math.inf
    return dl / params.gamma


def adiabatically_valid(
    params: PhysicalParams, density: float, threshold: float = 10.0
) -> bool:
    """True when the local detuning dominates spontaneous emission.

    The threshold is a reported convention, not a hard physics constant.
    """
    return adiabatic_validity(params, density) > threshold
