"""Shared fixtures and parameter builders for the test suite.

The reference atom is sodium-like and lives in CGS; tests that need a
specific dimensionless operating point (phase scale g0, density knob
V0*rho_0, packet width in effective wavelengths) retune from it instead
of hardcoding dimensional values.
"""

from __future__ import annotations

import math
from dataclasses import replace

import pytest
from hypothesis import HealthCheck, settings

from matteroptics import (
    PhysicalParams,
    characteristic_volume,
    detuning,
    effective_wavelength,
    params_to_system,
)

settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")


_BASE = dict(
    mass=3.8175e-23,  # g
    dipole=6.2956e-18,  # statC*cm
    omega_a=3.198e15,  # rad/s
    gamma=6.1e7,  # rad/s
    scattering_length=2.75e-7,  # cm
    omega_l=3.198e15 + 2.0 * math.pi * 1.0e9,  # blue-detuned by 2 pi GHz
    rabi_peak=7.5311e7,  # rad/s
    k_l=1.0667e5,  # 1/cm
    harmonic=1.0,
    w_l=2.0e-3,  # cm
    v_g=100.0,  # cm/s
    rho_0=0.0,  # 1/cm^3
    w_y=2.9452e-3,  # cm, about 50 effective wavelengths
    delta_shift=0.0,
)


def make_params(**overrides) -> PhysicalParams:
    vals = dict(_BASE)
    vals.update(overrides)
    return PhysicalParams(**vals)


def red_detuned(params: PhysicalParams) -> PhysicalParams:
    """Same atom driven 2 pi GHz below resonance."""
    return replace(params, omega_l=params.omega_a - 2.0 * math.pi * 1.0e9)


def with_g0(params: PhysicalParams, g0: float) -> PhysicalParams:
    """Retune rabi_peak so the accumulated-phase scale is exactly g0.

    g0 carries the sign of the detuning; asking for the wrong sign is a
    test bug, not a physics case.
    """
    delta = detuning(params)
    if g0 * delta < 0.0:
        raise ValueError("g0 must carry the sign of the detuning")
    rabi = math.sqrt(
        abs(g0) * 16.0 * abs(delta) * params.v_g / (params.w_l * math.sqrt(math.pi))
    )
    return replace(params, rabi_peak=rabi)


def with_v0rho(params: PhysicalParams, x: float) -> PhysicalParams:
    """Set rho_0 so V0*rho_0 equals x (x must share the detuning's sign)."""
    rho = x / characteristic_volume(params)
    if rho < 0.0:
        raise ValueError("requested V0*rho_0 has the wrong sign for this detuning")
    return replace(params, rho_0=rho)


def with_wy_lambdas(params: PhysicalParams, n_lambdas: float) -> PhysicalParams:
    """Set the packet width to an exact number of effective wavelengths."""
    return replace(params, w_y=n_lambdas * effective_wavelength(params))


def params_file_text(params: PhysicalParams, units: str = "cgs") -> str:
    vals = params_to_system(params, units)
    lines = [f"units = {units}"]
    lines.extend(f"{k} = {format(v, '.17g')}" for k, v in vals.items())
    return "\n".join(lines) + "\n"


@pytest.fixture()
def base_params() -> PhysicalParams:
    return make_params()


@pytest.fixture()
def params_file(tmp_path):
    """Path of a CGS parameter file for the reference point."""
    path = tmp_path / "ref.params"
    path.write_text(params_file_text(make_params(), "cgs"), encoding="utf-8")
    return str(path)


@pytest.fixture()
def si_params_file(tmp_path):
    path = tmp_path / "ref_si.params"
    path.write_text(params_file_text(make_params(), "si"), encoding="utf-8")
    return str(path)
