"""Internal unit system, physical constants, and parameter handling.

All internal computation uses Gaussian-CGS units: every 4*pi factor in the
local-field and Clausius-Mossotti formulas is written in Gaussian
conventions, and porting them to SI invites silent 4*pi*eps0 mistakes.
SI values are accepted at the boundary (parameter files, CLI) and
converted exactly once, here.

Internal units by dimension:
    length      cm
    mass        g
    time        s
    frequency   rad/s
    wavenumber  1/cm
    density     1/cm^3
    velocity    cm/s
    dipole      statC*cm
    energy      erg
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import ParameterError, UnitError

# CODATA 2018 exact-definition constants, Gaussian-CGS.
HBAR = 1.054571817e-27  # erg*s
C_LIGHT = 2.99792458e10  # cm/s

# 1 C*m of dipole moment in statC*cm (exact: 10*c with c in m/s... the
# Gaussian charge unit gives 1 C = 2.99792458e9 statC, 1 m = 100 cm).
_DIPOLE_SI_TO_CGS = 2.99792458e11


# Unit tags: tag -> (dimension, factor to the internal CGS unit).
# The table is exact by definition of the units; round trips are
# identity to relative 1e-15 because each conversion is one multiply.
_UNIT_TABLE: dict[str, tuple[str, float]] = {
    # length -> cm
    "cm": ("length", 1.0),
    "m": ("length", 1.0e2),
    "mm": ("length", 1.0e-1),
    "um": ("length", 1.0e-4),
    "nm": ("length", 1.0e-7),
    # frequency (angular) -> rad/s
    "rad/s": ("frequency", 1.0),
    # wavenumber -> 1/cm
    "1/cm": ("wavenumber", 1.0),
    "1/m": ("wavenumber", 1.0e-2),
    "1/nm": ("wavenumber", 1.0e7),
    # density -> 1/cm^3
    "1/cm^3": ("density", 1.0),
    "1/m^3": ("density", 1.0e-6),
    # mass -> g
    "g": ("mass", 1.0),
    "kg": ("mass", 1.0e3),
    # velocity -> cm/s
    "cm/s": ("velocity", 1.0),
    "m/s": ("velocity", 1.0e2),
    # dipole moment -> statC*cm
    "statC*cm": ("dipole", 1.0),
    "C*m": ("dipole", _DIPOLE_SI_TO_CGS),
    # time -> s
    "s": ("time", 1.0),
    # energy -> erg
    "erg": ("energy", 1.0),
    "J": ("energy", 1.0e7),
}


def convert_units(value: float, from_tag: str, to_tag: str) -> float:
    """Convert `value` between two unit tags of the same dimension.

    Raises UnitError naming both tags on a dimension mismatch or an
    unknown tag.
    """
    try:
        dim_from, f_from = _UNIT_TABLE[from_tag]
    except KeyError:
        raise UnitError(f"unknown unit tag '{from_tag}'") from None
    try:
        dim_to, f_to = _UNIT_TABLE[to_tag]
    except KeyError:
        raise UnitError(f"unknown unit tag '{to_tag}'") from None
    if dim_from != dim_to:
        raise UnitError(
            f"cannot convert '{from_tag}' ({dim_from}) to '{to_tag}' ({dim_to})"
        )
    if f_from == f_to:
        return value  # identity conversions are exact
    return value * (f_from / f_to)


# PhysicalParams field -> physical dimension, used to convert whole
# parameter sets between SI and CGS at the file boundary.
_FIELD_DIMENSION: dict[str, str] = {
    "mass": "mass",
    "dipole": "dipole",
    "omega_a": "frequency",
    "gamma": "frequency",
    "scattering_length": "length",
    "omega_l": "frequency",
    "rabi_peak": "frequency",
    "k_l": "wavenumber",
    "harmonic": "dimensionless",
    "w_l": "length",
    "v_g": "velocity",
    "rho_0": "density",
    "w_y": "length",
    "delta_shift": "frequency",
}

# SI unit tag per dimension, for file input declared `units = si`.
_SI_TAG = {
    "mass": "kg",
    "dipole": "C*m",
    "frequency": "rad/s",
    "length": "m",
    "wavenumber": "1/m",
    "density": "1/m^3",
    "velocity": "m/s",
}

_CGS_TAG = {
    "mass": "g",
    "dipole": "statC*cm",
    "frequency": "rad/s",
    "length": "cm",
    "wavenumber": "1/cm",
    "density": "1/cm^3",
    "velocity": "cm/s",
}

# Fields that must be strictly positive; the rest of the numeric fields
# are bounded below by zero or unconstrained (delta_shift, and
# scattering_length which is validated where it is used).
_POSITIVE_FIELDS = (
    "mass",
    "dipole",
    "omega_a",
    "omega_l",
    "k_l",
    "harmonic",
    "w_l",
    "v_g",
    "w_y",
)
_NONNEGATIVE_FIELDS = ("gamma", "rabi_peak", "rho_0")


@dataclass(frozen=True)
class PhysicalParams:
    """Atom, laser, and beam constants in Gaussian-CGS internal units.

    The single source of every dimensional symbol used downstream.
    Immutable after construction and safe to share between threads.

    Fields:
        mass: atom mass, g
        dipole: transition dipole matrix element, statC*cm
        omega_a: bare atomic transition frequency, rad/s
        gamma: spontaneous emission rate, rad/s
        scattering_length: s-wave scattering length, cm
        omega_l: laser frequency, rad/s
        rabi_peak: peak Rabi frequency, rad/s
        k_l: laser wave number, 1/cm
        harmonic: effective refractive index multiplying k_l, dimensionless
        w_l: laser Gaussian envelope width, cm
        v_g: atomic-beam group velocity, cm/s
        rho_0: peak atomic density, 1/cm^3
        w_y: atomic wave-packet width, cm
        delta_shift: additional level shift entering the detuning, rad/s
    """

    mass: float
    dipole: float
    omega_a: float
    gamma: float
    scattering_length: float
    omega_l: float
    rabi_peak: float
    k_l: float
    harmonic: float
    w_l: float
    v_g: float
    rho_0: float
    w_y: float
    delta_shift: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ParameterError(f"{f.name} must be a real number, got {v!r}")
            if not math.isfinite(v):
                raise ParameterError(f"{f.name} must be finite, got {v!r}")
        for name in _POSITIVE_FIELDS:
            if getattr(self, name) <= 0.0:
                raise ParameterError(
                    f"{name} must be strictly positive, got {getattr(self, name)!r}"
                )
        for name in _NONNEGATIVE_FIELDS:
            if getattr(self, name) < 0.0:
                raise ParameterError(
                    f"{name} must be nonnegative, got {getattr(self, name)!r}"
                )


def detuning(params: PhysicalParams) -> float:
    """Laser-atom detuning omega_l - omega_a - delta_shift, rad/s.

    Sign is preserved; zero is a legal return value here and is guarded
    at the adiabatic-elimination call sites instead.
    """
    return params.omega_l - params.omega_a - params.delta_shift


def params_from_si(si_values: dict[str, float]) -> PhysicalParams:
    """Build PhysicalParams from a dict of field values given in SI units."""
    converted = {}
    for name, value in si_values.items():
        dim = _FIELD_DIMENSION.get(name)
        if dim is None:
            raise ParameterError(f"unknown parameter '{name}'")
        if dim == "dimensionless":
            converted[name] = value
        else:
            converted[name] = convert_units(value, _SI_TAG[dim], _CGS_TAG[dim])
    return PhysicalParams(**converted)


def params_to_system(params: PhysicalParams, units: str) -> dict[str, float]:
    """Express a parameter set in the declared unit system ('si' or 'cgs').

    Used to echo inputs back in reports.
    """
    if units not in ("si", "cgs"):
        raise ParameterError(f"units must be 'si' or 'cgs', got {units!r}")
    out = {}
    for f in fields(PhysicalParams):
        value = getattr(params, f.name)
        dim = _FIELD_DIMENSION[f.name]
        if units == "si" and dim != "dimensionless":
            value = convert_units(value, _CGS_TAG[dim], _SI_TAG[dim])
        out[f.name] = value
    return out


def convert_field(value: float, name: str, from_system: str, to_system: str) -> float:
    """Convert one named parameter field between the 'si' and 'cgs' systems."""
    for system in (from_system, to_system):
        if system not in ("si", "cgs"):
            raise ParameterError(f"units must be 'si' or 'cgs', got {system!r}")
    dim = _FIELD_DIMENSION.get(name)
    if dim is None:
        raise ParameterError(f"unknown parameter '{name}'")
    if dim == "dimensionless" or from_system == to_system:
        return value
    tags = {"si": _SI_TAG, "cgs": _CGS_TAG}
    return convert_units(value, tags[from_system][dim], tags[to_system][dim])


@dataclass(frozen=True)
class ParamFile:
    """A parsed parameter file: the CGS parameter set plus the declared system."""

    params: PhysicalParams
    units: str


def parse_param_file(text: str, units_override: str | None = None) -> ParamFile:
    """Parse the flat `key = value` parameter format.

    Rules: one `key = value` pair per line; blank lines and lines starting
    with '#' are ignored; a `units = si | cgs` key declares the system the
    values are written in; unknown and duplicate keys are rejected with
    their line number. `units_override`, when given, wins over the file's
    own `units` key.
    """
    raw: dict[str, float] = {}
    units: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "units":
            if units is not None:
                raise ParameterError(f"line {lineno}: duplicate key 'units'")
            if value not in ("si", "cgs"):
                raise ParameterError(
                    f"line {lineno}: units must be 'si' or 'cgs', got {value!r}"
                )
            units = value
            continue
        if key not in _FIELD_DIMENSION:
            raise ParameterError(f"line {lineno}: unknown parameter '{key}'")
        if key in raw:
            raise ParameterError(f"line {lineno}: duplicate key '{key}'")
        try:
            raw[key] = float(value)
        except ValueError:
            raise ParameterError(
                f"line {lineno}: could not parse value for '{key}': {value!r}"
            ) from None

    if units_override is not None:
        if units_override not in ("si", "cgs"):
            raise ParameterError(f"units must be 'si' or 'cgs', got {units_override!r}")
        units = units_override
    if units is None:
        raise ParameterError("missing 'units = si | cgs' declaration")

    required = set(_FIELD_DIMENSION) - {"delta_shift"}
    missing = sorted(required - set(raw))
    if missing:
        raise ParameterError(f"missing required parameters: {', '.join(missing)}")

    if units == "si":
        params = params_from_si(raw)
    else:
        params = PhysicalParams(**raw)
    return ParamFile(params=params, units=units)


def read_param_file(path: str, units_override: str | None = None) -> ParamFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_param_file(fh.read(), units_override)
