"""Split-step spectral evolution of the 1D mean-field matter wave.

Evolves i hbar dpsi/dt = [-hbar^2 d^2/dy^2 / 2m + V(|psi|^2, y, t)] psi
on a periodic grid with second-order Strang splitting: half a potential
phase at the step's start time, the full kinetic phase in spectral
space, half a potential phase at the end time. Evaluating the potential
halves at the interval endpoints makes the accumulated phase of a
kinetic-free run exactly the trapezoid quadrature of the drive along z.

With the kinetic term disabled the spectral stage is skipped entirely,
so the field modulus is frozen to roundoff: the beam-splitter regime in
which the atoms only collect a position-dependent phase.

The 3D density seen by the potential is |psi|^2 / transverse_area; an
infinite transverse_area is the dilute-tracer convention (exactly zero
density, finite field).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import ConfigurationError, NumericsError, ParameterError, PhysicsGuardError
from .models import ModelKind, effective_potential
from .optics import adiabatically_valid
from .serialize import csv_num
from .units import HBAR, PhysicalParams

logger = logging.getLogger(__name__)

# Non-finite values are scanned for every this many steps, not every
# step; a full scan per step would double the cost of cheap phase steps.
_FINITE_CHECK_INTERVAL = 64


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic 1D grid; point n_points wraps back to point 0."""

    n_points: int
    y_min: float
    y_max: float

    def __post_init__(self):
        n = self.n_points
        if n < 16 or (n & (n - 1)) != 0:
            raise ConfigurationError(
                f"n_points must be a power of two >= 16, got {n}"
            )
        if not (math.isfinite(self.y_min) and math.isfinite(self.y_max)):
            raise ConfigurationError("grid bounds must be finite")
        if self.y_max <= self.y_min:
            raise ConfigurationError(
                f"y_max must exceed y_min, got [{self.y_min}, {self.y_max}]"
            )

    @property
    def spacing(self) -> float:
        return (self.y_max - self.y_min) / self.n_points

    @property
    def length(self) -> float:
        return self.y_max - self.y_min

    def points(self) -> np.ndarray:
        return self.y_min + self.spacing * np.arange(self.n_points)

    def wavenumbers(self) -> np.ndarray:
        """Angular spatial frequencies of the spectral modes, 1/cm."""
        return 2.0 * math.pi * np.fft.fftfreq(self.n_points, d=self.spacing)


@dataclass
class WaveState:
    """Complex field amplitude psi sampled on a grid, units cm^(-1/2)."""

    grid: Grid1D
    amplitude: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=np.complex128)
        if amp.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"amplitude length {amp.shape} does not match grid "
                f"({self.grid.n_points} points)"
            )
        if not amp.any():
            raise ConfigurationError("field is identically zero (norm must be positive)")
        self.amplitude = amp

    def density(self, transverse_area: float) -> np.ndarray:
        """3D density profile |psi|^2 / transverse_area, 1/cm^3."""
        return np.abs(self.amplitude) ** 2 / transverse_area


@dataclass(frozen=True)
class PropagationConfig:
    """Time-stepping configuration.

    dt may be None when the run is driven by propagate_through_laser,
    which derives the step from its z-window; raw step() needs it set.
    laser_profile maps (y array, z) -> |Omega|^2 (rad^2/s^2); None means
    no laser (zero potential).
    """

    dt: float | None
    n_steps: int
    kinetic_enabled: bool = True
    model: ModelKind = ModelKind.FULL
    laser_profile: Callable[[np.ndarray, float], np.ndarray] | None = None
    transverse_area: float = 1.0
    enforce_adiabatic: bool = True

    def __post_init__(self):
        if self.dt is not None and not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigurationError(f"dt must be positive and finite, got {self.dt!r}")
        if self.n_steps < 1:
            raise ConfigurationError(f"n_steps must be >= 1, got {self.n_steps}")
        if not self.transverse_area > 0.0:  # inf is allowed, NaN/<=0 is not
            raise ConfigurationError(
                f"transverse_area must be positive, got {self.transverse_area!r}"
            )


def standing_wave_intensity(params: PhysicalParams) -> Callable[[np.ndarray, float], np.ndarray]:
    """|Omega(y, z)|^2 of the Gaussian-envelope standing wave.

    |Omega|^2 = Omega_0^2 exp(-z^2/w_L^2) cos^2(n k_L y).
    """
    omega0_sq = params.rabi_peak**2
    inv_wl_sq = 1.0 / params.w_l**2
    nk = params.harmonic * params.k_l

    def profile(y: np.ndarray, z: float) -> np.ndarray:
        return omega0_sq * math.exp(-(z * z) * inv_wl_sq) * np.cos(nk * y) ** 2

    return profile


def init_gaussian(
    grid: Grid1D, rho0: float, w_y: float, transverse_area: float
) -> WaveState:
    """Zero-phase Gaussian packet with |psi(y)|^2/transverse_area = rho0 e^{-y^2/w_y^2}.

    The packet must satisfy w_y < grid.length/6 so its tails are
    negligible at the periodic boundary. An infinite transverse_area
    encodes the dilute-tracer convention and requires rho0 = 0; the
    envelope then has unit peak amplitude.
    """
    if w_y <= 0.0:
        raise ConfigurationError(f"w_y must be positive, got {w_y!r}")
    if not w_y < grid.length / 6.0:
        raise ConfigurationError(
            f"packet too wide for the grid: w_y = {w_y!r} but the grid "
            f"spans {grid.length!r}; need w_y < length/6"
        )
    y = grid.points()
    envelope = np.exp(-(y * y) / (2.0 * w_y * w_y))
    if math.isinf(transverse_area):
        if rho0 != 0.0:
            raise ConfigurationError(
                "infinite transverse_area is the zero-density tracer "
                f"convention and requires rho0 = 0, got {rho0!r}"
            )
        peak = 1.0
    else:
        if not transverse_area > 0.0:
            raise ConfigurationError(
                f"transverse_area must be positive, got {transverse_area!r}"
            )
        if rho0 <= 0.0:
            raise ConfigurationError(
                "rho0 must be positive for a finite transverse area "
                "(a zero field has no norm); use transverse_area = inf "
                "for the zero-density tracer"
            )
        peak = math.sqrt(rho0 * transverse_area)
    return WaveState(grid=grid, amplitude=peak * envelope, time=0.0)


def norm(state: WaveState) -> float:
    """Trapezoidal integral of |psi|^2 dy on the periodic grid."""
    return float(np.sum(np.abs(state.amplitude) ** 2)) * state.grid.spacing


def _rabi_sq(config: PropagationConfig, y: np.ndarray, z: float):
    if config.laser_profile is None:
        return 0.0
    return config.laser_profile(y, z)


def _half_potential_phase(
    psi: np.ndarray,
    y: np.ndarray,
    z: float,
    dt: float,
    config: PropagationConfig,
    params: PhysicalParams,
) -> np.ndarray:
    rabi_sq = _rabi_sq(config, y, z)
    if np.ndim(rabi_sq) == 0 and float(rabi_sq) == 0.0:
        return psi  # no laser: free phase of zero
    density = np.abs(psi) ** 2 / config.transverse_area
    v_over_hbar = effective_potential(config.model, rabi_sq, density, params) / HBAR
    return psi * np.exp(-0.5j * dt * v_over_hbar)


def step(state: WaveState, config: PropagationConfig, params: PhysicalParams) -> WaveState:
    """One Strang step: half potential, kinetic, half potential.

    Potential halves use the laser at the interval's two endpoint times
    and the instantaneous |psi|^2; the kinetic phase is exact in the
    spectral basis and skipped entirely when kinetic_enabled is false.
    """
    if config.dt is None:
        raise ConfigurationError("config.dt must be set for raw stepping")
    dt = config.dt
    y = state.grid.points()
    t0 = state.time
    t1 = t0 + dt

    if config.enforce_adiabatic and params.gamma > 0.0:
        peak_density = float(np.max(np.abs(state.amplitude) ** 2)) / config.transverse_area
        if not adiabatically_valid(params, peak_density):
            raise PhysicsGuardError(
                "adiabatic elimination invalid at peak density "
                f"{peak_density:.3e}; pass enforce_adiabatic=False to override"
            )

    psi = _half_potential_phase(state.amplitude, y, params.v_g * t0, dt, config, params)
    if config.kinetic_enabled:
        k = state.grid.wavenumbers()
        kinetic_phase = np.exp(-0.5j * HBAR * dt / params.mass * k * k)
        psi = np.fft.ifft(np.fft.fft(psi) * kinetic_phase)
    psi = _half_potential_phase(psi, y, params.v_g * t1, dt, config, params)
    return WaveState(grid=state.grid, amplitude=psi, time=t1)


def propagate_through_laser(
    state: WaveState,
    config: PropagationConfig,
    params: PhysicalParams,
    observer: Callable[[int, WaveState], None] | None = None,
) -> WaveState:
    """Carry the state through the laser region z in [-4 w_L, +4 w_L].

    Time is the longitudinal coordinate: t = z/v_g. Uniform z-steps,
    count taken from config.n_steps; the window truncates the Gaussian
    envelope integral below 1e-7 of its value. `observer` is called
    with (step_index, state) after every step. Returns the far-zone
    state with its clock advanced by the crossing duration.
    """
    z_half = 4.0 * params.w_l
    duration = 2.0 * z_half / params.v_g
    dt = duration / config.n_steps
    profile = config.laser_profile
    if profile is None:
        profile = standing_wave_intensity(params)
    run_config = replace(config, dt=dt, laser_profile=profile)

    t_entry = -z_half / params.v_g
    working = WaveState(grid=state.grid, amplitude=state.amplitude, time=t_entry)
    for i in range(config.n_steps):
        working = step(working, run_config, params)
        if (i + 1) % _FINITE_CHECK_INTERVAL == 0 or i + 1 == config.n_steps:
            if not np.all(np.isfinite(working.amplitude.view(np.float64))):
                raise NumericsError(
                    f"non-finite amplitude after step {i + 1} "
                    f"(t = {working.time!r} s, z = {params.v_g * working.time!r} cm)",
                    step=i + 1,
                    time=working.time,
                )
        if observer is not None:
            observer(i + 1, working)
    logger.debug("crossed laser region in %d steps, dt = %.3e s", config.n_steps, dt)
    return WaveState(
        grid=working.grid, amplitude=working.amplitude, time=state.time + duration
    )


def momentum_spectrum(state: WaveState, k_unit: float, q_max: int):
    """Diffraction-order probabilities from the spectral power.

    Every spectral mode is assigned to its nearest multiple of k_unit
    (windows of +-k_unit/2); window powers are normalized by the total
    power so the sum over all orders is 1. Returns orders |q| <= q_max.

    k_unit must align with the discrete modes: k_unit * length / (2 pi)
    must be an integer M >= 1, and (q_max + 1/2) M must fit inside the
    Nyquist range.
    """
    from .diffraction import DiffractionPattern  # deferred: avoids an import cycle

    if q_max < 0:
        raise ConfigurationError(f"q_max must be nonnegative, got {q_max}")
    if not (k_unit > 0.0 and math.isfinite(k_unit)):
        raise ConfigurationError(f"k_unit must be positive and finite, got {k_unit!r}")
    n = state.grid.n_points
    length = state.grid.length
    m_exact = k_unit * length / (2.0 * math.pi)
    m = round(m_exact)
    if m < 1 or abs(m_exact - m) > 1e-9 * max(1.0, m_exact):
        suggested = max(1, round(m_exact)) * 2.0 * math.pi / k_unit
        raise ConfigurationError(
            "grid is incommensurate with the order spacing: k_unit*length/(2 pi) "
            f"= {m_exact!r} must be an integer; nearest compatible length = "
            f"{suggested!r} cm"
        )
    if (q_max + 0.5) * m > n / 2:
        q_fit = int((n / 2) / m - 0.5)
        raise ConfigurationError(
            f"q_max = {q_max} does not fit in the spectral range: "
            f"(q_max + 1/2)*{m} must be <= {n // 2}; this grid supports "
            f"q_max <= {q_fit} (use more grid points for more orders)"
        )

    power = np.abs(np.fft.fft(state.amplitude)) ** 2
    total = float(np.sum(power))
    if total <= 0.0:
        raise ParameterError("zero field has no momentum spectrum")
    signed_index = np.fft.fftfreq(n, d=1.0 / n)  # 0, 1, ..., -n/2, ..., -1
    assignment = np.floor(signed_index / m + 0.5).astype(int)
    q_lo = int(assignment.min())
    sums = np.bincount(assignment - q_lo, weights=power)
    orders = {}
    for q in range(-q_max, q_max + 1):
        idx = q - q_lo
        orders[q] = float(sums[idx]) / total if 0 <= idx < len(sums) else 0.0
    return DiffractionPattern(orders=orders, angles={}, tau=None)


def write_state_csv(state: WaveState, transverse_area: float, fh) -> None:
    """Snapshot columns: y_cm, re_psi, im_psi, density."""
    y = state.grid.points()
    dens = state.density(transverse_area)
    fh.write("y_cm,re_psi,im_psi,density\n")
    for i in range(state.grid.n_points):
        fh.write(
            f"{csv_num(y[i])},{csv_num(state.amplitude[i].real)},"
            f"{csv_num(state.amplitude[i].imag)},{csv_num(dens[i])}\n"
        )
