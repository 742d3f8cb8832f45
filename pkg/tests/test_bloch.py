"""Two-level dynamics: stepper accuracy, fixed point, local drive."""

import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matteroptics.bloch import (
    BlochRates,
    BlochState,
    adiabatic_excited_fraction,
    bloch_rhs,
    integrate,
    inversion_drive_term,
    local_rabi,
    steady_state,
    write_trajectory_csv,
)
from matteroptics.errors import (
    ConfigurationError,
    ParameterError,
    PoleError,
    SingularDetuningError,
    SteadyStateError,
)

from conftest import make_params, red_detuned, with_v0rho

GROUND = BlochState(coherence=0.0, inversion=-1.0)
NO_DAMPING = BlochRates(gamma_l=0.0, gamma_t=0.0)


class TestStateAndRates:
    def test_state_bounds_with_integrator_slack(self):
        BlochState(coherence=0.0, inversion=1.0009)
        with pytest.raises(ParameterError, match="inversion"):
            BlochState(coherence=0.0, inversion=1.0011)
        BlochState(coherence=0.7 + 0.7j, inversion=0.0)  # |R| ~ 0.99
        with pytest.raises(ParameterError, match="coherence"):
            BlochState(coherence=1.002, inversion=0.0)

    def test_state_must_be_finite(self):
        with pytest.raises(ParameterError, match="finite"):
            BlochState(coherence=complex(math.nan, 0.0), inversion=0.0)
        with pytest.raises(ParameterError, match="finite"):
            BlochState(coherence=0.0, inversion=math.inf)

    def test_vector_length(self):
        s = BlochState(coherence=0.3 - 0.4j, inversion=0.5)
        assert s.vector_length_sq() == pytest.approx(0.25 + 4.0 * 0.25, rel=1e-15)

    def test_rates_guards(self):
        BlochRates(gamma_l=0.0, gamma_t=0.0)
        with pytest.raises(ParameterError, match="gamma_l"):
            BlochRates(gamma_l=-1.0, gamma_t=0.0)
        with pytest.raises(ParameterError, match="gamma_t"):
            BlochRates(gamma_l=0.0, gamma_t=math.nan)


_COMPONENT = st.floats(
    min_value=-1e8, max_value=1e8, allow_nan=False, allow_infinity=False
)


@given(_COMPONENT, _COMPONENT, _COMPONENT, _COMPONENT)
def test_drive_term_forms_identical(a, b, c, d):
    # the raising/lowering form and the compact 2 Im form differ only
    # by algebra whose floating-point roundings cancel term by term,
    # so the two evaluations must agree bit for bit
    drive = complex(a, b)
    coherence = complex(c, d)
    assert inversion_drive_term(drive, coherence) == 2.0 * (
        drive.conjugate() * coherence
    ).imag


def test_rhs_matches_written_equations():
    state = BlochState(coherence=0.21 - 0.13j, inversion=-0.35)
    drive = 0.9 + 0.4j
    detuning = 1.7
    rates = BlochRates(gamma_l=0.8, gamma_t=1.3)
    dr, dw = bloch_rhs(state, drive, detuning, rates)
    r, w = state.coherence, state.inversion
    assert dr == (1j * detuning - rates.gamma_t) * r - 0.5j * drive * w
    assert dw == -rates.gamma_l * (1.0 + w) + inversion_drive_term(drive, r)


class TestIntegrateGuards:
    def test_dt_and_steps(self):
        with pytest.raises(ConfigurationError, match="dt"):
            integrate(GROUND, 0.0, 0.0, NO_DAMPING, dt=-0.01, n_steps=10)
        with pytest.raises(ConfigurationError, match="n_steps"):
            integrate(GROUND, 0.0, 0.0, NO_DAMPING, dt=0.01, n_steps=0)

    def test_unresolved_detuning_rejected_upfront(self):
        with pytest.raises(ConfigurationError, match="exceeds 0.1"):
            integrate(GROUND, 0.0, 50.0, NO_DAMPING, dt=0.01, n_steps=10)

    def test_unresolved_drive_caught_at_the_step(self):
        def pulse(t):
            return 100.0 if t > 0.045 else 0.0

        with pytest.raises(ConfigurationError, match="at step 5"):
            integrate(GROUND, pulse, 0.0, NO_DAMPING, dt=0.01, n_steps=20)

    def test_trajectory_layout(self):
        start = BlochState(coherence=0.1j, inversion=-0.9, time=2.0)
        traj = integrate(start, 0.05, 0.3, NO_DAMPING, dt=0.01, n_steps=7)
        assert len(traj) == 8
        assert traj[0] is start
        for i, s in enumerate(traj[1:], start=1):
            assert s.time == 2.0 + i * 0.01


class TestAgainstClosedForms:
    def test_undriven_relaxation(self):
        rates = BlochRates(gamma_l=1.0, gamma_t=0.3)
        start = BlochState(coherence=0.2 + 0.1j, inversion=-0.4)
        detuning = 1.0
        traj = integrate(start, 0.0, detuning, rates, dt=0.01, n_steps=500)
        for s in traj:
            w_exact = -1.0 + (1.0 + start.inversion) * math.exp(-rates.gamma_l * s.time)
            r_exact = start.coherence * np.exp((1j * detuning - rates.gamma_t) * s.time)
            assert abs(s.inversion - w_exact) < 1e-8
            assert abs(s.coherence - r_exact) < 1e-8

    def test_resonant_rabi_cycles(self):
        omega = 2.0 * math.pi
        dt = 1.0 / 128.0  # omega*dt ~ 0.049
        traj = integrate(GROUND, omega, 0.0, NO_DAMPING, dt=dt, n_steps=384)
        for s in traj:
            assert abs(s.inversion + math.cos(omega * s.time)) < 3e-6
            assert abs(s.coherence - 0.5j * math.sin(omega * s.time)) < 3e-6

    def test_undamped_length_frozen(self):
        traj = integrate(GROUND, 1.0, 0.7, NO_DAMPING, dt=0.01, n_steps=2000)
        lengths = [s.vector_length_sq() for s in traj]
        assert max(abs(l - 1.0) for l in lengths) < 1e-9

    def test_fourth_order_convergence(self):
        omega, horizon = 1.0, 2.0
        errs, dts = [], []
        for level in range(6):
            n = 20 * 2**level
            dt = horizon / n
            final = integrate(GROUND, omega, 0.0, NO_DAMPING, dt=dt, n_steps=n)[-1]
            errs.append(abs(final.inversion + math.cos(omega * horizon)))
            dts.append(dt)
        slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
        assert 3.7 < slope < 4.3


class TestSteadyState:
    RATES = BlochRates(gamma_l=0.8, gamma_t=1.3)

    def test_fixed_point_residual(self):
        ss = steady_state(0.9 + 0.4j, 0.75, self.RATES)
        dr, dw = bloch_rhs(ss, 0.9 + 0.4j, 0.75, self.RATES)
        assert abs(dr) <= 1e-12
        assert abs(dw) <= 1e-12

    def test_weak_drive_limit(self):
        drive = 1e-6 + 0.0j
        ss = steady_state(drive, 0.75, self.RATES)
        assert ss.inversion == pytest.approx(-1.0, abs=1e-9)
        linear = -0.5 * drive / complex(0.75, self.RATES.gamma_t)
        assert abs(ss.coherence - linear) < 1e-6 * abs(linear)

    def test_weak_drive_linearity(self):
        one = steady_state(1e-8 + 3e-9j, -0.4, self.RATES)
        two = steady_state(2e-8 + 6e-9j, -0.4, self.RATES)
        assert two.coherence / one.coherence == pytest.approx(2.0, rel=1e-6)
        assert two.inversion == pytest.approx(one.inversion, abs=1e-12)

    def test_requires_both_rates(self):
        with pytest.raises(SteadyStateError):
            steady_state(1.0, 0.0, BlochRates(gamma_l=0.0, gamma_t=1.0))
        with pytest.raises(SteadyStateError):
            steady_state(1.0, 0.0, BlochRates(gamma_l=1.0, gamma_t=0.0))

    def test_integration_relaxes_onto_it(self):
        drive, detuning = 1.2 - 0.5j, 0.75
        ss = steady_state(drive, detuning, self.RATES)
        final = integrate(GROUND, drive, detuning, self.RATES, dt=0.01, n_steps=4000)[-1]
        assert abs(final.coherence - ss.coherence) < 1e-8
        assert abs(final.inversion - ss.inversion) < 1e-8


class TestLocalRabi:
    def test_dilute_and_uncorrected_passthrough(self):
        p = make_params()
        assert local_rabi(0.3 + 0.4j, p, 0.0) == 0.3 + 0.4j
        assert local_rabi(0.3 + 0.4j, p, 1.0e14, corrected=False) == 0.3 + 0.4j

    def test_screening_factor(self):
        p = with_v0rho(make_params(), 0.5)
        got = local_rabi(1.0 + 0.0j, p, p.rho_0)
        assert got == pytest.approx((1.0 / 1.5) + 0.0j, rel=1e-12)

    def test_enhancement_below_resonance(self):
        p = with_v0rho(red_detuned(make_params()), -0.5)
        got = local_rabi(1.0 + 0.0j, p, p.rho_0)
        assert got == pytest.approx(2.0 + 0.0j, rel=1e-12)

    def test_pole(self):
        p = with_v0rho(red_detuned(make_params()), -1.0)
        with pytest.raises(PoleError) as err:
            local_rabi(1.0, p, p.rho_0)
        assert err.value.density == p.rho_0


class TestAdiabaticFraction:
    def test_quarter_population_at_matched_drive(self):
        p = make_params(gamma=0.0)
        delta = p.omega_l - p.omega_a
        assert adiabatic_excited_fraction(delta, p, 0.0) == pytest.approx(0.25, rel=1e-12)

    def test_linewidth_keeps_it_finite_on_resonance(self):
        p = make_params(omega_l=3.198e15, omega_a=3.198e15)
        got = adiabatic_excited_fraction(p.gamma, p, 0.0)
        assert got == pytest.approx(1.0, rel=1e-12)  # |Omega/(2*gamma/2)|^2

    def test_singular_when_detuning_and_linewidth_vanish(self):
        p = make_params(omega_l=3.198e15, omega_a=3.198e15, gamma=0.0)
        with pytest.raises(SingularDetuningError):
            adiabatic_excited_fraction(1.0, p, 0.0)


def test_trajectory_csv_layout():
    traj = integrate(GROUND, 0.5, 0.0, NO_DAMPING, dt=0.01, n_steps=3)
    buf = io.StringIO()
    write_trajectory_csv(traj, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t_s,re_R,im_R,W"
    assert len(lines) == 5
    assert lines[1] == "0,0,0,-1"
    assert all(len(ln.split(",")) == 4 for ln in lines)
