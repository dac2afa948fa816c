import math

import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from deltapulse import checks
from deltapulse.energy import (
    density_csv,
    density_grid,
    mode_density_from_amplitude,
    pulse_density,
    pulse_mode_density,
    quasistatic_mode_energy_change,
    quasistatic_total,
    static_density_continuum,
    static_mode_density,
    static_regularized_leading,
    static_regularized_mode_density,
    static_total_energy,
    step_mode_energy_change,
    step_mode_energy_change_exact,
)
from deltapulse.modes import c_static, c_step, mode_amplitude, quantized_frequencies
from deltapulse.potential import PotentialProfile, lambda_at

RATIONAL = PotentialProfile.rational(1.0, 2.0)


# static sector

def test_static_mode_density_free_field():
    L = 50.0
    assert static_mode_density(3.0, 0.0, 2 / L) == pytest.approx(3.0 / (2 * L))


def test_static_density_identity():
    rng = np.random.default_rng(11)
    for _ in range(20):
        w, lam0 = rng.uniform(0.05, 20), rng.uniform(0.05, 5)
        b0 = lam0 / (1j * w - lam0)
        assert abs(1 + 2 * b0.real + 2 * abs(b0) ** 2 - 1) <= 1e-14


def test_static_regularized_density():
    free = quantized_frequencies(0.0, 100.0, 4)
    assert all(static_regularized_mode_density(n, free) == 0.0 for n in range(5))
    L = 1e4
    spec = quantized_frequencies(1.0, L, 2)
    exact = static_regularized_mode_density(0, spec)
    leading = static_regularized_leading(spec.omega0[0], 1.0, L)
    assert abs(exact - leading) / abs(leading) <= 10 / L
    doubled = static_regularized_mode_density(0, quantized_frequencies(1.0, 2 * L, 2))
    assert exact / doubled == pytest.approx(4.0, rel=1e-3)


def test_static_continuum():
    assert static_density_continuum(0.0) == 0.0
    assert static_density_continuum(1.0, 1e4) == pytest.approx(1 / (2 * math.pi), rel=1e-3)
    # finite-cutoff closed form from integrating the arcsin term by parts
    for lam0, cut in ((1.0, 10.0), (2.5, 40.0)):
        closed = cut * math.asin(lam0 / math.hypot(lam0, cut)) / (2 * math.pi)
        assert static_density_continuum(lam0, cut) == pytest.approx(closed, rel=1e-10)
    w = 1.0
    assert math.asin(1 / math.sqrt(2)) - 0.5 == pytest.approx(math.pi / 4 - 0.5, abs=1e-15)
    assert math.atan2(1.0, w) - w / 2 == pytest.approx(0.28539816, abs=1e-8)


def test_static_total_energy():
    assert static_total_energy(0.0) == 0.0
    assert static_total_energy(1.0) == pytest.approx(0.159155, abs=5e-7)
    assert static_total_energy(2.0) == pytest.approx(0.318310, abs=5e-7)


# pulse densities

def test_pulse_mode_density_zero_outside_switch():
    w = np.linspace(0.1, 30, 7)
    assert np.all(pulse_mode_density(w, RATIONAL.T + 0.01, RATIONAL) == 0.0)
    assert np.all(pulse_mode_density(w, -0.2, RATIONAL) == 0.0)
    assert pulse_mode_density(0.0, 0.2, RATIONAL) == 0.0


def test_static_amplitude_cancels_density():
    rng = np.random.default_rng(5)
    for _ in range(20):
        w, lam0 = rng.uniform(0.1, 10), rng.uniform(0.1, 3)
        assert abs(mode_density_from_amplitude(w, lam0, c_static(w, lam0))) <= 1e-14


def test_density_is_real():
    c = mode_amplitude(2.0, RATIONAL, 0.2)
    lam = lambda_at(RATIONAL, 0.2)
    raw = (-1j * 2.0 * lam * (c - np.conj(c)) + 2 * lam**2 * abs(c) ** 2) / (4 * math.pi * 2.0)
    assert abs(raw.imag) <= 1e-14
    assert raw.real == pytest.approx(mode_density_from_amplitude(2.0, lam, c), rel=1e-14)


def test_pulse_mode_density_small_omega_limit():
    vals = [abs(pulse_mode_density(w, 0.2, RATIONAL)) for w in (1e-2, 1e-3, 1e-4)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-3


def test_pulse_density_shell():
    assert pulse_density(0.1, 0.3, RATIONAL).value < 0
    assert pulse_density(0.5, 0.3, RATIONAL).value == 0.0
    assert pulse_density(0.1, 0.7, RATIONAL).value == 0.0
    assert pulse_density(-0.37, 0.6, RATIONAL).value == pulse_density(0.37, 0.6, RATIONAL).value


@pytest.mark.parametrize("f2,lam0", checks.TABLE_PROFILES)
def test_pointwise_sign_in_shell(f2, lam0):
    """Only the shell average is claimed negative; report the pointwise picture."""
    p = PotentialProfile.rational(lam0, f2)
    us = np.linspace(0.0, p.T, 41)[1:-1]
    vals = np.array([pulse_density(0.0, u, p).value for u in us])
    frac = np.mean(vals < 0)
    print(f"f2={f2} lambda0={lam0}: negative at {frac:.0%} of shell points, "
          f"range [{vals.min():.4g}, {vals.max():.4g}]")
    assert trapezoid(vals, us) < 0


def test_density_grid_and_csv():
    rows = density_grid([-1.0, 0.0, 0.75], [1.0], RATIONAL)
    assert [r.x for r in rows] == [-1.0, 0.0, 0.75]
    assert rows[1].value == 0.0 and rows[2].value < 0
    text = density_csv(rows)
    assert text.splitlines()[0] == "x,t,T00R"
    assert len(text.splitlines()) == 4


# flux identity, per mode

@pytest.mark.parametrize("w", [0.5, 1.0, 2.0])
def test_flux_identity(w):
    assert checks.check_flux_identity(w).passed


# step profile

def test_elementary_integral_before_use():
    for a, b in ((0.5, 1.0), (1.5, 3.0), (0.2, 0.9)):
        num, _ = quad(lambda w: w / ((w**2 + a**2) * (w**2 + b**2)), 0, np.inf, epsabs=1e-14)
        assert num == pytest.approx(math.log(b**2 / a**2) / (2 * (b**2 - a**2)), rel=1e-10)


def test_step_mode_energy_change_shape():
    lam0 = 1.0
    w = np.geomspace(1e-4, 1e4, 200)
    dxi = step_mode_energy_change(w, lam0)
    assert np.all(dxi < 0)
    assert abs(step_mode_energy_change(1e-12, lam0)) < 1e-11
    big = np.array([1e3, 1e4])
    assert np.allclose(step_mode_energy_change(big, lam0) * big**3, -3 * lam0**3 / 8, rtol=1e-5)


def test_step_total():
    for lam0 in (0.5, 1.0, 2.0):
        total = checks.step_total_by_quadrature(lam0)
        assert total == pytest.approx(-lam0 * math.log(2) / (4 * math.pi), rel=1e-6)


def test_step_exact():
    w = np.geomspace(0.05, 20, 40)
    assert np.all(step_mode_energy_change_exact(w, 1.0, 0.0) == 0)
    for lam0 in (0.5, 1.0, 3.0):
        exact = step_mode_energy_change_exact(w, lam0, 100 / lam0)
        approx = step_mode_energy_change(w, lam0)
        assert np.max(np.abs(exact / approx - 1)) <= 1e-12


@pytest.mark.parametrize("w,T", [(0.7, 3.0), (2.0, 8.0), (0.2, 100.0)])
def test_step_exact_matches_time_integral_of_flux(w, T):
    lam = 0.5

    def flux(t):
        c = c_step(w, 1.0, t)
        dc = -(lam - 1j * w) * c - 1j * w
        # |f(0,t)|^2 = |C|^2 / w with A^2 = 2
        return -lam * 2 * (np.conj(c) * dc).real / w

    val, _ = quad(flux, 0.0, T, limit=2000, epsabs=1e-13, epsrel=1e-12)
    assert abs(val - step_mode_energy_change_exact(w, 1.0, T)) <= 1e-8


# quasi-static

def test_quasistatic_mode():
    assert quasistatic_mode_energy_change(1.0, PotentialProfile.static(0.0)) == 0.0
    p = PotentialProfile.static(1.3)
    for w in (0.01, 0.5, 3.0, 40.0):
        val = quasistatic_mode_energy_change(w, p)
        assert val < 0
        closed = 2 * w * (math.atan(1.3 / w) / (2 * w) - 1.3 / (2 * (w**2 + 1.69)))
        assert val == pytest.approx(-closed, rel=1e-10)


def test_quasistatic_total():
    assert quasistatic_total(0.0) == 0.0
    assert quasistatic_total(1.0) == pytest.approx(-0.159155, abs=5e-7)
    for lam0 in (0.5, 1.0, 2.0):
        assert checks.quasistatic_total_by_quadrature(lam0) == pytest.approx(
            quasistatic_total(lam0), abs=1e-9)
        assert static_total_energy(lam0) + quasistatic_total(lam0) == 0.0
