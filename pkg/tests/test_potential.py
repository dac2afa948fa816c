import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from deltapulse.potential import (
    PotentialProfile,
    ProfileError,
    accumulated_F,
    lambda_at,
    switch_off_duration,
)

RATIONAL = PotentialProfile.rational(1.0, 2.0)


def test_rational_endpoints():
    assert lambda_at(RATIONAL, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert lambda_at(RATIONAL, RATIONAL.T) == pytest.approx(0.0, abs=1e-15)
    assert lambda_at(RATIONAL, -3.0) == 1.0
    assert lambda_at(RATIONAL, 7.0) == 0.0


def test_rational_interior_value():
    # exact rational arithmetic: 2/(1 + 2/4) - (2 - 1)
    exact = Fraction(2) / (1 + Fraction(2) * Fraction(1, 4)) - 1
    assert exact == Fraction(1, 3)
    assert lambda_at(RATIONAL, 0.25) == pytest.approx(float(exact), rel=1e-15)


def test_step_values():
    p = PotentialProfile.step(1.0)
    assert p.T == 100.0
    assert lambda_at(p, 0.3) == 0.5
    assert lambda_at(p, 0.0) == 0.5
    assert lambda_at(p, -0.1) == 1.0
    assert lambda_at(p, 100.0) == 0.0


def test_switch_off_duration():
    assert switch_off_duration(RATIONAL) == pytest.approx(0.5)
    assert switch_off_duration(PotentialProfile.rational(0.5, 1.0)) == pytest.approx(1.0)
    assert switch_off_duration(PotentialProfile.step(1.0, 100.0)) == 100.0
    with pytest.raises(ProfileError):
        switch_off_duration(PotentialProfile.static(1.0))


@pytest.mark.parametrize("kwargs", [dict(lambda0=1.0, f2=1.0), dict(lambda0=1.0, f2=0.5),
                                    dict(lambda0=0.0, f2=1.0)])
def test_rational_rejects_bad_parameters(kwargs):
    with pytest.raises(ProfileError):
        PotentialProfile.rational(**kwargs)


def test_sampled_validation():
    with pytest.raises(ProfileError):
        PotentialProfile.sampled([(0, 1), (1, 0.5), (2, 0.7), (3, 0)])
    with pytest.raises(ProfileError):
        PotentialProfile.sampled([(0, 1), (1, 0.5)])
    p = PotentialProfile.sampled([(0, 1), (1, 0.5), (2, 0)])
    assert p.T == 2.0 and p.lambda0 == 1.0
    assert lambda_at(p, 0.5) == pytest.approx(0.75)


def test_F_values():
    assert accumulated_F(RATIONAL, 0.0) == 0.0
    assert accumulated_F(PotentialProfile.step(1.0, 4.0), 0.0) == 0.0
    assert accumulated_F(RATIONAL, 0.5) == pytest.approx(math.log(2) - 0.5, abs=1e-15)
    with pytest.raises(ValueError):
        accumulated_F(RATIONAL, -1.0)


@pytest.mark.parametrize("profile", [
    RATIONAL,
    PotentialProfile.rational(3.0, 4.0),
    PotentialProfile.step(1.0, 2.0),
    PotentialProfile.sampled([(0, 2.0), (0.3, 1.2), (0.5, 1.1), (1.0, 0.0)]),
])
def test_F_matches_quadrature(profile):
    ts = np.linspace(0.0, profile.T, 50)
    knots = [b for b in profile.breakpoints if 0 < b < profile.T]
    for t in ts:
        ref, _ = quad(lambda s: lambda_at(profile, s), 0.0, t, epsabs=1e-13, epsrel=1e-12,
                      points=[k for k in knots if k < t] or None, limit=200)
        assert accumulated_F(profile, t) == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("profile", [RATIONAL, PotentialProfile.rational(0.5, 2.0),
                                     PotentialProfile.sampled([(0, 2.0), (0.3, 1.2), (1.0, 0.0)])])
def test_F_derivative_is_lambda(profile):
    h = 1e-6
    for t in np.linspace(0.05, 0.95, 20) * profile.T:
        dF = (accumulated_F(profile, t + h) - accumulated_F(profile, t - h)) / (2 * h)
        lam = lambda_at(profile, t)
        assert abs(dF - lam) <= 1e-4 * max(abs(lam), 1e-12)


@pytest.mark.parametrize("profile", [RATIONAL, PotentialProfile.rational(3.0, 4.0),
                                     PotentialProfile.sampled([(0, 2.0), (0.3, 1.2), (1.0, 0.0)])])
def test_lambda_non_negative_non_increasing(profile):
    ts = np.linspace(-0.5, 1.5 * profile.T, 400)
    lam = lambda_at(profile, ts)
    assert np.all(lam >= 0)
    assert np.all(np.diff(lam) <= 1e-15)
    F = accumulated_F(profile, ts[ts >= 0])
    assert np.all(np.diff(F) >= -1e-15)


def test_dict_round_trip():
    for p in (RATIONAL, PotentialProfile.step(2.0, 3.0), PotentialProfile.static(1.5),
              PotentialProfile.sampled([(0, 1), (1, 0)])):
        assert PotentialProfile.from_dict(p.to_dict()) == p
