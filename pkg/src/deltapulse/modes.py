"""Even-parity mode amplitudes for the delta potential.

The field mode is

    f(x, t) = exp(-i w t) (A / sqrt(2 w)) [cos(w x) + B(t - |x|) exp(i w |x|)]

and the amplitude at the origin, C = 1 + B, obeys the linear ODE

    dC/dt + (lambda(t) - i w) C = -i w.

Closed forms cover the static, step and rational profiles; ``c_ode`` is the
brute-force integrator that checks them and handles sampled profiles.  All
amplitude functions broadcast over ``omega``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .potential import PotentialProfile, ProfileError, ProfileKind, lambda_at


class IntegrationError(RuntimeError):
    """The ODE integrator stopped before reaching the requested time."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(f"{message} (reached t={t_reached:.12g})")
        self.t_reached = t_reached


def _check_omega(omega) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega must be > 0")
    return w


def _out(value: np.ndarray, like):
    return complex(value) if np.ndim(like) == 0 else value


def c_static(omega, lambda0: float):
    """Fixed point i w / (i w - lambda0) of the amplitude ODE."""
    w = _check_omega(omega)
    return _out(1j * w / (1j * w - lambda0), omega)


def c_step(omega, lambda0: float, t: float):
    """Amplitude while the coupling sits at lambda0/2, for 0 <= t <= T."""
    w = _check_omega(omega)
    if t < 0:
        raise ValueError("c_step is defined for t >= 0")
    half = 0.5 * lambda0
    c0 = 1j * w / (1j * w - lambda0)
    transient = (c0 + 1j * w / (half - 1j * w)) * np.exp((1j * w - half) * t)
    return _out(transient + 1j * w / (1j * w - half), omega)


def _require_rational(profile: PotentialProfile) -> None:
    if profile.kind is not ProfileKind.RATIONAL:
        raise ProfileError(f"rational closed form used with a {profile.kind.value} profile")


def g_rational(omega, profile: PotentialProfile, t: float):
    """Integral of exp(-i w s) exp(F(s)) over [0, t] for the rational profile."""
    _require_rational(profile)
    w = _check_omega(omega)
    f2, f3 = profile.f2, profile.f3
    a = 1j * w + f3
    decay = np.exp(-a * t)
    g = (1.0 - decay) / a * (1.0 + f2 / a) - f2 * t * decay / a
    return _out(g, omega)


def c_rational(omega, profile: PotentialProfile, t: float):
    _require_rational(profile)
    if not (0.0 <= t <= profile.T * (1 + 1e-14)):
        raise ValueError(f"c_rational needs 0 <= t <= T={profile.T}, got {t}")
    w = _check_omega(omega)
    f2, f3 = profile.f2, profile.f3
    c0 = 1j * w / (1j * w - profile.lambda0)
    g = g_rational(w, profile, t)
    c = np.exp((1j * w + f3) * t) / (1.0 + f2 * t) * (c0 - 1j * w * g)
    return _out(c, omega)


def post_switch_c(c_at_T, omega, dt):
    """Free evolution once the coupling is gone: C - 1 rotates as exp(i w dt)."""
    if np.any(np.asarray(dt) < 0):
        raise ValueError("dt must be >= 0")
    return c_at_T + (c_at_T - 1.0) * np.expm1(1j * np.asarray(omega) * dt)


def mode_amplitude(omega, profile: PotentialProfile, t: float):
    """C(t) by the best available route for the profile kind."""
    w = _check_omega(omega)
    p = profile
    if t < 0 or p.kind is ProfileKind.STATIC:
        return _out(1j * w / (1j * w - p.lambda0), omega)
    if p.kind is ProfileKind.SAMPLED:
        return c_ode(omega, p, t)
    if p.kind is ProfileKind.STEP:
        def closed(s):
            return c_step(w, p.lambda0, s)
    else:
        def closed(s):
            return c_rational(w, p, s)
    if t <= p.T:
        return _out(closed(t), omega)
    return _out(post_switch_c(closed(p.T), w, t - p.T), omega)


def c_ode(omega, profile: PotentialProfile, t: float, *, rtol: float = 1e-12,
          atol: float = 1e-12, method: str = "DOP853"):
    """Integrate the amplitude ODE from the static state at t = 0 up to ``t``.

    Works for any profile; integration restarts at every profile breakpoint
    so jumps in lambda or its slope never fall inside a step.
    """
    w = _check_omega(omega)
    if t < 0:
        raise ValueError("c_ode integrates forward from t = 0")
    flat = np.atleast_1d(w).astype(float)
    y = 1j * flat / (1j * flat - profile.lambda0)
    knots = sorted({0.0, float(t), *(b for b in profile.breakpoints if 0 < b < t)})

    for lo, hi in zip(knots[:-1], knots[1:]):
        # step coupling is constant per segment; sampling at the ends would hit the jump
        if profile.kind is ProfileKind.STEP:
            lam_const = lambda_at(profile, 0.5 * (lo + hi))

            def rhs(s, c, lam=lam_const):
                return -(lam - 1j * flat) * c - 1j * flat
        else:
            def rhs(s, c):
                return -(lambda_at(profile, s) - 1j * flat) * c - 1j * flat

        sol = solve_ivp(rhs, (lo, hi), y, method=method, rtol=rtol, atol=atol)
        if sol.status != 0:
            raise IntegrationError(sol.message, float(sol.t[-1]))
        y = sol.y[:, -1]

    return _out(y.reshape(np.shape(w)), omega)


def mode_function(omega, x, t, profile: PotentialProfile, A: float = math.sqrt(2.0)):
    """Even mode f(x, t); default A = sqrt(2) is the continuum normalisation per unit length.

    The scattered part is evaluated at the retarded time t - |x|.
    """
    w = float(omega)
    if w <= 0:
        raise ValueError("omega must be > 0")
    ax = abs(float(x))
    c_ret = mode_amplitude(w, profile, float(t) - ax)
    return (np.exp(-1j * w * t) * A / math.sqrt(2 * w)
            * (math.cos(w * ax) + (c_ret - 1.0) * np.exp(1j * w * ax)))


@dataclass(frozen=True)
class BoxSpectrum:
    """Quantised even-mode data in a box [-L/2, L/2] with static coupling."""

    L: float
    lambda0: float
    n: np.ndarray
    omega0: np.ndarray
    delta: np.ndarray
    omega: np.ndarray
    A2: np.ndarray

    def residuals(self) -> np.ndarray:
        """omega cos(omega L/2) + lambda0 sin(omega L/2) at each level."""
        h = 0.5 * self.omega * self.L
        return self.omega * np.cos(h) + self.lambda0 * np.sin(h)


def quantized_frequencies(lambda0: float, L: float, n_max: int) -> BoxSpectrum:
    if L <= 0 or n_max < 0:
        raise ValueError("need L > 0 and n_max >= 0")
    n = np.arange(n_max + 1)
    omega0 = 2 * math.pi * (n + 0.5) / L
    delta = np.zeros(n_max + 1)
    if lambda0 > 0:
        for k, w0 in enumerate(omega0):
            def g(d, w0=w0):
                return (w0 + 2 * d / L) * math.sin(d) - lambda0 * math.cos(d)
            try:
                delta[k] = brentq(g, 0.0, 0.5 * math.pi, xtol=1e-15, rtol=1e-15, maxiter=500)
            except (RuntimeError, ValueError) as exc:
                raise RuntimeError(f"phase-shift root failed at n={k}: {exc}") from exc
    omega = omega0 + 2 * delta / L
    A2 = (2 / L) / (1 + 2 * lambda0 / ((lambda0**2 + omega**2) * L))
    return BoxSpectrum(L, lambda0, n, omega0, delta, omega, A2)
