"""Cross-checks between closed forms and independent numerical routes.

Each check returns a :class:`Check` holding the measured deviation and the
threshold it must stay under; ``run_all`` backs the ``verify`` command.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import energy, modes
from .potential import PotentialProfile
from .quadrature import QuadratureSpec, integrate_1d, integrate_half_line

TABLE_PROFILES = [(1.0, 0.5), (2.0, 0.5), (2.0, 1.0), (4.0, 2.0), (4.0, 3.0)]

STEP_TOTAL_PER_LAMBDA = -math.log(2.0) / (4.0 * math.pi)


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<44s} deviation={self.deviation:.3e} threshold={self.threshold:.1e} {status}"


def fd_mode_density(omega: float, x: float, t: float, profile: PotentialProfile,
                    h: float = 1e-6) -> float:
    """Regularised continuum density of one mode from central differences of f(x, t).

    Computes (1/2pi)[(|df/dt|^2 + |df/dx|^2)/2 - w/2] with A^2 = 2; avoid x = 0,
    where the mode has a kink.
    """
    def f(xx, tt):
        return modes.mode_function(omega, xx, tt, profile)

    ft = (f(x, t + h) - f(x, t - h)) / (2 * h)
    fx = (f(x + h, t) - f(x - h, t)) / (2 * h)
    eps = 0.5 * (abs(ft) ** 2 + abs(fx) ** 2)
    return (eps - 0.5 * omega) / (2 * math.pi)


def _ode_vs_closed(profile: PotentialProfile, times) -> float:
    omegas = np.geomspace(0.01, 50.0, 10)
    dev = 0.0
    for t in times:
        dev = max(dev, float(np.max(np.abs(modes.c_ode(omegas, profile, t)
                                          - modes.mode_amplitude(omegas, profile, t)))))
    return dev


def check_rational_ode() -> Check:
    p = PotentialProfile.rational(1.0, 2.0)
    return Check("c_rational vs c_ode", _ode_vs_closed(p, np.linspace(0, p.T, 5)), 1e-8)


def check_step_ode() -> Check:
    p = PotentialProfile.step(1.0, 5.0)
    return Check("c_step vs c_ode", _ode_vs_closed(p, np.linspace(0, p.T, 5)), 1e-8)


def check_post_switch_ode() -> Check:
    p = PotentialProfile.rational(1.0, 2.0)
    return Check("post_switch_c vs c_ode", _ode_vs_closed(p, [p.T + 0.5, p.T + 1.0]), 1e-8)


def check_static_continuum(lambda0: float = 1.0) -> Check:
    value = energy.static_density_continuum(lambda0, 1e4)
    target = lambda0 / (2 * math.pi)
    return Check("static continuum integral -> lambda0/2pi", abs(value - target) / target, 1e-3)


def quasistatic_total_by_quadrature(lambda0: float, spec: QuadratureSpec | None = None) -> float:
    """(1/2pi) integral over all w of the quasi-static per-mode change, nested quadrature."""
    spec = spec or QuadratureSpec(rel_tol=1e-10, abs_tol=1e-14)
    profile = PotentialProfile.static(lambda0)

    def per_mode(ws: np.ndarray) -> np.ndarray:
        return np.array([energy.quasistatic_mode_energy_change(w, profile, spec) for w in ws])

    value, _ = integrate_half_line(per_mode, 0.0, spec, scale=max(lambda0, 1e-3))
    return value / (2 * math.pi)


def check_quasistatic_balance(lambda0: float = 1.0) -> Check:
    total = energy.static_total_energy(lambda0) + quasistatic_total_by_quadrature(lambda0)
    return Check("E_K + dE_quasistatic = 0", abs(total), 1e-6)


def step_total_by_quadrature(lambda0: float, spec: QuadratureSpec | None = None) -> float:
    spec = spec or QuadratureSpec(rel_tol=1e-12, abs_tol=1e-15)
    value, _ = integrate_half_line(lambda w: energy.step_mode_energy_change(w, lambda0),
                                   0.0, spec, scale=lambda0)
    return value / (2 * math.pi)


def check_step_total(lambda0: float = 1.0) -> Check:
    target = STEP_TOTAL_PER_LAMBDA * lambda0
    return Check("step total -> -lambda0 ln2/(4pi)",
                 abs(step_total_by_quadrature(lambda0) - target) / abs(target), 1e-6)


def check_fd_density(n: int = 20, seed: int = 7) -> Check:
    rng = np.random.default_rng(seed)
    p = PotentialProfile.rational(1.0, 2.0)
    worst = 0.0
    for _ in range(n):
        w = rng.uniform(0.2, 5.0)
        x = rng.uniform(0.05, 1.0) * rng.choice([-1.0, 1.0])
        t = abs(x) + rng.uniform(0.02, 0.98) * p.T
        ref = fd_mode_density(w, x, t, p)
        got = energy.pulse_mode_density(w, t - abs(x), p)
        worst = max(worst, abs(got - ref) / abs(ref))
    return Check("finite-difference mode density", worst, 1e-4)


def check_box_spectrum() -> Check:
    spec = modes.quantized_frequencies(1.0, 100.0, 50)
    return Check("box spectrum residual", float(np.max(np.abs(spec.residuals()))), 1e-10)


def check_causality() -> Check:
    worst = 0.0
    for f2, lam0 in TABLE_PROFILES:
        p = PotentialProfile.rational(lam0, f2)
        for x in (0.3, -0.7, 2.0):
            worst = max(worst, abs(energy.pulse_density(x, abs(x) - 0.1, p).value))
            worst = max(worst, abs(energy.pulse_density(x, abs(x) + p.T + 0.1, p).value))
    return Check("density zero outside causal shell", worst, 1e-8)


def check_flux_identity(omega: float = 1.0) -> Check:
    """Mode energy growth equals -lambda d|f(0,t)|^2/dt for the rational profile."""
    p = PotentialProfile.rational(1.0, 2.0)
    h = 1e-5
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-15)

    def mode_energy(t: float) -> float:
        # both half lines, continuum density with the 1/(2 pi) measure removed
        v, _ = integrate_1d(lambda us: np.array([energy.pulse_mode_density(omega, u, p)
                                                 for u in us]), 0.0, t, spec)
        return 2 * v * 2 * math.pi

    def origin_sq(t: float) -> float:
        return abs(modes.mode_function(omega, 0.0, t, p)) ** 2

    worst = 0.0
    for t in np.linspace(0.1, 0.9, 5) * p.T:
        lhs = (mode_energy(t + h) - mode_energy(t - h)) / (2 * h)
        rhs = -float(energy.lambda_at(p, t)) * (origin_sq(t + h) - origin_sq(t - h)) / (2 * h)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return Check(f"flux identity (omega={omega:g})", worst, 1e-4)


CHECKS: list[Callable[[], Check]] = [
    check_rational_ode,
    check_step_ode,
    check_post_switch_ode,
    check_static_continuum,
    check_quasistatic_balance,
    check_step_total,
    check_fd_density,
    check_box_spectrum,
    check_causality,
    check_flux_identity,
]


def run_all() -> list[Check]:
    return [check() for check in CHECKS]
