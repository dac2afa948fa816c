"""Regularised kinetic-energy densities and radiated energies.

L-cancellation convention: continuum operations use the box normalisation
A^2 = 2/L together with the mode measure L dw / (2 pi), so the box length
drops out.  Per-mode quantities below are therefore quoted with A^2 = 2
and the 1/(2 pi) is applied when modes are summed, unless a function says
otherwise.  Only ``static_regularized_mode_density`` works at finite L.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .modes import BoxSpectrum, c_step, mode_amplitude
from .potential import PotentialProfile, ProfileKind, lambda_at
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_1d, integrate_2d

TWO_PI = 2.0 * math.pi


# static sector ----------------------------------------------------------

def static_mode_density(omega, lambda0: float, A2):
    """Kinetic energy density A^2 w / 4 of one static mode (x and t independent).

    ``lambda0`` only enters through ``A2``.
    """
    return np.asarray(A2) * np.asarray(omega) / 4.0


def static_regularized_mode_density(n: int, spectrum: BoxSpectrum) -> float:
    """A_n^2 w_n / 4 - w0_n / (2 L) for level ``n`` of a finite box."""
    return float(spectrum.A2[n] * spectrum.omega[n] / 4.0 - spectrum.omega0[n] / (2.0 * spectrum.L))


def static_regularized_leading(omega0, lambda0: float, L: float):
    """Leading 1/L^2 term of the regularised static mode density."""
    w0 = np.asarray(omega0, dtype=float)
    return (np.arctan2(lambda0, w0) - w0 * lambda0 / (lambda0**2 + w0**2)) / L**2


def _static_continuum_integrand(lambda0: float):
    def f(w: np.ndarray) -> np.ndarray:
        # arcsin(l/sqrt(l^2+w^2)) written as arctan2 to stay accurate near w = 0
        return np.arctan2(lambda0, w) - lambda0 * w / (lambda0**2 + w**2)
    return f


def static_density_continuum(lambda0: float, Lambda: float = 1e4,
                             spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """L * T00R of the static vacuum with the mode integral cut at ``Lambda``.

    Tends to lambda0 / (2 pi) as Lambda grows; the integrand decays only as
    w^-3, hence the large default cutoff.
    """
    if lambda0 == 0:
        return 0.0
    value, _ = integrate_1d(_static_continuum_integrand(lambda0), 0.0, Lambda, spec,
                            initial_panels=8)
    return value / TWO_PI


def static_total_energy(lambda0: float) -> float:
    """Total static kinetic energy lambda0 / (2 pi)."""
    if lambda0 < 0:
        raise ValueError("lambda0 must be >= 0")
    return lambda0 / TWO_PI


# radiated pulse ---------------------------------------------------------

def mode_density_from_amplitude(omega, lam, c):
    """Continuum per-mode density (1/(4 pi w)) (-i w lam (C - C*) + 2 lam^2 |C|^2).

    -i w (C - C*) equals 2 w Im C, so the result is real by construction.
    """
    w = np.asarray(omega, dtype=float)
    return (2.0 * w * lam * np.imag(c) + 2.0 * lam**2 * np.abs(c) ** 2) / (4.0 * math.pi * w)


def pulse_mode_density(omega, u: float, profile: PotentialProfile):
    """Continuum density radiated by mode ``omega`` at retarded time ``u``.

    Zero before the switch-off starts (the static amplitude cancels both
    terms exactly), after it ends (no coupling) and at w = 0 by continuity.
    """
    w = np.asarray(omega, dtype=float)
    lam = lambda_at(profile, u)
    if u < 0 or lam == 0.0 or profile.kind is ProfileKind.STATIC:
        return 0.0 if w.ndim == 0 else np.zeros_like(w)
    out = np.zeros_like(w)
    pos = w > 0
    if np.any(pos):
        c = mode_amplitude(w[pos], profile, u)
        out[pos] = mode_density_from_amplitude(w[pos], lam, c)
    return float(out) if w.ndim == 0 else out


@dataclass(frozen=True)
class DensitySample:
    x: float
    t: float
    value: float


def pulse_density(x: float, t: float, profile: PotentialProfile,
                  quad: QuadratureSpec = DEFAULT_SPEC) -> DensitySample:
    """Regularised energy density T00R(x, t): the mode integral up to the cutoff."""
    u = t - abs(x)
    if u < 0 or u >= profile.T or profile.kind is ProfileKind.STATIC:
        return DensitySample(x, t, 0.0)
    value, _ = integrate_1d(lambda w: pulse_mode_density(w, u, profile),
                            0.0, quad.cutoff_Lambda, quad)
    return DensitySample(x, t, value)


def density_grid(xs: Iterable[float], ts: Iterable[float], profile: PotentialProfile,
                 quad: QuadratureSpec = DEFAULT_SPEC) -> list[DensitySample]:
    """Density samples for every (t, x) pair, t outermost.

    Density depends on (x, t) only through t - |x|, so repeated retarded
    times are computed once.
    """
    cache: dict[float, float] = {}
    rows = []
    for t in ts:
        for x in xs:
            u = t - abs(x)
            if u not in cache:
                cache[u] = pulse_density(0.0, u, profile, quad).value if u >= 0 else 0.0
            rows.append(DensitySample(float(x), float(t), cache[u]))
    return rows


def density_csv(samples: Iterable[DensitySample]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "t", "T00R"])
    for s in samples:
        writer.writerow([f"{s.x:.9g}", f"{s.t:.9g}", f"{s.value:.9g}"])
    return buf.getvalue()


@dataclass(frozen=True)
class EnergyReport:
    """Radiated energy E(0->T) on the half line x > 0 plus quadrature diagnostics.

    ``E_total`` counts both half lines.
    """

    kind: str
    lambda0: float
    f2: float | None
    T: float
    E_initial: float
    E_radiated_half: float
    E_total: float
    Lambda: float
    error_estimate: float
    tail_estimate: float | None
    outer_subdivisions: int
    inner_subdivisions: int

    def to_dict(self) -> dict:
        return asdict(self)


def radiated_energy(profile: PotentialProfile, quad: QuadratureSpec = DEFAULT_SPEC,
                    *, tail: bool = True) -> EnergyReport:
    """Energy radiated into x > 0 by t = T: double integral over u in [0, T], w in [0, Lambda].

    With ``tail`` the same integral over w in [Lambda, 2 Lambda] is reported
    as ``tail_estimate``.
    """
    if not math.isfinite(profile.T):
        raise ValueError("radiated_energy needs a profile with a finite switch-off time")

    def integrand(u: float, w: np.ndarray) -> np.ndarray:
        return pulse_mode_density(w, u, profile)

    value, err, info = integrate_2d(integrand, (0.0, profile.T), quad, full_output=True)
    tail_est = None
    if tail:
        lam = quad.cutoff_Lambda
        t_val, _ = integrate_2d(integrand, (0.0, profile.T), quad, omega_range=(lam, 2 * lam))
        tail_est = abs(t_val)
    return EnergyReport(
        kind=profile.kind.value,
        lambda0=profile.lambda0,
        f2=profile.f2,
        T=profile.T,
        E_initial=static_total_energy(profile.lambda0),
        E_radiated_half=value,
        E_total=2.0 * value,
        Lambda=quad.cutoff_Lambda,
        error_estimate=err,
        tail_estimate=tail_est,
        outer_subdivisions=info["outer_subdivisions"],
        inner_subdivisions=info["inner_subdivisions"],
    )


# step profile -----------------------------------------------------------

def step_mode_energy_change(omega, lambda0: float):
    """Large-T energy change of one mode under the halving step (A^2 = 2)."""
    w = np.asarray(omega, dtype=float)
    a2 = (0.5 * lambda0) ** 2
    return -(lambda0 * w / 2.0) * 3.0 * a2 / ((w**2 + a2) * (w**2 + lambda0**2))


def step_mode_energy_change_exact(omega, lambda0: float, T: float):
    """-(lambda0/2)(A^2/2w)(|C(T)|^2 - |C(0)|^2) with C from the step closed form."""
    if T < 0:
        raise ValueError("T must be >= 0")
    w = np.asarray(omega, dtype=float)
    if T == 0:
        return np.zeros_like(w)
    half = 0.5 * lambda0
    steady = 1j * w / (1j * w - half)
    transient = c_step(w, lambda0, T) - steady
    # |C(T)|^2 - |C(0)|^2 split so the steady-state part has no cancellation
    w2 = w**2
    steady_gain = w2 * (lambda0**2 - half**2) / ((w2 + half**2) * (w2 + lambda0**2))
    delta_sq = steady_gain + 2.0 * np.real(np.conj(steady) * transient) + np.abs(transient) ** 2
    return -(lambda0 / 2.0) / w * delta_sq


# quasi-static -----------------------------------------------------------

def quasistatic_mode_energy_change(omega: float, profile: PotentialProfile,
                                   spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Quasi-static energy change 2w * integral_{lambda0}^{0} lam^2/(w^2+lam^2)^2 dlam.

    Integrating over the coupling itself makes the result independent of
    how fast the profile falls.
    """
    lambda0 = profile.lambda0
    if lambda0 == 0:
        return 0.0
    w2 = float(omega) ** 2
    value, _ = integrate_1d(lambda lam: lam**2 / (w2 + lam**2) ** 2, 0.0, lambda0, spec)
    return -2.0 * float(omega) * value


def quasistatic_total(lambda0: float) -> float:
    """Summed quasi-static change -lambda0 / (2 pi); cancels the static energy."""
    if lambda0 < 0:
        raise ValueError("lambda0 must be >= 0")
    return -lambda0 / TWO_PI
