"""Coupling histories lambda(t) for the time-dependent delta potential.

The potential is V(x, t) = 2 lambda(t) delta(x).  Every profile holds the
coupling at ``lambda0`` for t < 0 and at zero for t > T; the kinds differ only
in how the coupling falls in between.  Units have c = 1 and lambda carries
inverse length.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np


class ProfileError(ValueError):
    """Raised for an invalid or unusable coupling profile."""


class ProfileKind(str, enum.Enum):
    STATIC = "static"
    STEP = "step"
    RATIONAL = "rational"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class PotentialProfile:
    kind: ProfileKind
    lambda0: float
    f2: float | None = None
    T: float = math.inf
    samples: tuple[tuple[float, float], ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        kind = ProfileKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not (self.lambda0 >= 0 and math.isfinite(self.lambda0)):
            raise ProfileError(f"lambda0 must be finite and >= 0, got {self.lambda0}")
        if kind is ProfileKind.RATIONAL:
            if self.f2 is None or not (self.f2 > self.lambda0 > 0):
                raise ProfileError(
                    f"rational profile needs f2 > lambda0 > 0 (f2={self.f2}, lambda0={self.lambda0})"
                )
            T = self.lambda0 / (self.f2 * (self.f2 - self.lambda0))
            object.__setattr__(self, "T", T)
        elif kind is ProfileKind.STEP:
            if not (self.T > 0 and math.isfinite(self.T)):
                raise ProfileError(f"step profile needs a finite T > 0, got {self.T}")
        elif kind is ProfileKind.SAMPLED:
            _check_samples(self.samples, self.lambda0)
            object.__setattr__(self, "T", float(self.samples[-1][0]))
        else:
            object.__setattr__(self, "T", math.inf)

    # constructors -------------------------------------------------------

    @classmethod
    def static(cls, lambda0: float) -> PotentialProfile:
        return cls(ProfileKind.STATIC, float(lambda0))

    @classmethod
    def step(cls, lambda0: float, T: float | None = None) -> PotentialProfile:
        """Coupling halved at t = 0 and removed at t = T (default T = 100/lambda0)."""
        if T is None:
            if lambda0 <= 0:
                raise ProfileError("default step duration 100/lambda0 needs lambda0 > 0")
            T = 100.0 / lambda0
        return cls(ProfileKind.STEP, float(lambda0), T=float(T))

    @classmethod
    def rational(cls, lambda0: float, f2: float) -> PotentialProfile:
        return cls(ProfileKind.RATIONAL, float(lambda0), f2=float(f2))

    @classmethod
    def sampled(cls, samples: Sequence[Sequence[float]]) -> PotentialProfile:
        """Piecewise-linear profile through ``(t, lambda)`` knots starting at t = 0."""
        pts = tuple((float(t), float(lam)) for t, lam in samples)
        if not pts:
            raise ProfileError("sampled profile needs at least two samples")
        return cls(ProfileKind.SAMPLED, pts[0][1], samples=pts)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PotentialProfile:
        kind = ProfileKind(str(data["kind"]).lower())
        if kind is ProfileKind.STATIC:
            return cls.static(data["lambda0"])
        if kind is ProfileKind.STEP:
            return cls.step(data["lambda0"], data.get("T"))
        if kind is ProfileKind.RATIONAL:
            return cls.rational(data["lambda0"], data["f2"])
        return cls.sampled(data["samples"])

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind.value, "lambda0": self.lambda0}
        if self.kind is ProfileKind.RATIONAL:
            out["f2"] = self.f2
            out["f3"] = self.f3
        if math.isfinite(self.T):
            out["T"] = self.T
        if self.kind is ProfileKind.SAMPLED:
            out["samples"] = [list(s) for s in self.samples]
        return out

    @property
    def f3(self) -> float:
        if self.kind is not ProfileKind.RATIONAL:
            raise ProfileError("f3 is only defined for the rational profile")
        return self.f2 - self.lambda0

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Times in [0, T] where lambda or its derivative may jump."""
        if self.kind is ProfileKind.STATIC:
            return ()
        if self.kind is ProfileKind.SAMPLED:
            return tuple(t for t, _ in self.samples)
        return (0.0, self.T)


def _check_samples(samples: tuple[tuple[float, float], ...], lambda0: float) -> None:
    if len(samples) < 2:
        raise ProfileError("sampled profile needs at least two samples")
    ts = np.array([s[0] for s in samples])
    lams = np.array([s[1] for s in samples])
    if ts[0] != 0.0:
        raise ProfileError("first sample must sit at t = 0")
    if np.any(np.diff(ts) <= 0):
        raise ProfileError("sample times must be strictly increasing")
    if np.any(np.diff(lams) > 0) or lams[-1] != 0.0 or np.any(lams < 0):
        raise ProfileError("sampled coupling must be non-negative, non-increasing and end at 0")
    if lams[0] != lambda0:
        raise ProfileError("lambda0 must equal the first sample value")


def _scalar_or_array(value: np.ndarray, like: Any):
    return float(value) if np.ndim(like) == 0 else value


def lambda_at(profile: PotentialProfile, t):
    """Coupling lambda(t); accepts scalars or arrays.

    At exactly t = 0 and t = T the in-interval formula is used, so the step
    profile returns lambda0/2 at t = 0.
    """
    tt = np.asarray(t, dtype=float)
    p = profile
    lam0 = p.lambda0
    if p.kind is ProfileKind.STATIC:
        out = np.full_like(tt, lam0)
    elif p.kind is ProfileKind.STEP:
        out = np.where(tt < 0, lam0, np.where(tt < p.T, 0.5 * lam0, 0.0))
    elif p.kind is ProfileKind.RATIONAL:
        inside = p.f2 / (1.0 + p.f2 * np.clip(tt, 0.0, p.T)) - p.f3
        # the two terms cancel at t = T; clip the rounding residue
        inside = np.maximum(inside, 0.0)
        out = np.where(tt < 0, lam0, np.where(tt <= p.T, inside, 0.0))
    else:
        ts = np.array([s[0] for s in p.samples])
        lams = np.array([s[1] for s in p.samples])
        out = np.where(tt < 0, lam0, np.interp(tt, ts, lams, right=0.0))
    return _scalar_or_array(out, t)


def accumulated_F(profile: PotentialProfile, t):
    """F(t) = integral of lambda from 0 to t, for t >= 0."""
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise ValueError("accumulated_F is defined for t >= 0 only")
    p = profile
    if p.kind is ProfileKind.STATIC:
        out = p.lambda0 * tt
    elif p.kind is ProfileKind.STEP:
        out = 0.5 * p.lambda0 * np.minimum(tt, p.T)
    elif p.kind is ProfileKind.RATIONAL:
        s = np.minimum(tt, p.T)
        out = np.log1p(p.f2 * s) - p.f3 * s
    else:
        ts = np.array([s[0] for s in p.samples])
        lams = np.array([s[1] for s in p.samples])
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (lams[1:] + lams[:-1]) * np.diff(ts))))
        s = np.minimum(tt, ts[-1])
        idx = np.clip(np.searchsorted(ts, s, side="right") - 1, 0, len(ts) - 2)
        lam_s = np.interp(s, ts, lams)
        out = cum[idx] + 0.5 * (lams[idx] + lam_s) * (s - ts[idx])
    return _scalar_or_array(out, t)


def switch_off_duration(profile: PotentialProfile) -> float:
    if profile.kind is ProfileKind.STATIC:
        raise ProfileError("static profile is never switched off")
    return profile.T
