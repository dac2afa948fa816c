"""Adaptive Gauss-Kronrod (7, 15) integration.

Integrands are called with a 1-D array of abscissae and must return an array
of the same shape; every panel refinement evaluates both halves in a single
call.  Interval contributions are reduced with ``math.fsum`` so the result
does not depend on the refinement order.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

# 15-point Kronrod extension of the 7-point Gauss rule, nodes on [0, 1) of the
# half-interval, largest first.  Values from QUADPACK's qk15.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (+-x1, +-x3, +-x5, 0)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]

Integrand = Callable[[np.ndarray], np.ndarray]


class QuadratureError(RuntimeError):
    """Adaptive budget exhausted before the tolerance was met.

    ``estimate`` and ``error`` carry the best result reached.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate:.12g}, error={error:.3g})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 10_000
    cutoff_Lambda: float = 100.0

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.cutoff_Lambda > 0:
            raise ValueError("cutoff_Lambda must be positive")

    def replace(self, **changes) -> QuadratureSpec:
        return replace(self, **changes)


DEFAULT_SPEC = QuadratureSpec()


def _panels(f: Integrand, lefts: np.ndarray, rights: np.ndarray):
    """Kronrod estimates and |K15 - G7| error for a batch of panels."""
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    return kron, np.abs(kron - gauss)


def integrate_1d(f: Integrand, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC,
                 *, initial_panels: int = 1, full_output: bool = False):
    """Integrate a vectorised ``f`` over [a, b].

    Returns ``(value, error_estimate)``; with ``full_output`` a third item
    ``{"subdivisions": n}`` is appended.  Panels are bisected worst-first
    until the summed error is below ``max(rel_tol*|value|, abs_tol)``.
    """
    if b < a:
        raise ValueError(f"integrate_1d needs a <= b, got [{a}, {b}]")
    if a == b:
        return (0.0, 0.0, {"subdivisions": 0}) if full_output else (0.0, 0.0)

    edges = np.linspace(a, b, initial_panels + 1)
    vals, errs = _panels(f, edges[:-1], edges[1:])
    # heap of (-error, left, right, value); ties broken by position
    heap = [(-e, l, r, v) for l, r, v, e in zip(edges[:-1], edges[1:], vals, errs)]
    heapq.heapify(heap)
    n = len(heap)

    while True:
        total = math.fsum(item[3] for item in heap)
        err = math.fsum(-item[0] for item in heap)
        if not math.isfinite(total):
            raise QuadratureError("non-finite integrand", total, err)
        if err <= max(spec.rel_tol * abs(total), spec.abs_tol):
            break
        if n >= spec.max_subdivisions:
            raise QuadratureError(f"subdivision limit {spec.max_subdivisions} reached", total, err)
        _, l, r, _ = heapq.heappop(heap)
        m = 0.5 * (l + r)
        if not (l < m < r):
            raise QuadratureError("panel width underflow", total, err)
        v2, e2 = _panels(f, np.array([l, m]), np.array([m, r]))
        heapq.heappush(heap, (-e2[0], l, m, v2[0]))
        heapq.heappush(heap, (-e2[1], m, r, v2[1]))
        n += 1

    if full_output:
        return total, err, {"subdivisions": n}
    return total, err


def integrate_semi_infinite(f: Integrand, a: float, spec: QuadratureSpec = DEFAULT_SPEC,
                            *, full_output: bool = False):
    """Integrate over [a, Lambda] and report the neglected-tail size.

    The tail estimate is |integral of f over [Lambda, 2*Lambda]|; callers
    with a slowly decaying integrand should raise ``cutoff_Lambda``.
    """
    cutoff = spec.cutoff_Lambda
    if cutoff <= a:
        raise ValueError(f"cutoff {cutoff} must exceed the lower limit {a}")
    value, _, info = integrate_1d(f, a, cutoff, spec, full_output=True)
    tail, _, tail_info = integrate_1d(f, cutoff, 2 * cutoff, spec, full_output=True)
    if full_output:
        return value, abs(tail), {"subdivisions": info["subdivisions"] + tail_info["subdivisions"]}
    return value, abs(tail)


def integrate_half_line(f: Integrand, a: float = 0.0, spec: QuadratureSpec = DEFAULT_SPEC,
                        *, scale: float = 1.0, full_output: bool = False):
    """Integrate over [a, inf) without a cutoff via w = a + scale*s/(1-s).

    Only suitable for integrands that decay at least like 1/w**2.
    """
    def mapped(s: np.ndarray) -> np.ndarray:
        one_minus = 1.0 - s
        return f(a + scale * s / one_minus) * scale / one_minus**2

    return integrate_1d(mapped, 0.0, 1.0, spec, full_output=full_output)


def integrate_2d(f: Callable[[float, np.ndarray], np.ndarray], u_range: tuple[float, float],
                 spec: QuadratureSpec = DEFAULT_SPEC, *,
                 omega_range: tuple[float, float] | None = None, full_output: bool = False):
    """Iterated integral: inner over omega for each u, outer adaptive over u.

    ``f(u, omegas)`` takes a scalar u and an omega array.  The inner range
    defaults to ``[0, cutoff_Lambda]``.
    """
    w_lo, w_hi = omega_range if omega_range is not None else (0.0, spec.cutoff_Lambda)
    inner_count = [0]

    def outer(us: np.ndarray) -> np.ndarray:
        out = np.empty_like(us)
        for i, u in enumerate(us):
            v, _, info = integrate_1d(lambda w: f(u, w), w_lo, w_hi, spec, full_output=True)
            inner_count[0] += info["subdivisions"]
            out[i] = v
        return out

    value, err, info = integrate_1d(outer, u_range[0], u_range[1], spec, full_output=True)
    if full_output:
        return value, err, {"outer_subdivisions": info["subdivisions"],
                            "inner_subdivisions": inner_count[0]}
    return value, err
