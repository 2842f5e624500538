"""Truncated lattice convolution with a certified geometric tail bound.

For a kernel ``k`` whose values decay like ``|k(hi)| * r**(gamma - hi)``
outside its window, and a target with growth ``|f(beta)| <= C (1 + h|beta|)**g``,
the terms dropped beyond radius ``R`` are bounded by::

    sum_{gamma > R} |k(hi)| r**(gamma - hi) C (1 + h|beta| + h gamma)**g

plus the mirror image on the left. ``R`` is the smallest radius bringing the
bound under ``tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _accel
from .errors import NonDecayingKernel, TolUnachievable
from .kernel import LatticeFunction

MAX_RADIUS = 10**6
# a tolerance below this multiple of eps * sum|terms| cannot be certified
ROUNDING_FLOOR = 4.0 * 2.0**-52

LatticeEvaluator = Callable[[int], float]


@dataclass(frozen=True)
class ConvolutionPlan:
    kernel: LatticeFunction
    target_tolerance: float
    radius_used: int
    tail_bound: float

    def __post_init__(self):
        if self.tail_bound > self.target_tolerance:
            raise ValueError("plan tail bound exceeds its tolerance")


def _side_tail(edge_value: float, edge: int, ratio: float, radius: int, offset: float, h: float, growth: int) -> float:
    """Bound on sum_{gamma > radius} |edge_value| ratio**(gamma - edge) (1 + offset + h gamma)**growth."""
    if edge_value == 0.0 or ratio == 0.0:
        return 0.0
    base = 1.0 + offset
    gamma = radius + 1
    log_term = math.log(edge_value) + (gamma - edge) * math.log(ratio)
    total = 0.0
    # explicit terms until the term ratio drops below 1, then a geometric bound
    while True:
        envelope = (base + h * gamma) ** growth
        term = math.exp(log_term) * envelope
        q = ratio * ((base + h * (gamma + 1)) / (base + h * gamma)) ** growth
        if q < 1.0:
            return total + term / (1.0 - q)
        total += term
        gamma += 1
        log_term += math.log(ratio)
        if gamma > MAX_RADIUS:
            return math.inf


def tail_bound(kernel: LatticeFunction, beta: int, radius: int, growth: int = 1, scale: float = 1.0) -> float:
    """Upper bound on the kernel-weighted target mass dropped outside ``[-radius, radius]``."""
    if kernel.decay is None:
        raise NonDecayingKernel("kernel carries no decay metadata")
    if radius < kernel.half_width:
        raise ValueError(f"radius {radius} lies inside the kernel window")
    offset = kernel.h * abs(beta)
    right = _side_tail(abs(kernel(kernel.hi)), kernel.hi, kernel.decay, radius, offset, kernel.h, growth)
    left = _side_tail(abs(kernel(kernel.lo)), -kernel.lo, kernel.decay, radius, offset, kernel.h, growth)
    return scale * (right + left)


def plan_radius(kernel: LatticeFunction, beta: int, tol: float, growth: int = 1, scale: float = 1.0) -> ConvolutionPlan:
    if kernel.decay is None:
        raise NonDecayingKernel("kernel carries no decay metadata")
    if not tol > 0.0:
        raise TolUnachievable(f"tolerance must be positive, got {tol!r}")

    def bound(r):
        return tail_bound(kernel, beta, r, growth, scale)

    lo = kernel.half_width
    if bound(lo) <= tol:
        return ConvolutionPlan(kernel, tol, lo, bound(lo))
    hi = max(lo, 1)
    while bound(hi) > tol:
        if hi >= MAX_RADIUS:
            raise TolUnachievable(f"tail bound stays above {tol!r} up to radius {MAX_RADIUS}")
        lo, hi = hi, min(2 * hi, MAX_RADIUS)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return ConvolutionPlan(kernel, tol, hi, bound(hi))


def _outside_in(radius: int) -> np.ndarray:
    # -R, R, -(R-1), R-1, ..., -1, 1, 0: smallest kernel terms first
    order = np.empty(2 * radius + 1, dtype=np.int64)
    mags = np.arange(radius, 0, -1)
    order[0:-1:2] = -mags
    order[1:-1:2] = mags
    order[-1] = 0
    return order


def _dot_at(kernel_vals: np.ndarray, gammas: np.ndarray, f: LatticeEvaluator, beta: int, tol: float) -> float:
    fvals = np.array([f(int(beta - g)) for g in gammas], dtype=np.float64)
    value = _accel.neumaier_dot(kernel_vals, fvals)
    floor = ROUNDING_FLOOR * float(np.sum(np.abs(kernel_vals * fvals)))
    if tol < floor:
        raise TolUnachievable(f"tolerance {tol!r} is below the rounding floor {floor:.3e} of this sum")
    return value


def convolve_at(
    kernel: LatticeFunction,
    f: LatticeEvaluator,
    beta: int,
    tol: float,
    growth: int = 1,
    scale: float = 1.0,
) -> tuple[float, ConvolutionPlan]:
    """``sum_gamma kernel(gamma) f(beta - gamma)`` with truncation error below ``tol``."""
    plan = plan_radius(kernel, beta, tol, growth, scale)
    gammas = _outside_in(plan.radius_used)
    kvals = np.array([kernel(int(g)) for g in gammas], dtype=np.float64)
    return _dot_at(kvals, gammas, f, beta, tol), plan


def convolve_window(
    kernel: LatticeFunction,
    f: LatticeEvaluator,
    lo: int,
    hi: int,
    tol: float,
    growth: int = 1,
    scale: float = 1.0,
) -> tuple[LatticeFunction, ConvolutionPlan]:
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    # the tail envelope grows with |beta|, so the widest point sets one plan for all
    worst = lo if abs(lo) > abs(hi) else hi
    plan = plan_radius(kernel, worst, tol, growth, scale)
    gammas = _outside_in(plan.radius_used)
    kvals = np.array([kernel(int(g)) for g in gammas], dtype=np.float64)
    values = np.array([_dot_at(kvals, gammas, f, b, tol) for b in range(lo, hi + 1)])
    out = LatticeFunction(h=kernel.h, lo=lo, hi=hi, values=values, symmetry="none")
    return out, plan
