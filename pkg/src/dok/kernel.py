"""Lattice kernels: the discrete Green's function G[beta] and the operator D[beta]."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np

from .errors import RadiusTooSmall, TooCloseToOrigin
from .params import OperatorParams, StepLike, as_step, sin_minus_xcos

_ODE_DPS = 40


def eval_G_continuous(x: float) -> float:
    """``sign(x)/4 * (sin x - x cos x)``; even in ``x`` and 0 at the origin."""
    if x == 0.0:
        return 0.0
    # sign(x) * (sin x - x cos x) is even, so evaluate at |x|
    return 0.25 * sin_minus_xcos(abs(x))[0]


def eval_G_discrete(h: StepLike, beta: int) -> float:
    return eval_G_continuous(as_step(h).h * beta)


def eval_D(params: OperatorParams, beta: int) -> float:
    n = abs(int(beta))
    if n >= 2:
        return (params.k * params.a1) * params.lambda1 ** (n - 1)
    if n == 1:
        return params.k * (1.0 + params.a1)
    return params.k * (params.centre_term + params.a1 / params.lambda1)


@dataclass(frozen=True)
class LatticeFunction:
    """Values on ``lo..hi`` with an optional geometric continuation.

    ``decay`` is the magnitude of the tail ratio; the sign of the ratio on
    each side is read off the last two stored values, so
    ``value(hi + k) == value(hi) * ratio**k``.
    """

    h: float
    lo: int
    hi: int
    values: np.ndarray = field(repr=False)
    symmetry: str = "none"
    decay: float | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.hi - self.lo + 1,):
            raise ValueError("values do not match the window")
        if self.symmetry not in ("even", "odd", "none"):
            raise ValueError(f"unknown symmetry {self.symmetry!r}")
        if self.decay is not None and not 0.0 <= self.decay < 1.0:
            raise ValueError(f"decay must lie in [0, 1), got {self.decay!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def betas(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def half_width(self) -> int:
        return max(abs(self.lo), abs(self.hi))

    def _edge_ratio(self, side: int) -> float:
        if self.decay is None:
            return 0.0
        if self.hi == self.lo:
            return self.decay
        outer, inner = (self.values[-1], self.values[-2]) if side > 0 else (self.values[0], self.values[1])
        if outer == 0.0 or inner == 0.0:
            return self.decay
        return math.copysign(self.decay, outer * inner)

    def __call__(self, beta: int) -> float:
        if self.lo <= beta <= self.hi:
            return float(self.values[beta - self.lo])
        if self.decay is None:
            return 0.0
        if beta > self.hi:
            return float(self.values[-1]) * self._edge_ratio(+1) ** (beta - self.hi)
        return float(self.values[0]) * self._edge_ratio(-1) ** (self.lo - beta)

    def extended(self, lo: int, hi: int) -> np.ndarray:
        """Values on ``lo..hi``, continuing geometrically outside the window."""
        return np.array([self(b) for b in range(lo, hi + 1)], dtype=np.float64)

    def as_rows(self):
        return list(zip(self.betas.tolist(), self.values.tolist()))


def delta_lattice(h: float = 1.0) -> LatticeFunction:
    return LatticeFunction(h=h, lo=0, hi=0, values=np.array([1.0]), symmetry="even", decay=0.0)


def sample_D(params: OperatorParams, radius: int) -> LatticeFunction:
    if radius < 2:
        raise RadiusTooSmall(f"radius must be at least 2, got {radius}")
    core = [eval_D(params, b) for b in range(0, radius + 1)]
    values = np.array(core[:0:-1] + core, dtype=np.float64)
    return LatticeFunction(
        h=params.h, lo=-radius, hi=radius, values=values, symmetry="even", decay=abs(params.lambda1)
    )


def sample_G(h: StepLike, lo: int, hi: int) -> LatticeFunction:
    step = as_step(h)
    values = np.array([eval_G_discrete(step, b) for b in range(lo, hi + 1)])
    symmetry = "even" if lo == -hi else "none"
    return LatticeFunction(h=step.h, lo=lo, hi=hi, values=values, symmetry=symmetry)


def _G_mp(x):
    return mpmath.sign(x) * (mpmath.sin(x) - x * mpmath.cos(x)) / 4


def ode_residual(x: float, step: float, func: Callable | None = None) -> float:
    """Central-difference value of ``f'''' + 2 f'' + f`` at ``x``.

    Stencil values are taken in 40-digit arithmetic: at ``step ~ 1e-3`` the
    1/step**4 amplification would otherwise bury the O(step**2) truncation
    error under binary64 rounding. ``func`` must accept mpmath numbers; it
    defaults to the continuous Green's function.
    """
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    if abs(x) <= 10.0 * step:
        raise TooCloseToOrigin(f"|x| = {abs(x)!r} must exceed 10*step = {10.0 * step!r}")
    f = _G_mp if func is None else func
    with mpmath.workdps(_ODE_DPS):
        xm = mpmath.mpf(x)
        s = mpmath.mpf(step)
        fm2, fm1, f0, fp1, fp2 = (f(xm + k * s) for k in (-2, -1, 0, 1, 2))
        d4 = (fm2 - 4 * fm1 + 6 * f0 - 4 * fp1 + fp2) / s**4
        d2 = (fm1 - 2 * f0 + fp1) / s**2
        return float(d4 + 2 * d2 + f0)
