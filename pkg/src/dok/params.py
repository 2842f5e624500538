"""Scalar constants of the discrete operator, evaluated without cancellation.

Three differences appear throughout the construction and all of them cancel
catastrophically for small arguments::

    sin h - h cos h      ~ h^3/3
    h^2 - sin^2 h        ~ h^4/3
    2h - sin 2h          ~ 4h^3/3

Below ``SERIES_THRESHOLD`` each is summed from its Taylor series instead.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import BranchMismatch, DegenerateRoots, InvalidStepSize

SERIES_THRESHOLD = 0.25
_EPS = 2.0 ** -52
_SERIES_STOP = 1e-2 * _EPS
_MAX_SERIES_TERMS = 200
BRANCH_AGREEMENT = 1e-10


@dataclass(frozen=True)
class StepSize:
    """Lattice step ``h``; ``n`` is set when ``h = 1/n``.

    ``label`` keeps the spelling the caller used ("0.1", "1/20") so tables
    can echo it back verbatim.
    """

    h: float
    n: int | None = None
    label: str | None = None

    def __post_init__(self):
        h = self.h
        if isinstance(h, bool) or not isinstance(h, (int, float)):
            raise InvalidStepSize(f"step must be a real number, got {h!r}")
        if not math.isfinite(h) or h <= 0.0:
            raise InvalidStepSize(f"step must be positive and finite, got {h!r}")
        if h >= math.pi:
            raise InvalidStepSize(f"step must be below pi, got {h!r}")
        if self.n is not None and (self.n < 1 or 1.0 / self.n != h):
            raise InvalidStepSize(f"h={h!r} is not 1/{self.n}")
        object.__setattr__(self, "h", float(h))
        if self.label is None:
            object.__setattr__(self, "label", repr(float(h)) if self.n is None else f"1/{self.n}")

    @classmethod
    def from_n(cls, n: int) -> StepSize:
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise InvalidStepSize(f"N must be a positive integer, got {n!r}")
        return cls(1.0 / n, n=n, label=f"1/{n}")

    @classmethod
    def parse(cls, text: str) -> StepSize:
        """Accept ``"0.05"`` or ``"1/20"``."""
        raw = text.strip()
        try:
            if "/" in raw:
                num, den = raw.split("/", 1)
                frac = Fraction(int(num), int(den))
                if frac.numerator == 1:
                    return cls(1.0 / frac.denominator, n=frac.denominator, label=raw)
                return cls(float(frac), label=raw)
            value = float(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidStepSize(f"cannot parse step {text!r}") from exc
        return cls(value, label=raw)

    @property
    def nominal(self) -> bool:
        """True inside the supported window 0 < h <= 1."""
        return self.h <= 1.0


StepLike = Union[StepSize, float, int]


def as_step(h: StepLike) -> StepSize:
    return h if isinstance(h, StepSize) else StepSize(h)


def _strict_mode() -> bool:
    return os.environ.get("DOK_PRECISION_MODE", "fast").strip().lower() == "strict"


def _sum_series(first: float, ratio) -> float:
    """Sum an alternating series given its first term and term ratio ``ratio(k)``."""
    total = first
    term = first
    for k in range(1, _MAX_SERIES_TERMS):
        term = term * ratio(k)
        total += term
        if abs(term) <= _SERIES_STOP * abs(total):
            break
    return total


def _d_series(h: float) -> float:
    # sum_{k>=1} (-1)^(k+1) 2k h^(2k+1) / (2k+1)!
    h2 = h * h
    return _sum_series(h * h2 / 3.0, lambda k: -h2 * (k + 1) / (k * (2 * k + 2) * (2 * k + 3)))


def _s_series(h: float) -> float:
    # sum_{k>=2} (-1)^k 2^(2k-1) h^(2k) / (2k)!
    h2 = h * h
    return _sum_series(h2 * h2 / 3.0, lambda k: -4.0 * h2 / ((2 * k + 3) * (2 * k + 4)))


def _w_series(h: float) -> float:
    # 2h - sin 2h = sum_{k>=1} (-1)^(k+1) x^(2k+1)/(2k+1)!, x = 2h
    x = 2.0 * h
    x2 = x * x
    return _sum_series(x * x2 / 6.0, lambda k: -x2 / ((2 * k + 2) * (2 * k + 3)))


def _d_direct(h: float) -> float:
    return math.sin(h) - h * math.cos(h)


def _s_direct(h: float) -> float:
    sh = math.sin(h)
    return (h - sh) * (h + sh)


def _w_direct(h: float) -> float:
    return 2.0 * h - math.sin(2.0 * h)


def _branched(name, h, direct, series, threshold=SERIES_THRESHOLD):
    use_series = h < threshold
    value = series(h) if use_series else direct(h)
    if _strict_mode() and threshold / 2 <= h <= 2 * threshold:
        other = direct(h) if use_series else series(h)
        if abs(other - value) > BRANCH_AGREEMENT * abs(value):
            raise BranchMismatch(f"{name}({h!r}): direct and series differ ({value!r} vs {other!r})")
    return value, ("series" if use_series else "direct")


def sin_minus_xcos(x: float) -> tuple[float, str]:
    """``sin x - x cos x`` for ``x >= 0`` plus the branch that produced it."""
    return _branched("sin_minus_xcos", x, _d_direct, _d_series)


def stable_d(h: StepLike) -> float:
    """``sin h - h cos h`` to ~1e-13 relative accuracy."""
    return sin_minus_xcos(as_step(h).h)[0]


def stable_s(h: StepLike) -> float:
    """``h**2 - sin(h)**2`` to ~1e-13 relative accuracy."""
    return _branched("stable_s", as_step(h).h, _s_direct, _s_series)[0]


def stable_w(h: StepLike) -> float:
    """``2h - sin 2h``."""
    return _branched("stable_w", as_step(h).h, _w_direct, _w_series)[0]


@dataclass(frozen=True)
class OperatorParams:
    h: float
    d: float
    s: float
    lambda1: float
    lambda2: float
    a1: float
    b1: float
    k: float
    c: float
    branch: str
    step: StepSize

    @property
    def centre_term(self) -> float:
        """``(2h cos 2h - sin 2h) / (sin h - h cos h)``, the constant of the partial fractions."""
        # 2h cos 2h - sin 2h == -(sin x - x cos x) at x = 2h
        return -sin_minus_xcos(2.0 * self.h)[0] / self.d

    def q2(self, lam):
        return lam * lam + self.c * lam + 1.0

    def as_dict(self) -> dict:
        return {
            "h": self.step.label,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "A1": self.a1,
            "B1": self.b1,
            "K": self.k,
            "c": self.c,
            "branch": self.branch,
        }


def compute_params(h: StepLike) -> OperatorParams:
    step = as_step(h)
    x = step.h
    d, branch = sin_minus_xcos(x)
    s = stable_s(step)
    w = stable_w(step)
    c = w / d
    # c^2/4 - 1 == sin^2 h * s / d^2, so the discriminant never cancels
    half_gap = math.sin(x) * math.sqrt(s) / d
    big = -0.5 * c - math.copysign(half_gap, c)
    small = 1.0 / big
    lambda1, lambda2 = (small, big) if abs(small) < abs(big) else (big, small)
    if abs(lambda1) >= 1.0 - 1e-12:
        raise DegenerateRoots(f"|lambda1| = {abs(lambda1)!r} is not below 1 at h={x!r}")
    sin2 = math.sin(x) ** 2
    l1sq = lambda1 * lambda1
    a1 = 4.0 * x * x * sin2 * sin2 * l1sq / ((l1sq - 1.0) * d * d)
    return OperatorParams(
        h=x,
        d=d,
        s=s,
        lambda1=lambda1,
        lambda2=lambda2,
        a1=a1,
        b1=-a1 / l1sq,
        k=2.0 / d,
        c=c,
        branch=branch,
        step=step,
    )
