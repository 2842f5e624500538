"""Fourier-side view of the operator, used as an independent oracle for D[beta].

With ``lam = exp(2 pi i p h)`` the symbol is the rational function::

    (2/d) * (lam^4 - 4 cos h lam^3 + (2 cos 2h + 4) lam^2 - 4 cos h lam + 1)
          / (lam * (lam^2 + c lam + 1))

whose Laurent coefficients are the kernel values. The same function is also
the reciprocal of a lattice sum over the two double poles ``h (p +- 1/2pi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import InconsistentA1, PoleProximity
from .params import OperatorParams, StepLike, as_step

DEFAULT_NODES = 2**14
MAX_NODES = 2**20
NODE_AGREEMENT = 1e-10
IMAG_TOL = 1e-9
POLE_GAP = 1e-8


@dataclass(frozen=True)
class SymbolValue:
    p: float
    lam: complex
    value: complex


@dataclass(frozen=True)
class PartialFractions:
    a: float
    a1: float
    b1: float
    lambda1: float
    lambda2: float
    linear_term: float


def _numerator(params: OperatorParams, lam):
    # (lam^2 - 2 cos h lam + 1)^2 expanded as printed
    ch = math.cos(params.h)
    c2h = math.cos(2.0 * params.h)
    return (((lam - 4.0 * ch) * lam + (2.0 * c2h + 4.0)) * lam - 4.0 * ch) * lam + 1.0


def _unit_point(params: OperatorParams, p):
    return np.exp(2j * np.pi * np.asarray(p, dtype=np.float64) * params.h)


def symbol_closed_values(params: OperatorParams, p) -> np.ndarray:
    """Vectorised closed-form symbol on an array of frequencies.

    On the unit circle the quartic numerator is ``lam^2 (2 cos t - 2 cos h)^2``
    and ``lam Q2(lam) = lam^2 (2 cos t + c)`` with ``t = 2 pi p h``. The
    difference of cosines is taken as a product of half-angle sines so the
    double zeros at ``t = +-h`` keep full relative accuracy.
    """
    x = params.h
    theta = 2.0 * np.pi * np.asarray(p, dtype=np.float64) * x
    # theta - h == h (2 pi p - 1), which avoids rounding theta first
    gap = x * (2.0 * np.pi * np.asarray(p, dtype=np.float64) - 1.0)
    cos_diff = -2.0 * np.sin(0.5 * (theta + x)) * np.sin(0.5 * gap)
    real = params.k * 4.0 * cos_diff**2 / (2.0 * np.cos(theta) + params.c)
    return real.astype(np.complex128)


def symbol_expanded_values(params: OperatorParams, p) -> np.ndarray:
    """The symbol with the quartic numerator evaluated term by term."""
    lam = _unit_point(params, p)
    return params.k * _numerator(params, lam) / (lam * params.q2(lam))


def symbol_closed(params: OperatorParams, p: float) -> SymbolValue:
    lam = complex(_unit_point(params, p))
    return SymbolValue(p=float(p), lam=lam, value=complex(symbol_closed_values(params, p)))


def symbol_series(h: StepLike, p: float, terms: int) -> complex:
    """Reciprocal lattice sum with ``|beta| <= terms``."""
    if terms < 1:
        raise ValueError(f"terms must be at least 1, got {terms}")
    x = as_step(h).h
    shift = 1.0 / (2.0 * math.pi)
    z1 = x * (p + shift)
    z2 = x * (p - shift)
    for z in (z1, z2):
        if abs(z - round(z)) < POLE_GAP:
            raise PoleProximity(f"pole {z!r} lies within {POLE_GAP} of an integer")
    total = _accel.pole_series(z1, z2, int(terms))
    return complex((2.0 * math.pi) ** 4 / x**3 / total)


def fourier_coefficient(params: OperatorParams, beta: int, nodes: int = DEFAULT_NODES) -> float:
    """Kernel value recovered as a Fourier coefficient of the closed symbol.

    The frequency integral over one period ``[0, 1/h)`` is taken by the
    trapezoid rule; the node count doubles until two successive answers agree.
    """
    if nodes < 64:
        raise ValueError(f"need at least 64 nodes, got {nodes}")
    previous = _trapezoid_coefficient(params, beta, nodes)
    while nodes < MAX_NODES:
        nodes *= 2
        current = _trapezoid_coefficient(params, beta, nodes)
        if abs(current - previous) <= NODE_AGREEMENT * max(1.0, abs(current)):
            return current
        previous = current
    return previous


def _trapezoid_coefficient(params: OperatorParams, beta: int, nodes: int) -> float:
    j = np.arange(nodes)
    p = j / (nodes * params.h)
    # the periodic trapezoid sum reduces to a plain mean
    phase = np.exp(-2j * np.pi * ((j * int(beta)) % nodes) / nodes)
    value = np.mean(symbol_closed_values(params, p) * phase)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise AssertionError(f"symbol quadrature has imaginary part {value.imag!r} at beta={beta}")
    return float(value.real)


def partial_fractions(params: OperatorParams, rtol: float = 1e-10) -> PartialFractions:
    # A: residue of numerator / (lam Q2) at lam = 0
    a = _numerator(params, 0.0) / params.q2(0.0)
    l1 = params.lambda1
    a1 = _numerator(params, l1) / (l1 * l1 - 1.0)
    if abs(a1 - params.a1) > rtol * abs(params.a1):
        raise InconsistentA1(f"A1 from the residue ({a1!r}) differs from the closed form ({params.a1!r})")
    return PartialFractions(
        a=a,
        a1=a1,
        b1=-a1 / (l1 * l1),
        lambda1=l1,
        lambda2=params.lambda2,
        linear_term=params.centre_term,
    )


def reconstruct_symbol(pf: PartialFractions, params: OperatorParams, p) -> complex:
    lam = _unit_point(params, p)
    body = lam + pf.linear_term + pf.a / lam + pf.a1 / (lam - pf.lambda1) + pf.b1 / (lam - pf.lambda2)
    out = params.k * body
    return complex(out) if np.ndim(out) == 0 else out

