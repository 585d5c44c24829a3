"""Adaptive Gauss-Legendre quadrature, used as an independent oracle for mu."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import ToleranceNotMet

_ORDER = 10
_NODES, _WEIGHTS = (list(map(float, a)) for a in np.polynomial.legendre.leggauss(_ORDER))


def _rule(f: Callable[[float], float], a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * math.fsum(w * f(mid + half * x) for x, w in zip(_NODES, _WEIGHTS))


def adaptive_integrate(
    f: Callable[[float], float], a: float, b: float, abs_tol: float, budget: int = 10**6
) -> tuple[float, int]:
    """Integrate ``f`` over ``[a, b]`` to absolute error about ``abs_tol``.

    Each panel is compared against its two halves; panels that disagree by
    more than their share of the tolerance are bisected. Returns the value
    and the number of function evaluations used.
    """
    if b == a:
        return 0.0, 0
    evals = _ORDER
    pieces: list[float] = []
    stack = [(a, b, _rule(f, a, b), abs_tol)]
    while stack:
        lo, hi, whole, tol = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _rule(f, lo, mid)
        right = _rule(f, mid, hi)
        evals += 2 * _ORDER
        if evals > budget:
            raise ToleranceNotMet(f"quadrature budget of {budget} evaluations exhausted")
        if abs(left + right - whole) <= tol or not lo < mid < hi:
            pieces.append(left + right)
        else:
            stack.append((lo, mid, left, tol / 2))
            stack.append((mid, hi, right, tol / 2))
    return math.fsum(pieces), evals
