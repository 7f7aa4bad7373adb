"""Globally adaptive Gauss-Legendre quadrature on an interval."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    panels: int


@lru_cache(maxsize=8)
def _rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel(f, a, b, order):
    x, w = _rule(order)
    h = 0.5 * (b - a)
    return h * float(np.dot(w, f(0.5 * (a + b) + h * x)))


def adaptive_gauss_legendre(
    f,
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-13,
    order: int = 20,
    max_panels: int = 2**14,
) -> QuadResult:
    """Integrate a vectorized ``f`` over [a, b].

    Each panel is estimated with an ``order``-point rule and with the same
    rule on its two halves; the difference is the panel's error estimate.
    The panel with the largest error is bisected until the summed error is
    below ``max(abs_tol, rel_tol * |I|)``.
    """

    def estimate(lo, hi):
        mid = 0.5 * (lo + hi)
        whole = _panel(f, lo, hi, order)
        halves = _panel(f, lo, mid, order) + _panel(f, mid, hi, order)
        return halves, abs(halves - whole)

    val, err = estimate(a, b)
    heap = [(-err, a, b, val)]
    total_val, total_err = val, err
    while total_err > max(abs_tol, rel_tol * abs(total_val)):
        if len(heap) >= max_panels:
            raise ConvergenceError(
                f"quadrature hit {max_panels} panels with error {total_err:.3e}", achieved=total_err
            )
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = estimate(lo, mid)
        v2, e2 = estimate(mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total_val += v1 + v2 - v
        total_err += e1 + e2 + neg_err
    # re-sum to shed the drift of the running updates
    total_val = float(sum(item[3] for item in sorted(heap, key=lambda t: t[1])))
    total_err = float(sum(-item[0] for item in heap))
    return QuadResult(total_val, total_err, len(heap))
