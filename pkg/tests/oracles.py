"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations


def brute_sigma(values, j):
    """sigma_j as the literal sum over all j-subsets of products."""
    zero = Fraction(0) if all(isinstance(v, (int, Fraction)) for v in values) else 0.0
    total = zero
    for c in combinations(values, j):
        total += math.prod(c, start=zero + 1)
    return total


def brute_sigmas(values):
    return [brute_sigma(values, j) for j in range(len(values) + 1)]


def brute_mm(values, m):
    out = 1
    for c in combinations(values, m):
        out *= sum(c)
    return out


def remark_value(dchi1, n, m):
    """int_B M_m^alpha at alpha = 1/C(n-1, m-1) for any radial profile.

    At this exponent M_m^alpha is (m chi')^(C(n-1,m)/C(n-1,m-1)) (m chi' + t chi''),
    and with C(n-1,m)/C(n-1,m-1) = (n-m)/m the radial integrand is an exact
    derivative: the integral is c_{2n-1} (m chi'(1))^(n/m) / (2n).
    """
    area = 2 * math.pi**n / math.factorial(n - 1)
    return area * (m * dchi1) ** (n / m) / (2 * n)


def chi0_closed(n, m, alpha):
    area = 2 * math.pi**n / math.factorial(n - 1)
    return area * m ** (math.comb(n - 1, m) * alpha) * (m + 1) ** (math.comb(n - 1, m - 1) * alpha) / (
        2 * n + 2 * math.comb(n, m) * alpha
    )


def linear_closed(n, m, alpha):
    area = 2 * math.pi**n / math.factorial(n - 1)
    return area * m ** (math.comb(n, m) * alpha) / (2 * n)
