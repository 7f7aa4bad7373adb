"""The operator M_m: the product, over all m-element index subsets, of the
corresponding eigenvalue sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import NotAdmissibleError, PreconditionError
from .symfunc import Scalar, SpectrumLike, as_spectrum, sigma_all


@dataclass(frozen=True)
class MmValue:
    value: Scalar
    m: int
    n: int
    subset_count: int
    # natural log of the value when every factor is positive, else None
    log_value: Optional[float] = None
    overflow: bool = False


def subset_sums(s: SpectrumLike, m: int) -> list:
    """All m-subset sums, lexicographic over the sorted coordinates."""
    s = as_spectrum(s)
    if not 1 <= m <= s.n:
        raise PreconditionError(f"order m={m} outside 1..{s.n}")
    zero = Fraction(0) if s.is_exact else 0.0
    return [sum(c, zero) for c in combinations(s.values, m)]


def mm_eval(s: SpectrumLike, m: int) -> MmValue:
    s = as_spectrum(s)
    factors = subset_sums(s, m)
    count = len(factors)
    value = Fraction(1) if s.is_exact else 1.0
    for f in factors:
        value = value * f
    log_value = None
    if all(f > 0 for f in factors):
        log_value = math.fsum(math.log(f) for f in factors)
    overflow = (not s.is_exact) and not math.isfinite(value)
    return MmValue(value, m, s.n, count, log_value, overflow)


def _exact_root(x: Fraction, q: int) -> Optional[Fraction]:
    """The rational q-th root of x >= 0 if it exists."""

    def iroot(a: int) -> Optional[int]:
        r = _int_root(a, q)
        return r if r**q == a else None

    num, den = iroot(x.numerator), iroot(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(a: int, q: int) -> int:
    lo, hi = 0, 1 << (a.bit_length() // q + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**q <= a:
            lo = mid
        else:
            hi = mid - 1
    return lo


def mm_alpha(s: SpectrumLike, m: int, alpha) -> Scalar:
    """M_m(s) ** alpha for a rational exponent alpha >= 0.

    Exact when the spectrum is exact and the power is rational (integer
    alpha, or a perfect root); otherwise a float from the factor log-sum.
    """
    alpha = Fraction(alpha) if not isinstance(alpha, float) else Fraction(alpha).limit_denominator(10**12)
    if alpha < 0:
        raise PreconditionError("exponent alpha must be nonnegative")
    s = as_spectrum(s)
    factors = subset_sums(s, m)
    if any(f < 0 for f in factors):
        raise NotAdmissibleError("negative m-subset sum: M_m^alpha is undefined off the m-psh class")
    mv = mm_eval(s, m)
    if alpha == 0:
        return Fraction(1) if s.is_exact else 1.0
    if mv.value == 0:
        return Fraction(0) if s.is_exact else 0.0
    if s.is_exact:
        powered = mv.value**alpha.numerator
        root = _exact_root(powered, alpha.denominator)
        if root is not None:
            return root
    return math.exp(float(alpha) * mv.log_value)


@dataclass(frozen=True)
class IdentityReport:
    m1: Scalar
    sigma_n: Scalar
    mn: Scalar
    sigma_1: Scalar
    # n = 3 only: (M_2, sigma_1 sigma_2 - sigma_3)
    m2_n3: Optional[tuple]
    ok: bool


def special_identity_check(s: SpectrumLike, tol: float = 1e-12) -> IdentityReport:
    """M_1 = sigma_n, M_n = sigma_1 and, for n = 3, M_2 = sigma_1 sigma_2 - sigma_3."""
    s = as_spectrum(s)
    e = sigma_all(s).sigmas
    n = s.n

    def same(a, b):
        if s.is_exact:
            return a == b
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))

    m1 = mm_eval(s, 1).value
    mn = mm_eval(s, n).value
    ok = same(m1, e[n]) and same(mn, e[1])
    m2 = None
    if n == 3:
        m2 = (mm_eval(s, 2).value, e[1] * e[2] - e[3])
        ok = ok and same(*m2)
    return IdentityReport(m1, e[n], mn, e[1], m2, ok)
