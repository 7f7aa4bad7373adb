"""Elementary symmetric polynomials of eigenvalue vectors and the classical
inequalities between them.

All routines are generic over two scalar backends:

* exact: :class:`fractions.Fraction` (ints and ``"p/q"`` strings are promoted),
* float: Python ``float``.

A :class:`Spectrum` picks its backend from its inputs; inequality checks are
exact on the first and use a relative tolerance (default ``1e-9``) on the
second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence, Union

from .errors import PreconditionError

Scalar = Union[Fraction, float]

DEFAULT_TOL = 1e-9


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, Rational):
        return Fraction(int(v.numerator), int(v.denominator))
    # floats are dyadic rationals; the conversion is exact
    return Fraction(float(v))


def _is_exact_input(v) -> bool:
    return isinstance(v, (Fraction, str)) or (isinstance(v, Rational) and not isinstance(v, bool))


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues, stored in ascending order.

    Exact if every input is an int, ``Fraction`` or rational string;
    otherwise every entry is converted to ``float``.
    """

    values: tuple

    def __post_init__(self):
        vals = list(self.values)
        if not vals:
            raise PreconditionError("a spectrum needs at least one eigenvalue")
        if all(_is_exact_input(v) for v in vals):
            vals = [_to_fraction(v) for v in vals]
        else:
            vals = [float(v) for v in vals]
            if any(math.isnan(v) for v in vals):
                raise PreconditionError("NaN eigenvalue")
        object.__setattr__(self, "values", tuple(sorted(vals)))

    @classmethod
    def exact(cls, values: Iterable) -> "Spectrum":
        """Build an exact spectrum, converting floats by their exact binary value."""
        return cls(tuple(_to_fraction(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.values[0], Fraction)

    def as_exact(self) -> "Spectrum":
        return self if self.is_exact else Spectrum.exact(self.values)

    def as_float(self) -> "Spectrum":
        return Spectrum(tuple(float(v) for v in self.values)) if self.is_exact else self

    def scaled(self, t) -> "Spectrum":
        if self.is_exact and _is_exact_input(t):
            t = _to_fraction(t)
            return Spectrum(tuple(v * t for v in self.values))
        return Spectrum(tuple(float(v) * float(t) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


SpectrumLike = Union[Spectrum, Sequence]


def as_spectrum(s: SpectrumLike) -> Spectrum:
    return s if isinstance(s, Spectrum) else Spectrum(tuple(s))


def _one(exact: bool) -> Scalar:
    return Fraction(1) if exact else 1.0


def _zero(exact: bool) -> Scalar:
    return Fraction(0) if exact else 0.0


def _sigmas(values: Sequence, exact: bool) -> list:
    """Coefficients of prod_i (1 + v_i t), one pass per value."""
    n = len(values)
    e = [_one(exact)] + [_zero(exact)] * n
    for i, x in enumerate(values):
        for j in range(i + 1, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e


def nonneg(value: Scalar, scale: Scalar, exact: bool, tol: float = DEFAULT_TOL) -> bool:
    """``value >= 0`` exactly, or within ``tol * scale`` in float mode."""
    if exact:
        return value >= 0
    return value >= -tol * float(scale)


@dataclass(frozen=True)
class SigmaTable:
    """sigma_0..sigma_n and their binomial normalizations S_k = sigma_k / C(n, k)."""

    sigmas: tuple
    normalized: tuple

    @property
    def n(self) -> int:
        return len(self.sigmas) - 1

    def __getitem__(self, k: int) -> Scalar:
        return self.sigmas[k]


def sigma_all(s: SpectrumLike) -> SigmaTable:
    return _sigma_table(as_spectrum(s))


# spectra are immutable and hashable; exact tables are costly to rebuild
@lru_cache(maxsize=1024)
def _sigma_table(s: Spectrum) -> SigmaTable:
    exact = s.is_exact
    e = _sigmas(s.values, exact)
    if not exact and not all(math.isfinite(v) for v in e):
        raise OverflowError(f"elementary symmetric polynomials overflow float range for n={s.n}")
    n = s.n
    if exact:
        norm = tuple(e[k] / math.comb(n, k) for k in range(n + 1))
    else:
        norm = tuple(e[k] / float(math.comb(n, k)) for k in range(n + 1))
    return SigmaTable(tuple(e), norm)


def abs_sigmas(s: SpectrumLike) -> tuple:
    """sigma_k of |lambda|: the natural magnitude scale of sigma_k(lambda)."""
    s = as_spectrum(s)
    return tuple(_sigmas([abs(v) for v in s.values], s.is_exact))


def sigma_deflated(s: SpectrumLike, excluded: Iterable[int], j: int) -> Scalar:
    """sigma_j with the coordinates at ``excluded`` (indices into the sorted
    spectrum) replaced by zero."""
    s = as_spectrum(s)
    excluded = list(excluded)
    if len(set(excluded)) != len(excluded):
        raise PreconditionError("excluded indices must be distinct")
    for i in excluded:
        if not 0 <= i < s.n:
            raise IndexError(f"index {i} out of range for n={s.n}")
    if not 0 <= j <= s.n:
        raise PreconditionError(f"degree j={j} outside 0..{s.n}")
    rest = [v for i, v in enumerate(s.values) if i not in set(excluded)]
    if j > len(rest):
        return _zero(s.is_exact)
    return _sigmas(rest, s.is_exact)[j]


def in_closed_gamma(s: SpectrumLike, m: int, tol: float = DEFAULT_TOL) -> bool:
    s = as_spectrum(s)
    e = _sigmas(s.values, s.is_exact)
    ea = abs_sigmas(s)
    return all(nonneg(e[j], ea[j], s.is_exact, tol) for j in range(1, m + 1))


def maclaurin_violation(s: SpectrumLike, m: int, tol: float = DEFAULT_TOL):
    """First pair (j, i), j <= i <= m, with S_j^(1/j) < S_i^(1/i), or ``None``.

    The returned gap is S_i^(1/i) - S_j^(1/j) as a float.  Raises
    :class:`PreconditionError` unless ``s`` lies in the closed cone Gamma_m.
    """
    s = as_spectrum(s)
    if not 1 <= m <= s.n:
        raise PreconditionError(f"cone order m={m} outside 1..{s.n}")
    if not in_closed_gamma(s, m, tol):
        raise PreconditionError("spectrum is not in the cone Gamma_m")
    S = sigma_all(s).normalized
    exact = s.is_exact
    # clamp float noise just below zero; membership was checked above
    roots = [0.0] + [max(float(S[k]), 0.0) ** (1.0 / k) for k in range(1, m + 1)]
    for j in range(1, m + 1):
        for i in range(j + 1, m + 1):
            if exact:
                # S_j^(1/j) >= S_i^(1/i)  <=>  S_j^i >= S_i^j  for S >= 0
                bad = S[j] ** i < S[i] ** j
            else:
                bad = roots[j] < roots[i] - tol * max(1.0, roots[i])
            if bad:
                return (j, i, roots[i] - roots[j])
    return None


def newton_residual(s: SpectrumLike, k: int) -> Scalar:
    """S_k^2 - S_{k-1} S_{k+1}; nonnegative for every real vector."""
    s = as_spectrum(s)
    if not 1 <= k <= s.n - 1:
        raise PreconditionError(f"k={k} outside 1..{s.n - 1}")
    S = sigma_all(s).normalized
    return S[k] * S[k] - S[k - 1] * S[k + 1]


def newton_constant(n: int, j: int) -> Fraction:
    """(n-j+1)(j+1) / ((n-j) j): the factor relating the normalized and the
    plain Newton inequalities.  Defined for 1 <= j <= n-1."""
    if not 1 <= j <= n - 1:
        raise PreconditionError(f"j={j} outside 1..{n - 1}")
    return Fraction((n - j + 1) * (j + 1), (n - j) * j)


def weak_newton_residual(s: SpectrumLike, j: int, k: int | None = None, tol: float = DEFAULT_TOL) -> Scalar:
    """sigma_j^2 - sigma_{j-1} sigma_{j+1} for ``s`` in the closed cone Gamma_k, k > j.

    ``k`` defaults to ``j + 1``, the weakest cone the inequality needs.
    """
    s = as_spectrum(s)
    k = j + 1 if k is None else k
    if not 1 <= j < k <= s.n:
        raise PreconditionError(f"need 1 <= j < k <= n, got j={j}, k={k}, n={s.n}")
    if not in_closed_gamma(s, k, tol):
        raise PreconditionError(f"spectrum is not in the cone Gamma_{k}")
    e = sigma_all(s).sigmas
    return e[j] * e[j] - e[j - 1] * e[j + 1]


def summation_split(s: SpectrumLike, p: int, j: int):
    """(sigma_j(s), sum_i sigma_i(head) sigma_{j-i}(tail)) with head the first
    ``p`` sorted coordinates."""
    s = as_spectrum(s)
    if not 0 <= p <= s.n:
        raise PreconditionError(f"split point p={p} outside 0..{s.n}")
    if not 0 <= j <= s.n:
        raise PreconditionError(f"degree j={j} outside 0..{s.n}")
    exact = s.is_exact
    head = _sigmas(s.values[:p], exact)
    tail = _sigmas(s.values[p:], exact)
    rhs = _zero(exact)
    for i in range(j + 1):
        if i < len(head) and j - i < len(tail):
            rhs = rhs + head[i] * tail[j - i]
    return sigma_all(s).sigmas[j], rhs
