"""Cone membership and the A- versus B-k-subharmonic classification.

Conventions at a single point, with ``lam`` the sorted Hessian spectrum in
dimension n and 1 <= k <= n:

* k-psh:  every k-subset sum of ``lam`` is >= 0,
* A-k:    k-psh and sigma_{n-k+1}(lam) >= 0,
* B-k:    lam in the closed cone Gamma_{n-k+1}, i.e. (n-k+1)-subharmonic.

All class tests are closed (``>= 0``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInvariantError, PreconditionError
from .symfunc import (
    DEFAULT_TOL,
    Scalar,
    Spectrum,
    SpectrumLike,
    abs_sigmas,
    as_spectrum,
    nonneg,
    sigma_all,
)


@dataclass(frozen=True)
class ConeVerdict:
    member: bool
    margin: Scalar
    binding: str


@dataclass(frozen=True)
class Classification:
    is_k_psh: bool
    is_A: bool
    is_B: bool
    k: int
    n: int
    ksubset_sum: Scalar
    sigma_top: Scalar
    b_verdict: ConeVerdict


def ksubset_min_sum(s: SpectrumLike, k: int) -> Scalar:
    """Smallest sum over k-element subsets: the sum of the k smallest entries."""
    s = as_spectrum(s)
    if not 1 <= k <= s.n:
        raise PreconditionError(f"subset size k={k} outside 1..{s.n}")
    return sum(s.values[:k], Fraction(0) if s.is_exact else 0.0)


def gamma_membership(s: SpectrumLike, m: int, closed: bool = True, tol: float = DEFAULT_TOL) -> ConeVerdict:
    s = as_spectrum(s)
    if not 1 <= m <= s.n:
        raise PreconditionError(f"cone order m={m} outside 1..{s.n}")
    S = sigma_all(s).normalized
    e = sigma_all(s).sigmas
    ea = abs_sigmas(s)
    j_min = min(range(1, m + 1), key=lambda j: S[j])
    member = True
    for j in range(1, m + 1):
        if closed:
            ok = nonneg(e[j], ea[j], s.is_exact, tol)
        elif s.is_exact:
            ok = e[j] > 0
        else:
            ok = e[j] > tol * ea[j]
        if not ok:
            member = False
            break
    return ConeVerdict(member, S[j_min], f"sigma_{j_min}")


def _classify(s: Spectrum, k: int, tol: float) -> Classification:
    n = s.n
    top = n - k + 1
    ksum = ksubset_min_sum(s, k)
    scale = sum(abs(v) for v in s.values[:k])
    is_kpsh = nonneg(ksum, scale, s.is_exact, tol)
    e = sigma_all(s).sigmas
    ea = abs_sigmas(s)
    is_a = is_kpsh and nonneg(e[top], ea[top], s.is_exact, tol)
    if s.values[0] >= 0:
        b = ConeVerdict(True, min(sigma_all(s).normalized[1 : top + 1]), "all eigenvalues nonnegative")
    else:
        b = gamma_membership(s, top, closed=True, tol=tol)
    return Classification(is_kpsh, is_a, b.member, k, n, ksum, e[top], b)


def classify(s: SpectrumLike, k: int, tol: float = DEFAULT_TOL) -> Classification:
    """Classify a spectrum as k-psh / A-k / B-k.

    A float spectrum whose tolerant verdicts break the inclusion B => A (which
    can only happen within ``tol`` of a boundary) is re-classified exactly
    from the binary values of its entries.
    """
    s = as_spectrum(s)
    if not 1 <= k <= s.n:
        raise PreconditionError(f"plane dimension k={k} outside 1..{s.n}")
    c = _classify(s, k, tol)
    if c.is_B and not c.is_A:
        if not s.is_exact:
            return _classify(s.as_exact(), k, tol)
        raise InternalInvariantError(f"B-{k} spectrum failed the A-{k} test: {s.values}")
    return c


def negative_split(s: SpectrumLike):
    """(strictly negative entries, nonnegative entries, count of negatives), as sorted tuples."""
    s = as_spectrum(s)
    alpha = tuple(v for v in s.values if v < 0)
    beta = tuple(v for v in s.values if v >= 0)
    return alpha, beta, len(alpha)


def theorem1_ratio(p: int, k: int, n: int) -> Fraction:
    """(k-p)(p+1) / ((n-k)(k-p-1)p).

    Here ``p`` counts the negative eigenvalues *other than* the smallest one
    (normalized to -1), so a spectrum with p+1 negative entries.  The
    admissible range is 1 <= p <= k-2, k <= n-2.
    """
    if not (1 <= p <= k - 2 and k <= n - 2):
        raise PreconditionError(f"(p, k, n) = ({p}, {k}, {n}) outside 1 <= p <= k-2, k <= n-2")
    return Fraction((k - p) * (p + 1), (n - k) * (k - p - 1) * p)


@dataclass(frozen=True)
class SweepRow:
    p: int
    k: int
    n: int
    ratio: Fraction
    passes: bool


def theorem1_sweep(n_max: int) -> list[SweepRow]:
    """All admissible triples with n <= n_max, ordered by (n, k, p)."""
    rows = []
    for n in range(1, n_max + 1):
        for k in range(3, n - 1):
            for p in range(1, k - 1):
                r = theorem1_ratio(p, k, n)
                rows.append(SweepRow(p, k, n, r, r >= 1))
    return rows


def sigma_chain_check(gamma: SpectrumLike, k: int, tol: float = DEFAULT_TOL) -> bool:
    """Check sigma_j(gamma) >= sigma_{j-1}(gamma) for j = 1..n-k+1.

    ``gamma`` is the spectrum with the smallest eigenvalue (-1) removed, so
    the ambient dimension is n = len(gamma) + 1.  Requires gamma in the closed
    cone Gamma_{n-k} and sigma_{n-k+1}(gamma) >= sigma_{n-k}(gamma).
    """
    g = as_spectrum(gamma)
    n = g.n + 1
    if not 2 <= k <= n - 1:
        raise PreconditionError(f"k={k} outside 2..{n - 1} for n={n}")
    e = sigma_all(g).sigmas
    ea = abs_sigmas(g)
    if not gamma_membership(g, n - k, closed=True, tol=tol).member:
        raise PreconditionError(f"gamma is not in the closed cone Gamma_{n - k}")

    def ge(j):
        return nonneg(e[j] - e[j - 1], max(ea[j], ea[j - 1]), g.is_exact, tol)

    if not ge(n - k + 1):
        raise PreconditionError(f"sigma_{n - k + 1}(gamma) < sigma_{n - k}(gamma)")
    return all(ge(j) for j in range(1, n - k + 2))
