"""Radial test functions u(z) = chi(|z|^2) on the unit ball and the integral
comparison experiments for M_m^alpha.

For a radial u with t = |z|^2 the Hessian spectrum is
(chi'(t) repeated n-1 times, chi'(t) + t chi''(t)), so

    M_m(u) = (m chi')^C(n-1, m) * (m chi' + t chi'')^C(n-1, m-1)

and ball integrals reduce to c_{2n-1} * int_0^1 f(r^2) r^(2n-1) dr with
c_{2n-1} the area of the unit sphere S^(2n-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from . import _kernels
from .errors import InternalInvariantError, NotAdmissibleError, PreconditionError
from .montecarlo import ball_chunks, ball_volume
from .quadrature import adaptive_gauss_legendre
from .symfunc import Spectrum

_PROBE = np.linspace(0.05, 0.95, 10)
_FD_STEP = 1e-4


@dataclass(frozen=True)
class RadialProfile:
    """chi, chi', chi'' as vectorized callables of t = |z|^2 on [0, 1].

    ``monomial = (c, d)`` declares chi'(t) = c t^d exactly, which enables the
    closed-form ball integral.
    """

    name: str
    chi: Callable
    dchi: Callable
    d2chi: Callable
    monomial: Optional[tuple] = None

    def __post_init__(self):
        t, h = _PROBE, _FD_STEP
        fd1 = (self.chi(t + h) - self.chi(t - h)) / (2 * h)
        fd2 = (self.dchi(t + h) - self.dchi(t - h)) / (2 * h)
        d1, d2 = self.dchi(t), self.d2chi(t)
        if np.any(np.abs(fd1 - d1) > 1e-6 * np.maximum(1.0, np.abs(d1))):
            raise PreconditionError(f"profile {self.name!r}: chi' inconsistent with chi")
        if np.any(np.abs(fd2 - d2) > 1e-6 * np.maximum(1.0, np.abs(d2))):
            raise PreconditionError(f"profile {self.name!r}: chi'' inconsistent with chi'")


def _arr(t):
    return np.asarray(t, dtype=np.float64)


def linear_profile() -> RadialProfile:
    """chi(t) = t, i.e. u = |z|^2."""
    return RadialProfile(
        "t",
        lambda t: _arr(t) * 1.0,
        lambda t: np.ones_like(_arr(t)),
        lambda t: np.zeros_like(_arr(t)),
        monomial=(1.0, 0),
    )


def chi_A(A: float) -> RadialProfile:
    """chi_A(t) = ((t+A)^2 / (1+A) - (1+A)) / 2, A >= 0.

    Vanishes at t = 1, chi_A' = (t+A)/(1+A), chi_A'' = 1/(1+A); chi_0 = (t^2-1)/2.
    """
    if A < 0:
        raise PreconditionError("A must be nonnegative")
    A = float(A)
    return RadialProfile(
        f"chi_A(A={A:g})",
        # factored to avoid cancellation at large A
        lambda t: (_arr(t) - 1.0) * (_arr(t) + 1.0 + 2.0 * A) / (2.0 * (1.0 + A)),
        lambda t: (_arr(t) + A) / (1.0 + A),
        lambda t: np.full_like(_arr(t), 1.0 / (1.0 + A)),
        monomial=(1.0, 1) if A == 0 else None,
    )


def polynomial_profile(coeffs: Sequence[float], name: str = "poly") -> RadialProfile:
    """chi(t) = sum_i coeffs[i] t^i."""
    c = np.asarray(coeffs, dtype=np.float64)
    p = np.polynomial.Polynomial(c)
    dp, d2p = p.deriv(1), p.deriv(2)
    nz = np.flatnonzero(c[1:])
    mono = None
    if len(nz) == 1:
        i = int(nz[0]) + 1
        mono = (float(i * c[i]), i - 1)
    return RadialProfile(name, lambda t: p(_arr(t)), lambda t: dp(_arr(t)), lambda t: d2p(_arr(t)), monomial=mono)


def radial_spectrum(p: RadialProfile, t: float, n: int) -> Spectrum:
    if not 0.0 <= t <= 1.0:
        raise PreconditionError(f"t={t} outside [0, 1]")
    d1 = float(p.dchi(t))
    last = d1 + t * float(p.d2chi(t))
    return Spectrum((d1,) * (n - 1) + (last,))


def _factors(p: RadialProfile, t, m: int):
    d1 = np.asarray(p.dchi(t), dtype=np.float64)
    d2 = np.asarray(p.d2chi(t), dtype=np.float64)
    return m * d1, m * d1 + _arr(t) * d2


def mm_radial(p: RadialProfile, t: float, n: int, m: int) -> float:
    if not 1 <= m <= n:
        raise PreconditionError(f"order m={m} outside 1..{n}")
    f1, f2 = (float(v) for v in _factors(p, t, m))
    e1, e2 = math.comb(n - 1, m), math.comb(n - 1, m - 1)
    if (f1 < 0 and e1) or (f2 < 0 and e2):
        raise NotAdmissibleError(f"profile {p.name!r} is not {m}-psh at t={t}", location=t)
    return f1**e1 * f2**e2


def mm_radial_power(p: RadialProfile, t, n: int, m: int, alpha: float) -> np.ndarray:
    """Vectorized M_m(u)^alpha at t = |z|^2."""
    f1, f2 = _factors(p, t, m)
    e1, e2 = math.comb(n - 1, m), math.comb(n - 1, m - 1)
    bad = ((f1 < 0) & (e1 > 0)) | ((f2 < 0) & (e2 > 0))
    if np.any(bad):
        where = float(np.atleast_1d(_arr(t))[np.atleast_1d(bad)][0])
        raise NotAdmissibleError(f"profile {p.name!r} is not {m}-psh at t={where}", location=where)
    with np.errstate(divide="ignore"):
        return np.power(f1, e1 * alpha) * np.power(f2, e2 * alpha)


def sphere_area(n: int) -> float:
    """Area of the unit sphere S^(2n-1) in C^n: 2 pi^n / (n-1)!."""
    if n < 1:
        raise PreconditionError("dimension must be >= 1")
    return 2.0 * math.pi**n / math.factorial(n - 1)


@dataclass(frozen=True)
class BallIntegral:
    value: float
    n: int
    method: str
    estimated_error: float


def ball_integral(
    p: RadialProfile,
    n: int,
    m: int,
    alpha,
    method: str = "auto",
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-13,
) -> BallIntegral:
    """Integral of M_m(u)^alpha over the unit ball of C^n for u = chi(|z|^2).

    ``method``: "closed" (needs a monomial chi'), "quadrature", or "auto"
    (closed when available).
    """
    if not 1 <= m <= n:
        raise PreconditionError(f"order m={m} outside 1..{n}")
    alpha = float(alpha)
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    area = sphere_area(n)
    if method == "auto":
        method = "closed" if p.monomial is not None else "quadrature"
    if method == "closed":
        if p.monomial is None:
            raise PreconditionError(f"profile {p.name!r} has no closed form")
        c, d = p.monomial
        e1, e2 = math.comb(n - 1, m), math.comb(n - 1, m - 1)
        f1, f2 = m * c, c * (m + d)
        if (f1 < 0 and e1) or (f2 < 0 and e2):
            raise NotAdmissibleError(f"profile {p.name!r} is not {m}-psh")
        # M_m^alpha = K t^q
        K = f1 ** (e1 * alpha) * f2 ** (e2 * alpha)
        q = alpha * d * math.comb(n, m)
        return BallIntegral(area * K / (2 * n + 2 * q), n, "closed", 0.0)
    if method != "quadrature":
        raise PreconditionError(f"unknown method {method!r}")

    def integrand(r):
        return mm_radial_power(p, r * r, n, m, alpha) * r ** (2 * n - 1)

    res = adaptive_gauss_legendre(integrand, 0.0, 1.0, abs_tol=abs_tol / area, rel_tol=rel_tol)
    return BallIntegral(area * res.value, n, "quadrature", area * res.error)


def chi_a_limit(n: int, m: int, alpha) -> float:
    """lim_{A -> inf} of the chi_A ball integral: c_{2n-1} m^(C(n,m) alpha) / (2n)."""
    return sphere_area(n) * m ** (math.comb(n, m) * float(alpha)) / (2 * n)


# ---------------------------------------------------------------------------
# the numerical inequality obtained from chi_0 versus chi_A, A -> infinity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeInequality:
    lhs: mpmath.mpf
    rhs: mpmath.mpf
    reduced_lhs: mpmath.mpf
    reduced_rhs: mpmath.mpf
    holds: bool
    equality: bool


def outcome_inequality(n: int, m: int, alpha) -> OutcomeInequality:
    """chi_0 integral (lhs) against the A -> infinity limit (rhs), with the
    reduced form (1 + 1/m)^(C alpha) <= 1 + C alpha / m, C = C(n-1, m-1).

    The verdict is exact whenever C alpha is an integer, otherwise decided at
    60 significant digits.
    """
    if not 1 <= m <= n:
        raise PreconditionError(f"order m={m} outside 1..{n}")
    alpha = Fraction(alpha) if not isinstance(alpha, float) else Fraction(alpha).limit_denominator(10**9)
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    C = math.comb(n - 1, m - 1)
    beta = C * alpha
    with mpmath.workdps(60):
        a = mpmath.mpf(alpha.numerator) / alpha.denominator
        area = 2 * mpmath.pi**n / mpmath.factorial(n - 1)
        lhs = area * mpmath.power(m, math.comb(n - 1, m) * a) * mpmath.power(m + 1, C * a) / (
            2 * n + 2 * math.comb(n, m) * a
        )
        rhs = area * mpmath.power(m, math.comb(n, m) * a) / (2 * n)
        red_l = mpmath.power(1 + mpmath.mpf(1) / m, C * a)
        red_r = 1 + C * a / m
        if beta.denominator == 1:
            exact_l = (1 + Fraction(1, m)) ** beta.numerator
            exact_r = 1 + beta / m
            holds, equality = exact_l <= exact_r, exact_l == exact_r
        else:
            holds, equality = bool(red_l <= red_r), False
        return OutcomeInequality(+lhs, +rhs, +red_l, +red_r, holds, equality)


# ---------------------------------------------------------------------------
# epsilon expansion with chi = -(1 - |z|^2)^2 (Monte Carlo)
# ---------------------------------------------------------------------------

# sup over the ball of |chi_{k kbar}| = |2(1-s) - 2|z_k|^2|
CHI_KK_SUP = 2.0


@dataclass(frozen=True)
class EpsRow:
    eps: float
    rhs_raw: float
    rhs_raw_se: float
    rhs_cv: float
    rhs_cv_se: float
    holds: bool
    second_diff_coeff: float
    second_diff_se: float


@dataclass(frozen=True)
class Claim1Report:
    n: int
    m: int
    alpha: float
    a: tuple
    samples: int
    seed: int
    lhs: float
    term2: float
    term2_se: float
    eps2_coeff: float
    eps2_coeff_se: float
    rows: tuple

    @property
    def term2_within(self) -> float:
        """|term II| in units of its standard error."""
        return abs(self.term2) / self.term2_se if self.term2_se > 0 else math.inf


def claim1_experiment(
    n: int,
    m: int,
    alpha,
    eps_list: Sequence[float],
    a: Optional[Sequence[float]] = None,
    samples: int = 10**7,
    seed: int = 0,
) -> Claim1Report:
    """Compare V A^alpha with int_B (A + eps g)^alpha, g = sum_{k<=m} chi_{k kbar}.

    A = sum(a).  ``a`` defaults to m copies of 4 * sup|chi_{k kbar}|.
    ``rhs_cv`` uses g as a control variate with its known mean 0 (the first
    order term integrates to zero by parts); ``holds`` compares ``rhs_cv`` to
    ``lhs`` at three standard errors.  ``eps2_coeff`` is the Taylor
    coefficient alpha(alpha-1)/2 A^(alpha-2) int g^2; ``second_diff_coeff`` is
    the symmetric second difference estimate of the same number.
    """
    if not 1 <= m <= n:
        raise PreconditionError(f"order m={m} outside 1..{n}")
    if samples < 1000:
        raise PreconditionError(f"{samples} samples are too few for a standard error estimate")
    alpha = float(alpha)
    a = tuple(float(v) for v in (a if a is not None else [4 * CHI_KK_SUP] * m))
    if len(a) != m or min(a) <= 0:
        raise PreconditionError("need m positive coefficients a_1..a_m")
    A = math.fsum(a)
    eps = np.asarray(eps_list, dtype=np.float64)
    # g ranges over [-2, 2m]
    if np.any(np.abs(eps) * 2 * m >= A):
        raise PreconditionError("eps too large: A + eps g must stay positive on the ball")
    acc = np.zeros((eps.size + 1, 6))
    for x in ball_chunks(n, samples, seed):
        sq = x * x
        s = sq.sum(axis=1)
        q = sq[:, : 2 * m].sum(axis=1)
        acc += _kernels.claim1_sums(s, q, m, A, alpha, eps)
    N = float(samples)
    V = ball_volume(n)

    def mean_se(total, total_sq):
        mu = float(total) / N
        var = max(float(total_sq) / N - mu * mu, 0.0)
        return mu, math.sqrt(var / (N - 1))

    lhs = V * A**alpha
    g_mu, g_se = mean_se(acc[-1, 0], acc[-1, 1])
    g2_mu, g2_se = mean_se(acc[-1, 1], acc[-1, 2])
    pref = 0.5 * alpha * (alpha - 1.0) * A ** (alpha - 2.0)
    rows = []
    for r, ep in enumerate(eps):
        d_mu, d_se = mean_se(acc[r, 0], acc[r, 1])
        c_mu, c_se = mean_se(acc[r, 2], acc[r, 3])
        h_mu, h_se = mean_se(acc[r, 4], acc[r, 5])
        rhs_cv = lhs + V * c_mu
        slack = 3.0 * V * c_se + 1e-12 * lhs
        rows.append(
            EpsRow(
                float(ep),
                lhs + V * d_mu,
                V * d_se,
                rhs_cv,
                V * c_se,
                bool(rhs_cv >= lhs - slack),
                V * h_mu / (2 * ep * ep) if ep else 0.0,
                V * h_se / (2 * ep * ep) if ep else 0.0,
            )
        )
    return Claim1Report(
        n, m, alpha, a, samples, seed, lhs, V * g_mu, V * g_se, pref * V * g2_mu, abs(pref) * V * g2_se, tuple(rows)
    )


# ---------------------------------------------------------------------------
# radial comparison at the critical exponent
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RemarkReport:
    n: int
    m: int
    alpha: Fraction
    trials: int
    failures: int
    max_violation: float
    tol_abs: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def random_profile_pair(rng: np.random.Generator, max_degree: int = 4):
    """(u, v) convex increasing polynomial profiles with v <= u on [0, 1] and
    u(1) = v(1) = 0.

    u has log-uniform positive coefficients on t..t^deg, shifted to vanish at
    1; v = u + sum_i d_i (t^i - 1) with d_i >= 0.
    """
    deg = int(rng.integers(1, max_degree + 1))
    c = np.zeros(deg + 1)
    c[1:] = 10.0 ** rng.uniform(-2, 1, deg)
    c[0] = -c[1:].sum()
    pdeg = int(rng.integers(1, max_degree + 1))
    d = 10.0 ** rng.uniform(-3, 0, pdeg) * (rng.random(pdeg) < 0.75)
    w = np.zeros(max(deg, pdeg) + 1)
    w[1 : pdeg + 1] = d
    w[0] = -d.sum()
    cv = w.copy()
    cv[: deg + 1] += c
    return polynomial_profile(c, "u"), polynomial_profile(cv, "v")


def radial_comparison_property(n: int, m: int, trials: int = 200, seed: int = 0, tol_abs: float = 1e-8) -> RemarkReport:
    """Check int M_m^alpha(u) <= int M_m^alpha(v) at alpha = 1/C(n-1, m-1) on
    random radial pairs u >= v with equal boundary values."""
    alpha = Fraction(1, math.comb(n - 1, m - 1))
    rng = np.random.Generator(np.random.Philox(seed))
    failures = 0
    worst = -math.inf
    for _ in range(trials):
        u, v = random_profile_pair(rng)
        try:
            iu = ball_integral(u, n, m, alpha, method="quadrature").value
            iv = ball_integral(v, n, m, alpha, method="quadrature").value
        except NotAdmissibleError as exc:
            raise InternalInvariantError(f"profile generator produced a non-{m}-psh profile: {exc}") from exc
        worst = max(worst, iu - iv)
        if iu > iv + tol_abs:
            failures += 1
    return RemarkReport(n, m, alpha, trials, failures, worst, tol_abs)
