"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Every kernel exists twice: ``<name>_nb`` (numba ``@njit`` loops) and
``<name>_np`` (numpy, vectorized over the leading axis where possible).  The
module-level name ``<name>`` is bound to one of them at import time.

Set ``MPSH_DISABLE_NUMBA=1`` to force the numpy path.  If numba cannot be
imported the numpy path is used as well.

Both paths perform the same floating point operations in the same order, so
the searches and classifications built on them are reproducible across
backends.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("MPSH_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:  # pragma: no cover - depends on environment
    if _DISABLED:
        raise ImportError("numba disabled by MPSH_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"

# ---------------------------------------------------------------------------
# elementary symmetric polynomials, row-wise
# ---------------------------------------------------------------------------


@njit(cache=True)
def sigma_rows_nb(Y):
    N, n = Y.shape
    out = np.zeros((N, n + 1))
    for r in range(N):
        out[r, 0] = 1.0
        for i in range(n):
            x = Y[r, i]
            for j in range(i + 1, 0, -1):
                out[r, j] += x * out[r, j - 1]
    return out


def sigma_rows_np(Y):
    Y = np.asarray(Y, dtype=np.float64)
    N, n = Y.shape
    out = np.zeros((N, n + 1))
    out[:, 0] = 1.0
    for i in range(n):
        x = Y[:, i]
        for j in range(i + 1, 0, -1):
            out[:, j] += x * out[:, j - 1]
    return out


# ---------------------------------------------------------------------------
# batch classification (A- vs B-k-subharmonic) on sorted rows
# ---------------------------------------------------------------------------


@njit(cache=True)
def classify_rows_nb(Y, k, slack):
    """Flags per row: k-psh, A, B.  ``slack`` > 0 loosens every test by
    ``slack`` times the natural magnitude of the tested quantity; negative
    slack tightens."""
    N, n = Y.shape
    top = n - k + 1
    kpsh = np.zeros(N, dtype=np.bool_)
    isa = np.zeros(N, dtype=np.bool_)
    isb = np.zeros(N, dtype=np.bool_)
    e = np.zeros(n + 1)
    ea = np.zeros(n + 1)
    for r in range(N):
        for j in range(n + 1):
            e[j] = 0.0
            ea[j] = 0.0
        e[0] = 1.0
        ea[0] = 1.0
        for i in range(n):
            x = Y[r, i]
            ax = abs(x)
            for j in range(i + 1, 0, -1):
                e[j] += x * e[j - 1]
                ea[j] += ax * ea[j - 1]
        s = 0.0
        sa = 0.0
        for i in range(k):
            s += Y[r, i]
            sa += abs(Y[r, i])
        ok = s >= -slack * sa
        kpsh[r] = ok
        isa[r] = ok and e[top] >= -slack * ea[top]
        b = True
        for j in range(1, top + 1):
            if e[j] < -slack * ea[j]:
                b = False
                break
        isb[r] = b
    return kpsh, isa, isb


def classify_rows_np(Y, k, slack):
    Y = np.asarray(Y, dtype=np.float64)
    N, n = Y.shape
    top = n - k + 1
    e = sigma_rows_np(Y)
    ea = sigma_rows_np(np.abs(Y))
    s = np.zeros(N)
    sa = np.zeros(N)
    for i in range(k):
        s += Y[:, i]
        sa += np.abs(Y[:, i])
    kpsh = s >= -slack * sa
    isa = kpsh & (e[:, top] >= -slack * ea[:, top])
    isb = np.all(e[:, 1 : top + 1] >= -slack * ea[:, 1 : top + 1], axis=1)
    return kpsh, isa, isb


# ---------------------------------------------------------------------------
# witness search: scale-free violation objective and compass search
# ---------------------------------------------------------------------------
#
# A point is x in R^(n-1); the spectrum is sort((-1, x)).  Points with a
# coordinate below -1 are rejected (the smallest eigenvalue is pinned to -1).
# Every term is a ratio q(y) / q(|y|) in [-1, 1]:
#   t1 = k-smallest sum, t2 = sigma_{n-k+1}, t3 = -min_{j<=n-k} sigma_j.
# objective = min(t1, t2, t3); a witness has objective >= 0 with t3 > 0.

_REJECT = -1.0e300


@njit(cache=True)
def search_objective_nb(x, k):
    n = x.size + 1
    y = np.empty(n)
    y[0] = -1.0
    for i in range(n - 1):
        if x[i] < -1.0:
            return _REJECT
        y[i + 1] = x[i]
    y = np.sort(y)
    e = np.zeros(n + 1)
    ea = np.zeros(n + 1)
    e[0] = 1.0
    ea[0] = 1.0
    for i in range(n):
        v = y[i]
        av = abs(v)
        for j in range(i + 1, 0, -1):
            e[j] += v * e[j - 1]
            ea[j] += av * ea[j - 1]
    s = 0.0
    sa = 0.0
    for i in range(k):
        s += y[i]
        sa += abs(y[i])
    t1 = s / sa
    t2 = e[n - k + 1] / ea[n - k + 1]
    t3 = 1.0e300
    for j in range(1, n - k + 1):
        v = e[j] / ea[j]
        if v < t3:
            t3 = v
    return min(t1, min(t2, -t3))


def search_objective_rows_np(X, k):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    N, m = X.shape
    n = m + 1
    out = np.full(N, _REJECT)
    ok = np.all(X >= -1.0, axis=1)
    if not ok.any():
        return out
    Y = np.empty((int(ok.sum()), n))
    Y[:, 0] = -1.0
    Y[:, 1:] = X[ok]
    Y.sort(axis=1)
    e = sigma_rows_np(Y)
    ea = sigma_rows_np(np.abs(Y))
    s = np.zeros(Y.shape[0])
    sa = np.zeros(Y.shape[0])
    for i in range(k):
        s += Y[:, i]
        sa += np.abs(Y[:, i])
    t1 = s / sa
    t2 = e[:, n - k + 1] / ea[:, n - k + 1]
    t3 = np.full(Y.shape[0], 1.0e300)
    for j in range(1, n - k + 1):
        t3 = np.minimum(t3, e[:, j] / ea[:, j])
    out[ok] = np.minimum(t1, np.minimum(t2, -t3))
    return out


def search_objective_np(x, k):
    return float(search_objective_rows_np(np.asarray(x)[None, :], k)[0])


@njit(cache=True)
def compass_search_nb(x, k, budget, step, step_min, target):
    """Best-improvement coordinate search, in place on ``x``.

    Each round evaluates all 2(n-1) moves x_i +/- step and takes the best
    strictly improving one; the step halves when none improves.  Stops on
    ``budget`` evaluations, ``step < step_min`` or objective > ``target``.
    Returns (objective, evaluations used).
    """
    m = x.size
    f = search_objective_nb(x, k)
    used = 1
    while step >= step_min and used + 2 * m <= budget and f <= target:
        best = f
        bi = -1
        bs = 0.0
        for i in range(m):
            old = x[i]
            for d in range(2):
                sgn = 1.0 if d == 0 else -1.0
                x[i] = old + sgn * step
                g = search_objective_nb(x, k)
                if g > best:
                    best = g
                    bi = i
                    bs = sgn
            x[i] = old
        used += 2 * m
        if bi >= 0:
            x[bi] = x[bi] + bs * step
            f = best
        else:
            step *= 0.5
    return f, used


def compass_search_np(x, k, budget, step, step_min, target):
    m = x.size
    f = search_objective_np(x, k)
    used = 1
    while step >= step_min and used + 2 * m <= budget and f <= target:
        cand = np.repeat(x[None, :], 2 * m, axis=0)
        for i in range(m):
            cand[2 * i, i] = x[i] + step
            cand[2 * i + 1, i] = x[i] - step
        vals = search_objective_rows_np(cand, k)
        used += 2 * m
        # first index of the maximum matches the numba scan order
        idx = int(np.argmax(vals))
        if vals[idx] > f:
            x[idx // 2] = cand[idx, idx // 2]
            f = float(vals[idx])
        else:
            step *= 0.5
    return f, used


# ---------------------------------------------------------------------------
# Monte Carlo accumulation for the epsilon expansion on the ball
# ---------------------------------------------------------------------------
#
# Input per sample: s = ||z||^2 and q = sum_{k<=m} |z_k|^2.
# g = 2m(1-s) - 2q is sum_{k<=m} chi_{k kbar} for chi = -(1-s)^2.
# Columns of the returned matrix (one row per eps):
#   0: sum d,  1: sum d^2   with d = (A + eps g)^alpha - A^alpha
#   2: sum c,  3: sum c^2   with c = d - eps alpha A^(alpha-1) g  (control variate)
#   4: sum h,  5: sum h^2   with h = (A+eps g)^a + (A-eps g)^a - 2A^a
# and the sums of g, g^2, g^4 in the last row (columns 0, 1, 2).


@njit(cache=True)
def claim1_sums_nb(s, q, m, A, alpha, eps):
    E = eps.size
    out = np.zeros((E + 1, 6))
    base = A**alpha
    slope = alpha * A ** (alpha - 1.0)
    for i in range(s.size):
        g = 2.0 * m * (1.0 - s[i]) - 2.0 * q[i]
        out[E, 0] += g
        out[E, 1] += g * g
        out[E, 2] += g * g * g * g
        for r in range(E):
            ep = eps[r]
            up = (A + ep * g) ** alpha
            dn = (A - ep * g) ** alpha
            d = up - base
            c = d - ep * slope * g
            h = up + dn - 2.0 * base
            out[r, 0] += d
            out[r, 1] += d * d
            out[r, 2] += c
            out[r, 3] += c * c
            out[r, 4] += h
            out[r, 5] += h * h
    return out


def claim1_sums_np(s, q, m, A, alpha, eps):
    E = eps.size
    out = np.zeros((E + 1, 6))
    base = A**alpha
    slope = alpha * A ** (alpha - 1.0)
    g = 2.0 * m * (1.0 - s) - 2.0 * q
    out[E, 0] = g.sum()
    out[E, 1] = (g * g).sum()
    out[E, 2] = (g * g * g * g).sum()
    for r in range(E):
        ep = eps[r]
        up = (A + ep * g) ** alpha
        dn = (A - ep * g) ** alpha
        d = up - base
        c = d - ep * slope * g
        h = up + dn - 2.0 * base
        out[r] = [d.sum(), (d * d).sum(), c.sum(), (c * c).sum(), h.sum(), (h * h).sum()]
    return out


# ---------------------------------------------------------------------------
# cyclic Jacobi for complex Hermitian matrices
# ---------------------------------------------------------------------------


@njit(cache=True)
def _offnorm_nb(A):
    n = A.shape[0]
    s = 0.0
    for p in range(n):
        for q in range(n):
            if p != q:
                s += A[p, q].real ** 2 + A[p, q].imag ** 2
    return math.sqrt(s)


@njit(cache=True)
def jacobi_hermitian_nb(A, tol_abs, max_sweeps):
    """Diagonalize ``A`` in place.  Returns (diagonal, off-norm, sweeps)."""
    n = A.shape[0]
    sweeps = 0
    off = _offnorm_nb(A)
    while off > tol_abs and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = A[p, q]
                ag = abs(g)
                if ag == 0.0:
                    continue
                ph = g / ag
                tau = (A[q, q].real - A[p, p].real) / (2.0 * ag)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cph = ph.conjugate()
                w00 = c + 0j
                w01 = s + 0j
                w10 = -s * cph
                w11 = c * cph
                for i in range(n):
                    ap = A[i, p]
                    aq = A[i, q]
                    A[i, p] = ap * w00 + aq * w10
                    A[i, q] = ap * w01 + aq * w11
                for j in range(n):
                    ap = A[p, j]
                    aq = A[q, j]
                    A[p, j] = w00.conjugate() * ap + w10.conjugate() * aq
                    A[q, j] = w01.conjugate() * ap + w11.conjugate() * aq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real + 0j
                A[q, q] = A[q, q].real + 0j
        sweeps += 1
        off = _offnorm_nb(A)
    d = np.empty(n)
    for i in range(n):
        d[i] = A[i, i].real
    return d, off, sweeps


def jacobi_hermitian_np(A, tol_abs, max_sweeps):
    n = A.shape[0]
    mask = ~np.eye(n, dtype=bool)
    sweeps = 0
    off = float(np.sqrt(np.sum(np.abs(A[mask]) ** 2)))
    while off > tol_abs and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = A[p, q]
                ag = abs(g)
                if ag == 0.0:
                    continue
                ph = g / ag
                tau = (A[q, q].real - A[p, p].real) / (2.0 * ag)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                W = np.array([[c, s], [-s * np.conj(ph), c * np.conj(ph)]], dtype=np.complex128)
                cols = A[:, [p, q]] @ W
                A[:, p] = cols[:, 0]
                A[:, q] = cols[:, 1]
                rows = W.conj().T @ A[[p, q], :]
                A[p, :] = rows[0]
                A[q, :] = rows[1]
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
        sweeps += 1
        off = float(np.sqrt(np.sum(np.abs(A[mask]) ** 2)))
    return A.diagonal().real.copy(), off, sweeps


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    sigma_rows = sigma_rows_nb
    classify_rows = classify_rows_nb
    search_objective = search_objective_nb
    compass_search = compass_search_nb
    claim1_sums = claim1_sums_nb
    jacobi_hermitian = jacobi_hermitian_nb
else:
    sigma_rows = sigma_rows_np
    classify_rows = classify_rows_np
    search_objective = search_objective_np
    compass_search = compass_search_np
    claim1_sums = claim1_sums_np
    jacobi_hermitian = jacobi_hermitian_np
