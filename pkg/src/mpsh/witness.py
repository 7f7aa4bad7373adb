"""Search for spectra that are A-k-subharmonic but not B-k-subharmonic, with
exact certification of every reported witness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .cones import classify, ksubset_min_sum
from .errors import InternalInvariantError, PreconditionError
from .symfunc import Spectrum, sigma_all

DENOMINATOR_CAP = 10**6


def two_block_sigma(p: int, b, n: int, j: int):
    """sigma_j of (-1 repeated p times, b repeated n-p times), by the binomial sum."""
    if not 0 <= p < n:
        raise PreconditionError(f"need 0 <= p < n, got p={p}, n={n}")
    if not 0 <= j <= n:
        raise PreconditionError(f"degree j={j} outside 0..{n}")
    b = b if isinstance(b, float) else Fraction(b)
    total = b * 0
    for i in range(0, min(p, j) + 1):
        if j - i <= n - p:
            total += math.comb(p, i) * (-1) ** i * math.comb(n - p, j - i) * b ** (j - i)
    return total


def two_block_spectrum(p: int, b, n: int) -> Spectrum:
    return Spectrum((Fraction(-1),) * p + (Fraction(b),) * (n - p))


def default_grid(resolution: int = 8, b_max: int = 16) -> list[Fraction]:
    """b = i / resolution for i = 1 .. resolution * b_max."""
    return [Fraction(i, resolution) for i in range(1, resolution * b_max + 1)]


def ansatz_scan(n: int, k: int, grid: Optional[Iterable] = None) -> list[tuple[int, Fraction]]:
    """Two-block candidates (p, b) that are A-k but not B-k, checked exactly.

    ``p`` is the number of eigenvalues equal to -1 and runs over 1..k-1 (k-psh
    with b >= 0 forbids p >= k).
    """
    if not 1 <= k <= n:
        raise PreconditionError(f"plane dimension k={k} outside 1..{n}")
    grid = default_grid() if grid is None else [Fraction(b) for b in grid]
    top = n - k + 1
    out = []
    for p in range(1, min(k - 1, n - 1) + 1):
        for b in grid:
            if b <= 0 or -p + (k - p) * b < 0:
                continue
            if two_block_sigma(p, b, n, top) < 0:
                continue
            if any(two_block_sigma(p, b, n, j) < 0 for j in range(1, top)):
                out.append((p, b))
    return out


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class WitnessCertificate:
    """An exact spectrum with the inequalities that place it in A-k minus B-k.

    Construction re-verifies every check in exact arithmetic; a certificate
    with a failing check cannot be built.
    """

    spectrum: Spectrum
    n: int
    k: int
    checks: tuple = field(default=())

    def __post_init__(self):
        s = self.spectrum
        if not s.is_exact:
            raise PreconditionError("certificates need an exact spectrum")
        if s.n != self.n or not 1 <= self.k <= self.n:
            raise PreconditionError("inconsistent (n, k) for certificate")
        checks = _exact_checks(s, self.k)
        if checks is None:
            raise InternalInvariantError(f"spectrum is not an A-{self.k} \\ B-{self.k} witness")
        c = classify(s, self.k)
        if not (c.is_A and not c.is_B):
            raise InternalInvariantError("classification disagrees with the certificate checks")
        object.__setattr__(self, "checks", checks)

    def scaled(self, t) -> "WitnessCertificate":
        return WitnessCertificate(self.spectrum.scaled(Fraction(t)), self.n, self.k)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "spectrum": [_fmt(v) for v in self.spectrum.values],
            "checks": [{"inequality": name, "value": _fmt(v), "verdict": ok} for name, v, ok in self.checks],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WitnessCertificate":
        return cls(Spectrum.exact(Fraction(v) for v in d["spectrum"]), int(d["n"]), int(d["k"]))


def _exact_checks(s: Spectrum, k: int) -> Optional[tuple]:
    n = s.n
    top = n - k + 1
    e = sigma_all(s).sigmas
    ksum = ksubset_min_sum(s, k)
    neg = [j for j in range(1, top) if e[j] < 0]
    if ksum < 0 or e[top] < 0 or not neg:
        return None
    j = neg[0]
    return (
        (f"min {k}-subset sum >= 0", ksum, True),
        (f"sigma_{top} >= 0", e[top], True),
        (f"sigma_{j} < 0", e[j], True),
    )


def certify(s, k: int) -> Optional[WitnessCertificate]:
    """A certificate for ``s`` (converted to exact) or ``None``."""
    s = s if isinstance(s, Spectrum) else Spectrum(tuple(s))
    s = s.as_exact()
    if _exact_checks(s, k) is None:
        return None
    return WitnessCertificate(s, s.n, k)


@dataclass(frozen=True)
class SearchConfig:
    n: int
    k: int
    budget: int = 10**6
    seed: int = 0
    ansatz_grid: int = 8
    # compass search schedule: initial step, final step, evaluations per restart
    step0: float = 0.5
    step_min: float = 1e-7
    restart_budget: int = 5000
    # stop a restart early once the objective exceeds this margin
    target: float = 1e-3

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise PreconditionError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.budget <= 0:
            raise PreconditionError("budget must be positive")


@dataclass(frozen=True)
class SearchResult:
    certificate: Optional[WitnessCertificate]
    best_objective: float
    best_spectrum: tuple
    evaluations: int
    restarts: int
    trace: tuple


def rationalize(y: Sequence[float], cap: int = DENOMINATOR_CAP) -> Spectrum:
    """Continued-fraction rounding of every coordinate to denominators <= cap."""
    return Spectrum(tuple(Fraction(float(v)).limit_denominator(cap) for v in y))


def restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def general_search(cfg: SearchConfig) -> SearchResult:
    """Random restarts of a compass search on the scale-free violation
    objective; float hits are rationalized and certified exactly.

    Restart ``i`` draws its start from its own stream, so results depend only
    on ``cfg``.  The first certified restart (in index order) wins.
    """
    n, k = cfg.n, cfg.k
    if n < 2 or n - k < 1:
        # no index j <= n-k exists: B-k = A-k trivially
        return SearchResult(None, -math.inf, (), 0, 0, ())
    used = 0
    best, best_y = -math.inf, ()
    trace = []
    i = 0
    while used + 2 * (n - 1) + 1 <= cfg.budget:
        rng = restart_rng(cfg.seed, i)
        x = rng.uniform(-1.0, 3.0, n - 1)
        f, u = _kernels.compass_search(x, k, min(cfg.restart_budget, cfg.budget - used), cfg.step0, cfg.step_min, cfg.target)
        used += int(u)
        i += 1
        trace.append(float(f))
        y = tuple(sorted((-1.0,) + tuple(float(v) for v in x)))
        if f > best:
            best, best_y = float(f), y
        if f >= 0.0:
            cert = certify(rationalize(y), k)
            if cert is not None:
                return SearchResult(cert, float(f), y, used, i, tuple(trace))
    return SearchResult(None, best, best_y, used, i, tuple(trace))


@dataclass(frozen=True)
class FrontierRow:
    n: int
    k: int
    witness_found: bool
    source: str
    certificate: Optional[WitnessCertificate]
    best_margin: float
    evaluations: int


def frontier_report(k: int, n_range: Iterable[int], cfg: Optional[SearchConfig] = None) -> list[FrontierRow]:
    """Per n: the two-block scan first, then the general search.

    ``cfg`` supplies budget, seed, grid resolution and schedule; its ``n`` and
    ``k`` are replaced per row.
    """
    rows = []
    for n in n_range:
        base = cfg if cfg is not None else SearchConfig(n, k)
        row_cfg = replace(base, n=n, k=k)
        hits = ansatz_scan(n, k, default_grid(row_cfg.ansatz_grid))
        if hits:
            p, b = hits[0]
            spec = two_block_spectrum(p, b, n)
            margin = float(_kernels.search_objective(np.array([float(v) for v in spec.values[1:]]), k))
            rows.append(FrontierRow(n, k, True, "ansatz", certify(spec, k), margin, 0))
            continue
        res = general_search(row_cfg)
        rows.append(
            FrontierRow(n, k, res.certificate is not None, "search", res.certificate, res.best_objective, res.evaluations)
        )
    return rows
