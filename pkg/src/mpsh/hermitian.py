"""Small Hermitian matrices, a cyclic Jacobi eigensolver and the
eigenvalue-perturbation experiment for Hessians of the form

    rho(z) = chi(z) + sum_j a_j |z_j|^2,   a_n -> infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import ConvergenceError, InternalInvariantError, PreconditionError
from .symfunc import Spectrum

MAX_SWEEPS = 30


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        A = np.array(self.entries, dtype=np.complex128)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise PreconditionError(f"expected a square matrix, got shape {A.shape}")
        scale = max(1.0, float(np.abs(A).max(initial=0.0)))
        if np.abs(A - A.conj().T).max(initial=0.0) > 1e-12 * scale:
            raise PreconditionError("matrix is not Hermitian")
        A = 0.5 * (A + A.conj().T)
        A[np.diag_indices_from(A)] = A.diagonal().real
        A.setflags(write=False)
        object.__setattr__(self, "entries", A)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def block(self, size: int) -> "HermitianMatrix":
        """Leading principal ``size`` x ``size`` block."""
        return HermitianMatrix(self.entries[:size, :size])


def jacobi_eigen(H: HermitianMatrix, tol: float = 1e-13, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Ascending eigenvalues by cyclic Jacobi rotations.

    Converged when the off-diagonal Frobenius norm is at most
    ``tol * ||H||_F``.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    A = np.array(H.entries, dtype=np.complex128, copy=True)
    fro = float(np.linalg.norm(A))
    d, off, sweeps = _kernels.jacobi_hermitian(A, tol * fro, max_sweeps)
    if off > tol * fro:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})", achieved=off)
    trace = float(np.trace(H.entries).real)
    if abs(float(np.sum(d)) - trace) > 1e-10 * max(1.0, float(np.abs(H.entries.diagonal()).sum())):
        raise InternalInvariantError("Jacobi rotations did not preserve the trace")
    return Spectrum(tuple(float(v) for v in d))


@dataclass(frozen=True)
class ChiField:
    """A C^2 real function on C^n given by closed forms.

    ``hessian(z)`` returns the complex Hessian d^2 chi / dz_p dzbar_q.
    """

    name: str
    value: Callable[[np.ndarray], float]
    hessian: Callable[[np.ndarray], np.ndarray]


def _zero_value(z):
    return 0.0


def _zero_hessian(z):
    n = len(z)
    return np.zeros((n, n), dtype=np.complex128)


def _bump_value(z):
    s = float(np.sum(np.abs(z) ** 2))
    return -((1.0 - s) ** 2)


def _bump_hessian(z):
    # chi = -(1-s)^2, s = |z|^2:  chi_{p qbar} = 2(1-s) delta_pq - 2 conj(z_p) z_q
    z = np.asarray(z, dtype=np.complex128)
    s = float(np.sum(np.abs(z) ** 2))
    return 2.0 * (1.0 - s) * np.eye(len(z)) - 2.0 * np.outer(z.conj(), z)


ZERO_FIELD = ChiField("zero", _zero_value, _zero_hessian)
BUMP_FIELD = ChiField("-(1-|z|^2)^2", _bump_value, _bump_hessian)


@dataclass(frozen=True)
class PerturbedQuadratic:
    """rho(z) = chi(z) + sum_j a_j |z_j|^2."""

    a: tuple
    chi: ChiField = ZERO_FIELD

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))

    @property
    def n(self) -> int:
        return len(self.a)

    def with_last(self, a_n: float) -> "PerturbedQuadratic":
        return PerturbedQuadratic(self.a[:-1] + (float(a_n),), self.chi)


def hessian_at(f: PerturbedQuadratic, z: Sequence[complex]) -> HermitianMatrix:
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (f.n,):
        raise PreconditionError(f"point has dimension {z.shape}, expected ({f.n},)")
    return HermitianMatrix(np.diag(np.asarray(f.a, dtype=np.complex128)) + f.chi.hessian(z))


@dataclass(frozen=True)
class PerturbationRow:
    a_n: float
    eigen_errors: tuple
    lambda_n_error: float

    @property
    def max_error(self) -> float:
        return max(max(self.eigen_errors, default=0.0), self.lambda_n_error)


@dataclass(frozen=True)
class PerturbationTable:
    rows: tuple = field(default_factory=tuple)

    def decay_ratio(self) -> float:
        """Max error at the last a_n over max error at the first."""
        first, last = self.rows[0].max_error, self.rows[-1].max_error
        return last / first if first > 0 else 0.0

    def empirical_rate(self) -> float:
        """Least-squares slope of log(max error) against log(a_n); ~ -1 for a 1/a_n decay."""
        pts = [(math.log(r.a_n), math.log(r.max_error)) for r in self.rows if r.max_error > 0]
        if len(pts) < 2:
            return float("nan")
        xs, ys = zip(*pts)
        return float(np.polyfit(xs, ys, 1)[0])

    def is_monotone(self) -> bool:
        errs = [r.max_error for r in self.rows]
        return all(b <= a for a, b in zip(errs, errs[1:]))


def perturbation_experiment(f: PerturbedQuadratic, z: Sequence[complex], a_n_sequence: Sequence[float]) -> PerturbationTable:
    """Compare the spectrum of the full Hessian with its leading block as a_n grows.

    Row errors: |lambda_j - mu_j| for j < n (mu the leading-block spectrum) and
    |lambda_n - (a_n + chi_{n nbar}(z))|.
    """
    seq = [float(v) for v in a_n_sequence]
    if not seq:
        raise PreconditionError("empty a_n sequence")
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise PreconditionError("a_n sequence must be strictly increasing")
    if f.n >= 2 and seq[0] <= f.a[-2]:
        raise PreconditionError("a_n must exceed a_{n-1}")
    z = np.asarray(z, dtype=np.complex128)
    n = f.n
    chi_nn = float(f.chi.hessian(z)[n - 1, n - 1].real)
    rows = []
    for a_n in seq:
        H = hessian_at(f.with_last(a_n), z)
        lam = jacobi_eigen(H).values
        mu = jacobi_eigen(H.block(n - 1)).values if n > 1 else ()
        errs = tuple(abs(lam[j] - mu[j]) for j in range(n - 1))
        rows.append(PerturbationRow(a_n, errs, abs(lam[n - 1] - (a_n + chi_nn))))
    return PerturbationTable(tuple(rows))
