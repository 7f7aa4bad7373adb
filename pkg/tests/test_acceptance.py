"""Acceptance criteria 1 to 10, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (visible with
``-s``); the terminal summary lists the verdicts as well.
"""

import math
import time
from fractions import Fraction

import numpy as np

from mpsh import _kernels, classify, mm_eval, newton_residual, sigma_all, theorem1_ratio, theorem1_sweep
from mpsh.hermitian import BUMP_FIELD, PerturbedQuadratic, perturbation_experiment
from mpsh.radial import (
    ball_integral,
    chi_A,
    claim1_experiment,
    linear_profile,
    mm_radial,
    outcome_inequality,
    radial_comparison_property,
    radial_spectrum,
)
from mpsh.witness import SearchConfig, ansatz_scan, general_search, two_block_sigma, two_block_spectrum
from oracles import brute_sigmas, chi0_closed, linear_closed


class Line:
    """Prints the verdict line whether the body passes or raises."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.details = []

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def note(self, text):
        self.details.append(text)

    def __exit__(self, exc_type, exc, tb):
        verdict = "PASS" if exc_type is None else "FAIL"
        dt = time.perf_counter() - self.t0
        extra = "; ".join(self.details)
        print(f"criterion {self.number}: {verdict}  {self.title}  [{dt:.2f} s] {extra}")
        return False


EX11 = (-1, -1) + (2,) * 9


def test_criterion_01_exact_values():
    with Line(1, "exact sigma values and classification of the n=11 example") as line:
        e = sigma_all(EX11)
        assert e[9] == 512 and e[8] == -1536
        assert isinstance(e[9], Fraction)
        c = classify(EX11, 3)
        assert c.is_A and not c.is_B
        t0 = time.perf_counter()
        sigma_all(EX11)
        line.note(f"sigma_all {1e3 * (time.perf_counter() - t0):.3f} ms")


def test_criterion_02_theorem1_sweep():
    with Line(2, "ratio sweep n <= 7 and the (1,3,8) triple"):
        rows = theorem1_sweep(7)
        assert rows and all(r.ratio >= 1 and r.passes for r in rows)
        assert all(isinstance(r.ratio, Fraction) for r in rows)
        assert theorem1_ratio(1, 3, 8) == Fraction(4, 5)


def _random_spectra(rng, N, n, k):
    """Sorted spectra biased towards the A-class and its boundary.

    Smallest entry pinned to -1; between one and k-1 negatives; half the rows
    on a 1/8 grid (so exact zeros of the tested polynomials occur), half
    continuous with log-uniform positive entries.
    """
    Y = np.empty((N, n))
    negs = rng.integers(1, k, N)
    for r in range(N):
        q = negs[r]
        if r % 2:
            neg = -rng.integers(1, 9, q - 1) / 8.0
            pos = rng.integers(0, 33, n - q) / 8.0
        else:
            neg = -rng.random(q - 1)
            pos = 10.0 ** rng.uniform(-2, 1.5, n - q)
        Y[r] = np.sort(np.concatenate(([-1.0], neg, pos)))
    return Y


def test_criterion_03_randomized_consistency():
    with Line(3, "no A-but-not-B spectrum in 10^5 samples per (n, k), n <= 7") as line:
        rng = np.random.Generator(np.random.Philox(2024))
        counter, a_hits, checked = 0, 0, 0
        for n in range(4, 8):
            for k in range(3, n - 1):
                Y = _random_spectra(rng, 10**5, n, k)
                _, a_loose, _ = _kernels.classify_rows(Y, k, 1e-9)
                _, _, b_tight = _kernels.classify_rows(Y, k, -1e-9)
                a_hits += int(a_loose.sum())
                # float verdicts are only trusted away from the boundary
                for row in Y[a_loose & ~b_tight]:
                    checked += 1
                    c = classify([Fraction(float(v)) for v in row], k)
                    if c.is_A and not c.is_B:
                        counter += 1
        line.note(f"A-class hits {a_hits}, exact re-checks {checked}, counterexamples {counter}")
        assert a_hits > 10**5
        assert counter == 0


def test_criterion_04_witness_search():
    with Line(4, "ansatz and general search recover a witness at n=11, none for n <= 7") as line:
        assert (2, Fraction(2)) in ansatz_scan(11, 3)
        r = general_search(SearchConfig(11, 3, budget=10**6))
        assert r.certificate is not None and r.evaluations <= 10**6
        c = classify(r.certificate.spectrum, 3)
        assert c.is_A and not c.is_B
        line.note(f"n=11 certified after {r.evaluations} evaluations")
        for n in (4, 5, 6, 7):
            rn = general_search(SearchConfig(n, 3, budget=10**6))
            assert rn.certificate is None
            line.note(f"n={n} best {rn.best_objective:.3g}")


def test_criterion_05_radial_closed_forms():
    with Line(5, "closed form vs quadrature for chi_0 and chi = t") as line:
        worst = 0.0
        for n in range(1, 7):
            for m in range(1, n + 1):
                for alpha in (0.5, 1.0, 2.0):
                    for prof, ref in ((chi_A(0), chi0_closed), (linear_profile(), linear_closed)):
                        r = ref(n, m, alpha)
                        c = ball_integral(prof, n, m, alpha, method="closed").value
                        q = ball_integral(prof, n, m, alpha, method="quadrature").value
                        worst = max(worst, abs(c - r) / r, abs(q - r) / r, abs(c - q) / abs(c))
        line.note(f"max rel. deviation {worst:.2e}")
        assert worst <= 1e-9


def test_criterion_06_comparison_failure():
    with Line(6, "outcome inequality fails above the critical exponent") as line:
        count = 0
        for n in range(1, 11):
            for m in range(1, n + 1):
                C = math.comb(n - 1, m - 1)
                eq = outcome_inequality(n, m, 1)
                assert eq.equality == (m in (1, n))
                assert eq.holds == (m in (1, n))
                if C > 1:
                    for alpha in (Fraction(1001, 1000 * C), Fraction(3, 2 * C), Fraction(1, 1), Fraction(2), 0.7, 2.5):
                        if Fraction(alpha) > Fraction(1, C):
                            count += 1
                            assert not outcome_inequality(n, m, alpha).holds
        line.note(f"{count} super-critical cases")


def test_criterion_07_claim1():
    with Line(7, "Monte Carlo expansion at n=3, m=2 with 10^7 samples") as line:
        claim1_runs = {a: claim1_experiment(3, 2, a, [0.5, 1.0, 2.0], samples=10**7, seed=0) for a in (0.25, 0.5, 0.9, 1.0)}
        for alpha, r in claim1_runs.items():
            assert r.samples == 10**7
            assert abs(r.term2) <= 3 * r.term2_se
            if alpha < 1:
                assert r.eps2_coeff + 3 * r.eps2_coeff_se < 0
                # the model-free second difference agrees in sign
                assert r.rows[0].second_diff_coeff + 3 * r.rows[0].second_diff_se < 0
                assert not any(row.holds for row in r.rows)
            else:
                assert r.eps2_coeff >= 0
                assert all(row.holds for row in r.rows)
            line.note(f"a={alpha}: II={r.term2:.1e} ({r.term2_within:.2f} SE), c2={r.eps2_coeff:.2e}")


def test_criterion_08_lemma_decay():
    with Line(8, "eigenvalue errors decay like 1/a_n") as line:
        f = PerturbedQuadratic((1.0, 2.0, 100.0), BUMP_FIELD)
        t = perturbation_experiment(f, [0.3, 0.2, 0.1], [1e2, 1e3, 1e4])
        assert t.is_monotone()
        assert t.rows[-1].max_error <= t.rows[0].max_error / 100
        assert -1.2 <= t.empirical_rate() <= -0.8
        line.note(f"ratio {t.decay_ratio():.3e}, slope {t.empirical_rate():.3f}")


def test_criterion_09_remark():
    with Line(9, "radial comparison at alpha = 1/C(n-1, m-1)") as line:
        for n, m in ((3, 2), (4, 2), (5, 3)):
            r = radial_comparison_property(n, m, trials=200, seed=0, tol_abs=1e-8)
            assert r.trials == 200 and r.failures == 0
            line.note(f"({n},{m}) worst {r.max_violation:.1e}")


def test_criterion_10_oracles():
    with Line(10, "oracle equivalences") as line:
        rng = np.random.Generator(np.random.Philox(10))
        for _ in range(300):
            n = int(rng.integers(1, 9))
            vals = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-20, 21, n), rng.integers(1, 9, n))]
            assert list(sigma_all(vals).sigmas) == brute_sigmas(vals)
        for _ in range(200):
            n = int(rng.integers(1, 9))
            m = int(rng.integers(1, n + 1))
            t, A = float(rng.random()), float(10 ** rng.uniform(-2, 3))
            p = chi_A(A)
            ref = mm_eval(radial_spectrum(p, t, n), m).value
            assert abs(mm_radial(p, t, n, m) - ref) <= 1e-12 * abs(ref)
        for n in range(1, 13):
            for p in range(0, n):
                for b in (Fraction(1, 3), Fraction(2), Fraction(17, 8)):
                    e = sigma_all(two_block_spectrum(p, b, n)).sigmas
                    assert all(two_block_sigma(p, b, n, j) == e[j] for j in range(n + 1))
        for _ in range(10**4):
            n = int(rng.integers(2, 13))
            vals = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-50, 51, n), rng.integers(1, 20, n))]
            for k in range(1, n):
                assert newton_residual(vals, k) >= 0
        line.note("10^4 Newton spectra, all residuals >= 0")
