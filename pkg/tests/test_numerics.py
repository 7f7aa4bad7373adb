import math

import numpy as np
import pytest

from mpsh import ConvergenceError
from mpsh.montecarlo import ball_chunks, ball_volume, chunk_generators
from mpsh.quadrature import adaptive_gauss_legendre


class TestQuadrature:
    def test_polynomial_exact(self):
        r = adaptive_gauss_legendre(lambda x: x**7 - 3 * x**2, 0.0, 1.0)
        assert r.value == pytest.approx(1 / 8 - 1, rel=1e-14)
        assert r.panels == 1

    def test_endpoint_singularity(self):
        r = adaptive_gauss_legendre(np.sqrt, 0.0, 1.0, abs_tol=1e-12, rel_tol=1e-14)
        assert r.value == pytest.approx(2 / 3, abs=1e-11)
        assert r.panels > 1

    def test_oscillatory(self):
        r = adaptive_gauss_legendre(lambda x: np.sin(50 * x), 0.0, math.pi)
        assert r.value == pytest.approx((1 - math.cos(50 * math.pi)) / 50, abs=1e-10)

    def test_panel_cap(self):
        with pytest.raises(ConvergenceError):
            adaptive_gauss_legendre(lambda x: np.abs(x - 0.3) ** -0.9, 0.0, 1.0, abs_tol=1e-15, rel_tol=1e-16, max_panels=16)


class TestMonteCarlo:
    def test_volume(self):
        assert ball_volume(1) == pytest.approx(math.pi)
        assert ball_volume(2) == pytest.approx(math.pi**2 / 2)

    def test_uniform_in_ball(self):
        n = 3
        pts = np.concatenate(list(ball_chunks(n, 400_000, seed=3, chunk=100_000)))
        s = (pts**2).sum(axis=1)
        assert pts.shape == (400_000, 2 * n)
        assert s.max() <= 1.0
        # E[s] = n/(n+1), E[|z_1|^2] = 1/(n+1)
        assert s.mean() == pytest.approx(n / (n + 1), abs=3e-3)
        assert (pts[:, :2] ** 2).sum(axis=1).mean() == pytest.approx(1 / (n + 1), abs=3e-3)

    def test_reproducible_and_chunked(self):
        a = np.concatenate(list(ball_chunks(2, 10_000, seed=8, chunk=4096)))
        b = np.concatenate(list(ball_chunks(2, 10_000, seed=8, chunk=4096)))
        assert np.array_equal(a, b)
        assert [size for size, _ in chunk_generators(0, 10_000, 4096)] == [4096, 4096, 1808]

    def test_seed_changes_stream(self):
        a = next(ball_chunks(2, 100, seed=1))
        b = next(ball_chunks(2, 100, seed=2))
        assert not np.array_equal(a, b)
