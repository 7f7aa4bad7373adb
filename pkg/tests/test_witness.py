import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpsh import InternalInvariantError, PreconditionError, Spectrum, classify, sigma_all
from mpsh.witness import (
    SearchConfig,
    WitnessCertificate,
    ansatz_scan,
    certify,
    default_grid,
    frontier_report,
    general_search,
    rationalize,
    two_block_sigma,
    two_block_spectrum,
)

EX11 = (-1, -1) + (2,) * 9


class TestTwoBlock:
    def test_examples(self):
        assert two_block_sigma(2, 2, 11, 9) == 512
        assert two_block_sigma(2, 2, 11, 8) == -1536
        for n in range(1, 8):
            for j in range(n + 1):
                assert two_block_sigma(0, 1, n, j) == math.comb(n, j)

    def test_range(self):
        with pytest.raises(PreconditionError):
            two_block_sigma(3, 1, 3, 1)
        with pytest.raises(PreconditionError):
            two_block_sigma(1, 1, 3, 4)

    @given(st.integers(1, 12), st.integers(0, 11), st.fractions(min_value=0, max_value=8, max_denominator=8))
    def test_against_sigma_all(self, n, p, b):
        p = min(p, n - 1)
        e = sigma_all(two_block_spectrum(p, b, n)).sigmas
        assert all(two_block_sigma(p, b, n, j) == e[j] for j in range(n + 1))


class TestAnsatz:
    def test_example_recovered(self):
        assert (2, Fraction(2)) in ansatz_scan(11, 3)

    def test_no_witness_small(self):
        for n in (5, 6, 7):
            assert ansatz_scan(n, 3) == []
        assert ansatz_scan(7, 3, default_grid(32, 16)) == []

    def test_candidates_are_witnesses(self):
        for p, b in ansatz_scan(11, 3):
            c = classify(two_block_spectrum(p, b, 11), 3)
            assert c.is_A and not c.is_B

    def test_boundary_witness_n10(self):
        s = two_block_spectrum(2, 2, 10)
        cert = certify(s, 3)
        assert cert is not None
        assert [v for _, v, _ in cert.checks] == [0, 0, -672]

    def test_grid(self):
        g = default_grid(4, 2)
        assert g[0] == Fraction(1, 4) and g[-1] == 2 and len(g) == 8


class TestCertificate:
    def test_example(self):
        cert = certify(EX11, 3)
        assert cert is not None
        names = [c[0] for c in cert.checks]
        assert names == ["min 3-subset sum >= 0", "sigma_9 >= 0", "sigma_6 < 0"]
        assert [c[1] for c in cert.checks] == [0, 512, sigma_all(EX11)[6]]
        assert all(ok for _, _, ok in cert.checks)

    def test_cannot_build_invalid(self):
        with pytest.raises(InternalInvariantError):
            WitnessCertificate(Spectrum((1, 1, 1)), 3, 2)

    def test_needs_exact(self):
        with pytest.raises(PreconditionError):
            WitnessCertificate(Spectrum([-1.0, -1.0] + [2.0] * 9), 11, 3)

    def test_not_a_witness(self):
        assert certify((1, 2, 3), 2) is None

    def test_roundtrip(self):
        cert = certify(EX11, 3)
        d = json.loads(json.dumps(cert.to_dict()))
        assert all("/" in v for v in d["spectrum"])
        assert WitnessCertificate.from_dict(d) == cert

    @pytest.mark.parametrize("t", [Fraction(1, 3), Fraction(7, 2), 5])
    def test_scaling_closure(self, t):
        cert = certify(EX11, 3).scaled(t)
        assert classify(cert.spectrum, 3).is_A and not classify(cert.spectrum, 3).is_B


def test_rationalize():
    s = rationalize([0.5, 1 / 3, 2.0000000001])
    assert s.values == (Fraction(1, 3), Fraction(1, 2), Fraction(2))
    assert all(v.denominator <= 10**6 for v in rationalize([math.pi, math.e]).values)


class TestSearch:
    def test_n11(self):
        r = general_search(SearchConfig(11, 3, budget=10**6, seed=0))
        assert r.certificate is not None
        assert r.evaluations <= 10**6
        c = classify(r.certificate.spectrum, 3)
        assert c.is_A and not c.is_B
        assert r.certificate.scaled(Fraction(3, 7)).n == 11

    def test_deterministic(self):
        a = general_search(SearchConfig(11, 3, seed=4))
        b = general_search(SearchConfig(11, 3, seed=4))
        assert a == b

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_none_up_to_7(self, n):
        r = general_search(SearchConfig(n, 3, budget=200_000))
        assert r.certificate is None
        assert r.best_objective < 0
        assert r.evaluations <= 200_000

    def test_k2_none(self):
        assert general_search(SearchConfig(4, 2, budget=100_000)).certificate is None

    def test_config_validation(self):
        with pytest.raises(PreconditionError):
            SearchConfig(3, 4)
        with pytest.raises(PreconditionError):
            SearchConfig(3, 2, budget=0)


def test_frontier():
    rows = frontier_report(3, [5, 6, 7, 11], SearchConfig(5, 3, budget=50_000))
    assert [r.n for r in rows] == [5, 6, 7, 11]
    assert [r.witness_found for r in rows] == [False, False, False, True]
    assert rows[-1].source == "ansatz" and rows[-1].certificate is not None
    assert all(r.best_margin < 0 for r in rows[:3])
