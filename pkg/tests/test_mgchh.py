import random

import pytest

from chh.csschh import ChhParams, ParameterError
from chh.mgchh import NestedMgSketch, plan_capacities
from conftest import exact_counts, zipf_pairs


class TestSizing:
    def test_tight_branch(self):
        # alpha = 1.1/0.05 = 22; eps1 at the boundary lands in the
        # first branch: s1 = 2*alpha/eps2, s2 = 2/eps2
        s1, s2 = plan_capacities(ChhParams(0.1, 0.1, 0.05, 0.05))
        assert (s1, s2) == (880, 40)

    def test_loose_branch(self):
        # alpha = 1.1/0.0995 ~ 11.055, eps1 below eps2/(2 alpha)
        s1, s2 = plan_capacities(ChhParams(0.1, 0.1, 0.0005, 0.05))
        assert (s1, s2) == (2000, 23)

    def test_requires_small_eps1(self):
        with pytest.raises(ParameterError):
            plan_capacities(ChhParams(0.1, 0.1, 0.06, 0.05))

    @pytest.mark.parametrize("p", [
        (0.1, 0.1, 0.05, 0.05),
        (0.1, 0.1, 0.0005, 0.05),
        (0.1, 0.1, 0.04, 0.05),
        (0.1, 0.5, 0.001, 0.4),
        (0.05, 0.2, 0.01, 0.1),
        (0.02, 0.1, 0.005, 0.05),
    ])
    def test_error_guarantees(self, p):
        params = ChhParams(*p)
        s1, s2 = plan_capacities(params)
        alpha = (1.0 + params.phi2) / (params.phi1 - params.eps1)
        assert 1.0 / s1 <= params.eps1 + 1e-12
        assert 1.0 / s2 + alpha / s1 <= params.eps2 + 1e-12


class TestUpdate:
    def test_install_and_increment(self):
        sk = NestedMgSketch(2, 2)
        sk.update("a", "x")
        sk.update("a", "x")
        sk.update("a", "y")
        e = sk.table["a"]
        assert e.freq == 3
        assert e.secondaries.counts == {"x": 2, "y": 1}

    def test_secondary_overflow_decrements(self):
        sk = NestedMgSketch(2, 2)
        for y in ["x", "x", "y", "z"]:
            sk.update("a", y)
        e = sk.table["a"]
        # z overflowed the secondary table: x,y decremented, y dropped, z absent
        assert e.freq == 4
        assert e.secondaries.counts == {"x": 1}

    def test_primary_overflow(self):
        sk = NestedMgSketch(1, 2)
        sk.update("a", "x")
        sk.update("a", "x")
        sk.update("b", "y")
        # b not installed; a decremented to 1 and one secondary unit removed
        assert set(sk.table) == {"a"}
        e = sk.table["a"]
        assert e.freq == 1
        assert e.secondaries.counts == {"x": 1}

    def test_primary_removed_at_zero(self):
        sk = NestedMgSketch(1, 2)
        sk.update("a", "x")
        sk.update("b", "y")
        assert sk.table == {}
        sk.update("c", "z")
        assert set(sk.table) == {"c"}

    def test_deterministic_under_seed(self):
        xs, ys = zipf_pairs(seed=3, n=5000, rho=1.0, m1=64, m2=64)
        a = NestedMgSketch(8, 4, seed=42)
        b = NestedMgSketch(8, 4, seed=42)
        a.update_many(xs, ys)
        b.update_many(xs, ys)
        sa = {d: (e.freq, dict(e.secondaries.counts)) for d, e in a.table.items()}
        sb = {d: (e.freq, dict(e.secondaries.counts)) for d, e in b.table.items()}
        assert sa == sb


class TestInvariants:
    @pytest.mark.parametrize("seed", range(5))
    def test_capacity_and_underestimation(self, seed):
        xs, ys = zipf_pairs(seed=seed, n=8000, rho=1.1, m1=128, m2=128)
        sk = NestedMgSketch(16, 8, seed=seed)
        sk.update_many(xs, ys)
        fx, fxy = exact_counts(xs, ys)
        assert len(sk.table) <= 16
        n = len(xs)
        for d, e in sk.table.items():
            assert len(e.secondaries.counts) <= 8
            assert 0 < e.freq <= fx[d]
            assert fx[d] - e.freq <= n / (16 + 1)
            total_sec = sum(e.secondaries.counts.values())
            assert total_sec <= e.freq
            for s, c in e.secondaries.counts.items():
                assert 0 < c <= fxy[(d, s)]


class TestQuery:
    def test_small_example(self):
        sk = NestedMgSketch(8, 8)
        for p in [("a", "x"), ("a", "x"), ("a", "x"), ("b", "x")]:
            sk.update(*p)
        rep = sk.query(0.4, 0.5)
        assert rep.primaries == [("a", 3)]
        assert rep.chhs == [("a", "x", 3)]

    def test_high_threshold_empty(self):
        sk = NestedMgSketch(8, 8)
        for p in [("a", "x"), ("a", "x"), ("a", "x"), ("b", "x")]:
            sk.update(*p)
        rep = sk.query(0.95, 0.5)
        assert rep.primaries == [] and rep.chhs == []

    @pytest.mark.parametrize("seed", range(5))
    def test_no_false_negatives(self, seed):
        phi1, phi2 = 0.05, 0.1
        params = ChhParams(phi1, phi2, 0.02, 0.05)
        s1, s2 = plan_capacities(params)
        xs, ys = zipf_pairs(seed=seed + 20, n=20_000, rho=1.2, m1=512, m2=512)
        sk = NestedMgSketch(s1, s2, seed=seed)
        sk.update_many(xs, ys)
        fx, fxy = exact_counts(xs, ys)
        n = len(xs)
        rep = sk.query(phi1, phi2)
        reported_p = rep.primary_set()
        reported_t = rep.chh_set()
        for x, f in fx.items():
            if f > phi1 * n:
                assert x in reported_p
                for (xx, y), ft in fxy.items():
                    if xx == x and ft > phi2 * f:
                        assert (x, y) in reported_t
