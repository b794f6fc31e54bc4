import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chh.summaries import MisraGriesSummary, SpaceSavingSummary


def run_ss(k, items):
    s = SpaceSavingSummary(k)
    s.update_many(items)
    return s


class TestSpaceSavingBasics:
    def test_empty(self):
        s = SpaceSavingSummary(2)
        assert len(s) == 0
        assert s.min_count() == 0
        assert list(s) == []

    def test_invalid_capacity(self):
        with pytest.raises(ValueError):
            SpaceSavingSummary(0)

    def test_large_capacity(self):
        assert SpaceSavingSummary(4200).capacity == 4200

    def test_replacement_trace(self):
        s = run_ss(2, "abac")
        assert dict(iter(s)) == {"a": 2, "c": 2}
        assert s.total() == 4

    def test_no_eviction_trace(self):
        s = run_ss(3, "abac")
        assert dict(iter(s)) == {"a": 2, "b": 1, "c": 1}

    def test_single_counter_trace(self):
        s = run_ss(1, "ab")
        assert dict(iter(s)) == {"b": 2}
        # overestimation of b is exactly the minimum count, within n/k
        assert s.min_count() == 2
        assert s.estimate("b") - 1 == 1 <= s.min_count() <= 2 / 1

    def test_accessors(self):
        s = run_ss(2, "abac")
        assert s.estimate("a") == 2
        assert s.estimate("b") is None
        assert "a" in s and "b" not in s
        items = list(s)
        assert len(items) == len({i for i, _ in items}) == 2

    def test_min_zero_until_full(self):
        s = run_ss(4, "aab")
        assert s.min_count() == 0


class TestSpaceSavingProperties:
    @pytest.mark.parametrize("seed", range(6))
    def test_bounds_against_bruteforce(self, seed):
        rng = random.Random(seed)
        k = rng.randint(1, 32)
        n = rng.randint(1, 10_000)
        universe = rng.choice([5, 30, 200, 5000])
        stream = [rng.randrange(universe) for _ in range(n)]
        s = run_ss(k, stream)
        exact = Counter(stream)
        fmin = s.min_count()
        assert fmin <= n / k
        assert s.total() == n
        assert len(s) <= k
        for v, f in exact.items():
            est = s.estimate(v)
            if est is None:
                # untracked items cannot beat the minimum counter
                assert f <= fmin
            else:
                assert f <= est <= f + fmin

    def test_sum_law_at_every_step(self):
        rng = random.Random(99)
        s = SpaceSavingSummary(8)
        for i in range(1, 2000):
            s.update(rng.randrange(40))
            if i % 97 == 0:
                assert s.total() == i
                assert len(s) <= 8
        assert s.total() == 1999

    @pytest.mark.parametrize("k", [8, 64, 512])
    def test_bounded_structural_ops_per_update(self, k):
        # constant number of bucket-list operations per update, whatever k is
        rng = random.Random(5)
        s = SpaceSavingSummary(k)
        worst = 0
        for _ in range(5000):
            before = s.ops
            s.update(rng.randrange(4 * k))
            worst = max(worst, s.ops - before)
        assert worst <= 6

    @given(st.lists(st.integers(min_value=0, max_value=30), max_size=300),
           st.integers(min_value=1, max_value=12))
    @settings(max_examples=60, deadline=None)
    def test_hypothesis_invariants(self, stream, k):
        s = run_ss(k, stream)
        assert s.total() == len(stream)
        assert len(s) <= k
        exact = Counter(stream)
        for v, f in s:
            assert f >= exact[v]


class TestMisraGries:
    def test_invalid_capacity(self):
        with pytest.raises(ValueError):
            MisraGriesSummary(0)

    def test_contention_trace(self):
        m = MisraGriesSummary(2)
        for it in "abac":
            m.update(it)
        assert dict(iter(m)) == {"a": 1}

    def test_no_contention(self):
        m = MisraGriesSummary(2)
        for it in "aa":
            m.update(it)
        assert dict(iter(m)) == {"a": 2}

    def test_single_counter_trace(self):
        m = MisraGriesSummary(1)
        for it in "abb":
            m.update(it)
        assert dict(iter(m)) == {"b": 1}

    def test_decrement_hook_fires_for_survivors_only(self):
        m = MisraGriesSummary(4)
        m.counts.update({"a": 2, "b": 1})
        seen = []
        m.decrement_all(seen.append)
        assert dict(iter(m)) == {"a": 1}
        assert seen == ["a"]

    def test_decrement_empty(self):
        m = MisraGriesSummary(4)
        seen = []
        m.decrement_all(seen.append)
        assert dict(iter(m)) == {}
        assert seen == []

    def test_decrement_eviction_skips_hook(self):
        m = MisraGriesSummary(4)
        m.counts["a"] = 1
        seen = []
        m.decrement_all(seen.append)
        assert dict(iter(m)) == {}
        assert seen == []

    @pytest.mark.parametrize("seed", range(6))
    def test_underestimation_bounds(self, seed):
        rng = random.Random(seed + 100)
        k = rng.randint(1, 32)
        n = rng.randint(1, 10_000)
        stream = [rng.randrange(rng.choice([5, 50, 400])) for _ in range(n)]
        m = MisraGriesSummary(k)
        for it in stream:
            m.update(it)
        assert len(m) <= k
        exact = Counter(stream)
        for v, f in exact.items():
            est = m.estimate(v) or 0
            assert est <= f
            assert f - est <= n / k
            # tighter, non-contractual bound
            assert f - est <= n / (k + 1)
