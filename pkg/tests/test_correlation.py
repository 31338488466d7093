"""Spearman against a brute-force oracle, plus matrix behavior.

The oracle is deliberately primitive: ranks by pairwise counting, Pearson
by explicit sums. It shares no code with the implementation.
"""

import math
from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metaland.analytics.correlation import (
    average_ranks,
    matrix_from_series,
    spearman,
)
from metaland.errors import DataError
from metaland.records import Series


def daily(values, name="s", start=date(2021, 1, 1)):
    return Series(name, [(start + timedelta(days=i), float(v)) for i, v in enumerate(values)])


# --------------------------------------------------------------------- oracle


def oracle_ranks(values):
    out = []
    for v in values:
        smaller = sum(1 for u in values if u < v)
        equal = sum(1 for u in values if u == v)
        out.append(smaller + (equal + 1) / 2.0)
    return out


def oracle_pearson(a, b):
    n = len(a)
    ma = sum(a) / n
    mb = sum(b) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    va = sum((x - ma) ** 2 for x in a)
    vb = sum((y - mb) ** 2 for y in b)
    if va == 0 or vb == 0:
        return None
    return cov / math.sqrt(va * vb)


def oracle_spearman(a_values, b_values):
    return oracle_pearson(oracle_ranks(a_values), oracle_ranks(b_values))


# ---------------------------------------------------------------------- tests


def test_monotone_pairs_are_exactly_plus_minus_one():
    up = daily([1, 2, 3, 10, 100], "up")
    up2 = daily([0.1, 0.2, 0.5, 0.9, 400.0], "up2")
    down = daily([5, 4, 3, 2, 1], "down")
    assert spearman(up, up2) == 1.0
    assert spearman(up, down) == -1.0


def test_random_pairs_match_oracle():
    rng = np.random.default_rng(12345)
    for trial in range(250):
        n = int(rng.integers(3, 40))
        a = rng.normal(size=n)
        b = rng.normal(size=n)
        if trial % 3 == 0:  # force ties sometimes
            a = np.round(a, 1)
            b = np.round(b, 1)
        got = spearman(daily(a, "a"), daily(b, "b"))
        want = oracle_spearman(list(a), list(b))
        if want is None:
            assert got is None
        else:
            assert got == pytest.approx(want, abs=1e-12)


def test_average_ranks_with_ties():
    assert list(average_ranks(np.array([10.0, 20.0, 20.0, 30.0]))) == [1.0, 2.5, 2.5, 4.0]


def test_common_date_restriction():
    a = Series("a", [(date(2021, 1, i), float(i)) for i in (1, 2, 3, 4)])
    b = Series("b", [(date(2021, 1, i), float(10 - i)) for i in (2, 3, 4, 5)])
    assert spearman(a, b) == -1.0  # three common dates, opposite order


def test_fewer_than_three_common_dates_is_an_error():
    a = daily([1, 2], "a")
    b = daily([2, 1], "b")
    with pytest.raises(DataError, match="common dates"):
        spearman(a, b)


def test_constant_series_is_undefined():
    assert spearman(daily([1, 1, 1, 1], "const"), daily([1, 2, 3, 4], "up")) is None


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=3, max_size=50, unique=True))
def test_invariant_under_strictly_monotone_transform(values):
    """rank-based: applying exp/cubic to one side must not change the result."""
    other = list(reversed(sorted(values)))
    base = spearman(daily(values, "a"), daily(other, "b"))
    transformed = [v**3 + 2 * v for v in values]  # strictly increasing map
    same = spearman(daily(transformed, "a"), daily(other, "b"))
    assert same == pytest.approx(base, abs=1e-9)


class TestMatrix:
    def test_monotone_transform_gives_unit_entry(self):
        a = daily([1, 5, 2, 8, 3], "price")
        b = daily([math.exp(v) for v in [1, 5, 2, 8, 3]], "tweets")
        m = matrix_from_series([a, b])
        assert m.entry("price", "tweets") == 1.0

    def test_constant_series_flagged_undefined(self):
        m = matrix_from_series([daily([1, 2, 3, 4], "a"), daily([7, 7, 7, 7], "google")])
        assert "google" in m.undefined
        assert m.entry("a", "google") is None
        assert m.entry("google", "google") is None
        assert m.entry("a", "a") == 1.0

    def test_symmetry_unit_diagonal_and_range(self, synth_small):
        from metaland.analytics.correlation import correlation_matrix
        from metaland.records import Platform

        ds = synth_small.datasets[Platform.DECENTRALAND]
        m = correlation_matrix(Platform.DECENTRALAND, ds)
        n = len(m.names)
        for i in range(n):
            for j in range(n):
                a, b = m.matrix[i][j], m.matrix[j][i]
                assert (a is None) == (b is None)
                if a is not None:
                    assert a == b
                    assert -1.0 <= a <= 1.0
            if m.names[i] not in m.undefined:
                assert m.matrix[i][i] == 1.0

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(7)
        series = [daily(rng.normal(size=30), name) for name in ("a", "b", "c", "d")]
        m = matrix_from_series(series)
        perm = [2, 0, 3, 1]
        mp = matrix_from_series([series[i] for i in perm])
        for pi, i in enumerate(perm):
            for pj, j in enumerate(perm):
                assert mp.matrix[pi][pj] == m.matrix[i][j]

    def test_duplicate_names_rejected(self):
        with pytest.raises(DataError, match="unique"):
            matrix_from_series([daily([1, 2, 3], "x"), daily([3, 2, 1], "x")])
