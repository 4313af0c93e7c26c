import numpy as np
import pytest

from sparsetest.sampling import RandomSource, rand_index, rand_range, range_bound, range_pmf


def test_children_are_deterministic_and_distinct():
    a = RandomSource(7).child(1, 2).random(5)
    b = RandomSource(7).child(1, 2).random(5)
    c = RandomSource(7).child(2, 1).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_rand_index_range():
    x = rand_index(RandomSource(0), 5, size=2000)
    assert x.min() == 0 and x.max() == 4
    with pytest.raises(ValueError):
        rand_index(RandomSource(0), 0)


@pytest.mark.parametrize("delta,expect", [(0.1, 20), (0.3, 7), (1.0, 2), (5.0, 1)])
def test_range_bound(delta, expect):
    assert range_bound(delta) == expect


def test_pmf_sums_to_one_and_matches_tail():
    for i in (1, 2, 7, 40):
        p = range_pmf(i)
        assert p.sum() == pytest.approx(1.0)
        tail = p[::-1].cumsum()[::-1]  # P(j >= x) for x = 1..i
        assert tail == pytest.approx(np.arange(1, i + 1, dtype=float) ** -2)


def test_rand_range_tail_frequencies():
    i = 20
    j = rand_range(RandomSource(1), i, size=200_000)
    assert j.min() >= 1 and j.max() <= i
    for x in (2, 3, 5, 10, 20):
        p = x ** -2.0
        sd = np.sqrt(p * (1 - p) / j.size)
        assert abs((j >= x).mean() - p) <= 4 * sd


def test_rand_range_scalar_and_errors():
    assert isinstance(rand_range(RandomSource(0), 3), int)
    assert rand_range(RandomSource(0), 1) == 1
    with pytest.raises(ValueError):
        rand_range(RandomSource(0), 0)
