from fractions import Fraction
from itertools import product
import random

import pytest

from freefock.oracle import (catalan, cumulants_to_moments, free_poisson_moments, free_sum_moments,
                             is_noncrossing, measure_moments, moments_to_cumulants,
                             noncrossing_partitions, semicircle_moments)


def all_set_partitions(k):
    # restricted growth strings
    for rgs in product(range(k), repeat=k):
        if rgs[0] != 0 or any(rgs[i] > max(rgs[:i]) + 1 for i in range(1, k)):
            continue
        blocks = {}
        for pos, b in enumerate(rgs, start=1):
            blocks.setdefault(b, []).append(pos)
        yield tuple(tuple(v) for v in blocks.values())


@pytest.mark.parametrize("k", range(1, 8))
def test_recursive_enumeration_matches_filtered_brute_force(k):
    fast = {frozenset(map(frozenset, p)) for p in noncrossing_partitions(k)}
    slow = {frozenset(map(frozenset, p)) for p in all_set_partitions(k) if is_noncrossing(p)}
    assert fast == slow
    assert len(noncrossing_partitions(k)) == len(fast)


@pytest.mark.parametrize("k, count", [(1, 1), (3, 5), (4, 14), (10, 16796)])
def test_counts_are_catalan(k, count):
    assert len(noncrossing_partitions(k)) == count == catalan(k)


def test_rejects_orders_out_of_range():
    with pytest.raises(ValueError):
        noncrossing_partitions(0)
    with pytest.raises(ValueError):
        noncrossing_partitions(13)


def test_crossing_detected():
    assert not is_noncrossing(((1, 3), (2, 4)))
    assert is_noncrossing(((1, 4), (2, 3)))


def test_cumulant_examples():
    assert moments_to_cumulants([0, 1, 0, 2]) == [0, 1, 0, 0]
    assert moments_to_cumulants([0, 1, 0, 1]) == [0, 1, 0, -1]
    c = Fraction(7, 3)
    assert moments_to_cumulants([c, c ** 2, c ** 3, c ** 4]) == [c, 0, 0, 0]
    assert cumulants_to_moments([0, 1, 0, 0]) == [0, 1, 0, 2]
    assert cumulants_to_moments([0, 1, 0, -1]) == [0, 1, 0, 1]
    assert cumulants_to_moments([c, 0, 0, 0]) == [c, c ** 2, c ** 3, c ** 4]


def test_round_trip_random():
    rng = random.Random(3)
    for _ in range(20):
        kappa = [rng.uniform(-1, 1) for _ in range(10)]
        back = moments_to_cumulants(cumulants_to_moments(kappa))
        assert max(abs(a - b) for a, b in zip(kappa, back)) < 1e-12


def test_round_trip_exact_on_fractions():
    rng = random.Random(4)
    m = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(10)]
    assert cumulants_to_moments(moments_to_cumulants(m)) == m


@pytest.mark.parametrize("n", [1, 2, 3, 8, 100])
def test_bernoulli_sum_fourth_moment(n):
    # unscaled: kappa_2 = n, kappa_4 = -n, so m_4 = 2 n^2 - n
    exact = free_sum_moments([0, 1, 0, 1], n, 1)
    assert exact[3] == 2 * n * n - n
    assert free_sum_moments([0, 1, 0, 1], n, n ** -0.5)[3] == pytest.approx(2 - 1 / n, abs=1e-12)


def test_single_summand_is_identity():
    base = [0.3, 1.1, -0.4, 2.5, 0.9]
    assert free_sum_moments(base, 1, 1.0) == pytest.approx(base, abs=1e-12)


def test_symmetric_base_gives_zero_odd_moments():
    m = free_sum_moments(measure_moments([(-1, 0.5), (1, 0.5)], 9), 5, 0.3)
    assert all(m[j] == 0 for j in range(0, 9, 2))


def test_poisson_step_law_tends_to_catalan():
    n = 10 ** 6
    c = (n + 1) / n ** 0.5
    m = free_sum_moments(measure_moments([(c, 1 / (n + 1)), (0.0, n / (n + 1))], 8), n + 1, n ** -0.5)
    assert m == pytest.approx([catalan(k) for k in range(1, 9)], rel=1e-4)


def test_limit_law_moments():
    assert semicircle_moments(8) == [0, 1, 0, 2, 0, 5, 0, 14]
    assert free_poisson_moments(3, 1) == [1, 2, 5]
    assert free_poisson_moments(2, 0.5) == pytest.approx([0.5, 0.75])
