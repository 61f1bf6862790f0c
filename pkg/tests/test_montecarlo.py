import math

import pytest

from streamswitch.collision import analytic_accept_probability, build_collision_algorithm
from streamswitch.montecarlo import Estimate, estimate_accept, estimate_tv_advantage
from streamswitch.oracle import enumerate_distributions
from streamswitch.streaming import ConstantAlgorithm, MemoryProfile, random_algorithm

SMALL = MemoryProfile(4, 3, (3, 5, 1))  # k = (1, 2, 0)


@pytest.fixture(scope="module")
def collision():
    alg = build_collision_algorithm(SMALL)
    assert alg.k == (1, 2, 0)
    return alg


def test_without_replacement_never_accepts(collision):
    est = estimate_accept(collision, "P", 200_000, seed=1)
    assert est.value == 0.0 and est.hits == 0 and est.stderr == 0.0


def test_with_replacement_matches_analytic(collision):
    est = estimate_accept(collision, "Q", 10**6, seed=2)
    assert analytic_accept_probability(4, collision.capacities) == pytest.approx(5 / 8)
    assert abs(est.value - 5 / 8) <= 5 * est.stderr


def test_stderr_is_bernoulli(collision):
    est = estimate_accept(collision, "Q", 12_345, seed=3)
    assert est.hits / est.samples == est.value
    assert est.stderr == math.sqrt(est.value * (1 - est.value) / est.samples)
    assert 0 <= est.value <= 1


@pytest.mark.parametrize("samples", [0, -5])
def test_needs_samples(collision, samples):
    with pytest.raises(ValueError):
        estimate_accept(collision, "Q", samples, seed=0)


def test_unknown_source(collision):
    with pytest.raises(ValueError):
        estimate_accept(collision, "R", 10, seed=0)


def test_constant_has_no_advantage():
    est = estimate_tv_advantage(ConstantAlgorithm(SMALL), 50_000, seed=4)
    assert est.value == 0.0


def test_collision_advantage(collision):
    est = estimate_tv_advantage(collision, 200_000, seed=5)
    assert abs(est.value - 5 / 8) <= 5 * est.stderr


def test_replay_is_identical(collision):
    assert estimate_tv_advantage(collision, 30_000, seed=6) == estimate_tv_advantage(collision, 30_000, seed=6)
    assert estimate_accept(collision, "Q", 30_000, seed=6) == estimate_accept(collision, "Q", 30_000, seed=6)


def test_workers_do_not_change_the_result(collision):
    one = estimate_accept(collision, "Q", 95_000, seed=7, block=10_000, workers=1)
    four = estimate_accept(collision, "Q", 95_000, seed=7, block=10_000, workers=4)
    assert one == four


def test_blocks_cover_every_sample(collision):
    est = estimate_accept(collision, "Q", 25_001, seed=8, block=10_000)
    assert est.samples == 25_001


def test_agrees_with_exact_probabilities():
    # pinned seeds; at 5 sigma a miss should essentially never happen
    profile = MemoryProfile(5, 3, (2, 3, 2))
    trials = agree = 0
    for seed in range(60):
        alg = random_algorithm(profile, seed)
        exact = enumerate_distributions(alg)
        for source, dist in (("P", exact.p_bit), ("Q", exact.q_bit)):
            est = estimate_accept(alg, source, 4_000, seed=1000 + seed)
            p = dist.prob(1)
            sigma = math.sqrt(p * (1 - p) / est.samples)
            trials += 1
            agree += abs(est.value - p) <= 5 * sigma
    assert agree >= 0.99 * trials


def test_estimate_is_plain_data():
    est = Estimate(0.25, 0.01, 100, 3, 25)
    assert (est.value, est.samples, est.hits) == (0.25, 100, 25)
