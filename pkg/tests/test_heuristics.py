import math

import numpy as np
import pytest

from amplicount.amplification import grover_search
from amplicount.heuristics import (
    calibrate_kappa,
    cauchy_schwarz_bound,
    heuristic_benchmark,
    heuristic_search,
)
from amplicount.oracles import HeuristicFamily, load_family, make_subset_oracle
from amplicount.verify import example_family_path


def family(members, heuristic, R, weights=None):
    if weights is None:
        weights = np.full(len(members), 1 / len(members))
    return HeuristicFamily(members, np.asarray(weights, dtype=float), heuristic, R)


def test_constant_heuristic_finds_solution_immediately(rng):
    F = make_subset_oracle(6, [41])
    res = heuristic_search(family([F], lambda m, r: 41, 16), 0, rng)
    assert res.x == 41 and res.seed_queries <= 1
    assert res.g_evaluations == res.seed_queries + 1


def test_identity_heuristic_matches_plain_search():
    F = make_subset_oracle(6, [3, 40])
    fam = family([F], lambda m, r: r, 64)
    for seed in range(30):
        a = heuristic_search(fam, 0, np.random.default_rng(seed))
        b = grover_search(F.clone(), np.random.default_rng(seed))
        assert (a.seed, a.seed_queries) == (b.solution, b.queries)
        assert a.x == a.seed


def test_returned_points_are_solutions():
    fam = load_family(example_family_path())
    rng = np.random.default_rng(5)
    for i, F in enumerate(fam.members):
        for _ in range(5):
            res = heuristic_search(fam, i, rng)
            assert F.predicate(res.x)


def test_not_found_when_no_seed_works(rng):
    F = make_subset_oracle(4, [1])
    res = heuristic_search(family([F], lambda m, r: 0, 16), 0, rng, budget=40)
    assert not res.found and res.seed_queries <= 40


def test_heuristic_beats_unassisted_search():
    # |R| = 256 with 64 good seeds against |X| = 4096 with 4 solutions
    sols = [7, 700, 2100, 3999]
    F = make_subset_oracle(12, sols)
    fam = family([F], lambda m, r: sols[r % 4] if r % 4 == 0 else (r * 16 + 1) % 4096, 256)
    assert fam.h(0) == 64
    trials = 500
    seeded = np.mean([heuristic_search(fam, 0, np.random.default_rng(s)).seed_queries for s in range(trials)])
    kappa = calibrate_kappa(np.random.default_rng(1), n=8, trials=200)
    assert seeded <= kappa * math.sqrt(256 / 64)
    assert seeded < kappa * math.sqrt(4096 / 4) / 4


def test_cauchy_schwarz_arithmetic():
    assert cauchy_schwarz_bound([0.5, 0.5], [4, 64]) == pytest.approx(math.sqrt(34))
    assert math.sqrt(34) == pytest.approx(5.83095, abs=1e-5)
    assert cauchy_schwarz_bound([1.0], [16]) == pytest.approx(4)


def test_single_member_reduces_to_plain_expectation():
    F = make_subset_oracle(8, range(4))
    fam = family([F], lambda m, r: r, 256)
    report = heuristic_benchmark(fam, 200, np.random.default_rng(2), kappa=1.8)
    assert report.cauchy_schwarz == pytest.approx(math.sqrt(256 / 4))
    assert report.members[0].trials == 200
    assert not report.members[0].efficient


def test_benchmark_on_example_family():
    fam = load_family(example_family_path())
    assert np.isclose(fam.weights.sum(), 1)
    kappa = calibrate_kappa(np.random.default_rng(0))
    passes = 0
    for rep in range(10):
        report = heuristic_benchmark(fam, 160, np.random.default_rng(rep + 1), kappa)
        passes += report.within_bound
        for m in report.members:
            assert m.h <= fam.seed_space_size and m.t <= fam.members[m.member].N
    assert passes >= 9


def test_members_without_good_seeds_are_excluded():
    F1 = make_subset_oracle(4, [2])
    F2 = make_subset_oracle(4, [9])
    fam = family([F1, F2], lambda m, r: 2, 8)
    with pytest.warns(UserWarning):
        report = heuristic_benchmark(fam, 20, np.random.default_rng(0), kappa=2)
    assert report.excluded == [1] and len(report.members) == 1


def test_kappa_is_deterministic():
    a = calibrate_kappa(np.random.default_rng(4), n=6, trials=50)
    b = calibrate_kappa(np.random.default_rng(4), n=6, trials=50)
    assert a == b and 0 < a < 9
