import json

import numpy as np
import pytest

from amplicount.errors import ContractError
from amplicount.oracles import (
    HeuristicFamily,
    induced_seed_oracle,
    load_family,
    load_oracle,
    make_random_oracle,
    make_subset_oracle,
    oracle_from_spec,
)
from amplicount.verify import example_family_path


def test_subset_oracle_examples():
    F = make_subset_oracle(2, [3])
    assert [F.predicate(i) for i in range(4)] == [False, False, False, True]
    assert F.queries == 0
    assert not make_subset_oracle(3, []).mask.any()
    assert make_subset_oracle(2, [0, 1, 2, 3]).mask.all()
    with pytest.raises(ContractError):
        make_subset_oracle(2, [4])


def test_random_oracle_examples():
    assert make_random_oracle(4, 0, 5).t == 0
    assert make_random_oracle(4, 16, 5).mask.all()
    assert make_random_oracle(4, 4, 7).solutions() == make_random_oracle(4, 4, 7).solutions()
    with pytest.raises(ContractError):
        make_random_oracle(4, 17, 0)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_random_oracle_has_exactly_t_solutions(n):
    N = 1 << n
    for t in range(N + 1):
        F = make_random_oracle(n, t, seed=t)
        assert sum(F.predicate(x) for x in range(N)) == t


def test_counting_rules():
    F = make_subset_oracle(3, [2])
    assert F.evaluate(2) and not F.evaluate(1)
    F.charge(3)
    assert F.queries == 5
    G = F.clone()
    assert G.queries == 0 and G.solutions() == [2]
    lifted = F.with_ancilla()
    assert lifted.solutions() == [5]
    lifted.charge()
    assert F.queries == 6


def test_oracle_file_forms(tmp_path):
    p = tmp_path / "o.json"
    p.write_text(json.dumps({"n": 3, "solutions": [1, 6]}))
    assert load_oracle(p).solutions() == [1, 6]
    p.write_text(json.dumps({"n": 4, "t": 5, "seed": 9}))
    assert load_oracle(p).solutions() == make_random_oracle(4, 5, 9).solutions()
    for bad in ('{"n": 3}', '{"solutions": [1]}', "[1, 2]", "{oops"):
        p.write_text(bad)
        with pytest.raises(ContractError):
            load_oracle(p)


def _family(members, heuristic, R):
    return HeuristicFamily(members, np.full(len(members), 1 / len(members)), heuristic, R)


def test_induced_identity_is_F():
    F = make_random_oracle(5, 6, 1)
    G_prime = induced_seed_oracle(_family([F], lambda m, r: r, 32), 0)
    np.testing.assert_array_equal(G_prime.mask, F.mask)


def test_induced_constant_to_solution():
    F = make_subset_oracle(5, [17])
    fam = _family([F], lambda m, r: 17, 8)
    G_prime = induced_seed_oracle(fam, 0)
    assert G_prime.mask.all() and fam.h(0) == 8


def test_induced_h_matches_exhaustive_count():
    fam = load_family(example_family_path())
    for i, F in enumerate(fam.members):
        G_prime = induced_seed_oracle(fam, i)
        brute = sum(F.predicate((16 * r) % F.N) for r in range(fam.seed_space_size))
        assert G_prime.t == brute == fam.h(i)
        assert F.queries == 0


def test_family_validation():
    F = make_subset_oracle(2, [1])
    with pytest.raises(ContractError):
        HeuristicFamily([F], np.array([0.5]), lambda m, r: r, 4)
    with pytest.raises(ContractError):
        HeuristicFamily([F], np.array([1.0]), lambda m, r: r, 6)


def test_heuristic_spec_forms(tmp_path):
    table = tmp_path / "table.json"
    table.write_text(json.dumps([3, 2, 1, 0]))
    base = {"seed_space_size": 4, "members": [{"n": 2, "solutions": [0]}]}
    from amplicount.oracles import family_from_spec

    for spec, image in [
        ("identity", [0, 1, 2, 3]),
        ("constant:2", [2, 2, 2, 2]),
        ("affine:3,1 mod N", [1, 0, 3, 2]),
        (f"table:{table.name}", [3, 2, 1, 0]),
    ]:
        fam = family_from_spec({**base, "heuristic": spec}, tmp_path)
        assert fam.image(0).tolist() == image
    with pytest.raises(ContractError):
        family_from_spec({**base, "heuristic": "magic"})


def test_oracle_spec_rejects_non_integer_n():
    with pytest.raises(ContractError):
        oracle_from_spec({"n": "3", "solutions": []})
