import itertools
import random

import pytest

from influmax import (
    Action,
    InfluenceFunction,
    PropagationIndex,
    brute_force_coverage,
    exact,
    greedy,
    reduce_max_k_coverage,
)
from influmax.baselines import materialize_views

from conftest import FIXTURE_ACTIONS, INFLUENCE_AT_8, OPT_AT_8, OPT_AT_10
from reference import brute_opt, random_stream


def indexed(actions):
    index = PropagationIndex()
    for a in actions:
        index.ingest(a)
    return index


def test_materialize_views_fixture():
    index = indexed(FIXTURE_ACTIONS)
    assert materialize_views(FIXTURE_ACTIONS[:8], index) == INFLUENCE_AT_8


def test_exact_fixture_windows():
    index = indexed(FIXTURE_ACTIONS)
    res = exact(FIXTURE_ACTIONS[:8], index, 2)
    assert (res.value, res.seeds) == OPT_AT_8
    res = exact(FIXTURE_ACTIONS[2:10], index, 2)
    assert (res.value, res.seeds) == OPT_AT_10


def test_exact_tie_break_is_first_in_seed_order():
    # u1/{a,b} and u2/{a,b} tie; enumeration order keeps u1
    actions = [Action(1, "u1"), Action(2, "a", 1), Action(3, "b", 1),
               Action(4, "u2"), Action(5, "a", 4), Action(6, "b", 4)]
    index = indexed(actions)
    res = exact(actions, index, 1)
    assert res.seeds == ("u1",)
    assert res.value == 3


def test_exact_k_zero_and_k_beyond_users():
    index = indexed(FIXTURE_ACTIONS[:2])
    assert exact([], index, 3).seeds == ()
    res = exact(FIXTURE_ACTIONS[:2], index, 5)
    assert set(res.seeds) == {"u1", "u2"}
    assert res.value == 2


def test_exact_budget():
    actions = [Action(i, f"u{i}") for i in range(1, 30)]
    index = indexed(actions)
    with pytest.raises(ValueError, match="budget"):
        exact(actions, index, 10, budget=1000)
    res = exact(actions, index, 2, budget=10**6)
    assert res.value == 2
    assert res.enumerated == 406


def test_exact_matches_reference_on_random_streams():
    rng = random.Random(15)
    for _ in range(60):
        actions = random_stream(rng, 7, 20)
        index = indexed(actions)
        lo = rng.randint(1, 10)
        window = [a for a in actions if a.seq >= lo]
        res = exact(window, index, 2)
        opt, seeds = brute_opt(actions, lo, 20, 2)
        assert res.value == opt
        assert res.seeds == seeds


def test_greedy_fixture():
    index = indexed(FIXTURE_ACTIONS)
    res = greedy(FIXTURE_ACTIONS[:8], index, 2)
    assert res.engine == "greedy"
    assert (res.value, res.seeds) == OPT_AT_8


def test_greedy_tie_prefers_lowest_user_id():
    actions = [Action(1, "b"), Action(2, "x", 1), Action(3, "a"), Action(4, "y", 3)]
    index = indexed(actions)
    res = greedy(actions, index, 1)
    assert res.seeds == ("a",)


def test_greedy_stops_at_zero_marginal():
    actions = [Action(1, "a"), Action(2, "a", 1)]
    index = indexed(actions)
    res = greedy(actions, index, 3)
    assert res.seeds == ("a",)
    assert res.value == 1


def test_greedy_guarantee_on_random_streams():
    bound = 1 - 1 / 2.718281828459045
    rng = random.Random(25)
    for _ in range(60):
        actions = random_stream(rng, 8, 25)
        index = indexed(actions)
        k = rng.randint(1, 3)
        res = greedy(actions, index, k)
        opt, _ = brute_opt(actions, 1, 25, k)
        assert res.value >= bound * opt - 1e-9
        assert res.value <= opt


def test_weighted_exact_and_greedy_agree_with_reference():
    weights = {"u0": 4.0, "u1": 0.5, "u2": 2.0}
    fn = InfluenceFunction.weighted(weights)
    rng = random.Random(35)
    for _ in range(30):
        actions = random_stream(rng, 5, 18)
        index = indexed(actions)
        res = exact(actions, index, 2, fn)
        opt, _ = brute_opt(actions, 1, 18, 2, weights)
        assert res.value == pytest.approx(opt)
        assert greedy(actions, index, 2, fn).value <= opt + 1e-9


def test_reduction_round_trip():
    sets = [{"x", "y"}, {"y", "z"}, {"w"}]
    actions, owners = reduce_max_k_coverage(sets, 2)
    assert owners == ["owner:0", "owner:1", "owner:2"]
    index = indexed(actions)
    views = materialize_views(actions, index)
    for i, s in enumerate(sets):
        assert views[f"owner:{i}"] == s | {f"owner:{i}"}


def test_reduction_rejects_empty_set():
    with pytest.raises(ValueError):
        reduce_max_k_coverage([{"x"}, set()], 1)


def test_brute_force_coverage():
    sets = [{"x", "y"}, {"y", "z"}, {"w"}]
    assert brute_force_coverage(sets, 1) == 2
    assert brute_force_coverage(sets, 2) == 3
    assert brute_force_coverage(sets, 3) == 4
    assert brute_force_coverage(sets, 9) == 4
