"""Reference solvers over a materialized window.

Both solvers rebuild influence views from scratch over exactly the supplied
window actions (response chains may still reach back before the window, so
chains come from a propagation index covering the full history). The greedy
solver gives the classic (1 - 1/e) guarantee; the exact solver enumerates
and is the test oracle for the engines' approximation ratios. A coverage
reduction turns set-cover instances into action streams for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .influence import InfluenceFunction
from .stream import Action, PropagationIndex, SeedResult, UserId


@dataclass(frozen=True, slots=True)
class ExactResult:
    seeds: tuple[UserId, ...]
    value: float
    enumerated: int


def materialize_views(
    actions: Sequence[Action], index: PropagationIndex
) -> dict[UserId, set[UserId]]:
    """Influence views over exactly these actions, chains from full history."""
    views: dict[UserId, set[UserId]] = {}
    for action in actions:
        influenced = action.user
        for owner in index.chain(action.seq):
            members = views.get(owner)
            if members is None:
                views[owner] = {influenced}
            else:
                members.add(influenced)
    return views


def greedy(
    actions: Sequence[Action],
    index: PropagationIndex,
    k: int,
    fn: InfluenceFunction | None = None,
) -> SeedResult:
    """k rounds of best-marginal selection; ties go to the lowest user id."""
    fn = fn if fn is not None else InfluenceFunction.cardinality()
    views = materialize_views(actions, index)
    seeds: list[UserId] = []
    covered: set[UserId] = set()
    value = 0
    candidates = sorted(views)
    for _ in range(min(k, len(candidates))):
        best_user = None
        best_gain = 0
        for user in candidates:
            if user in seeds:
                continue
            gain = fn.marginal(covered, views[user])
            if gain > best_gain:
                best_gain = gain
                best_user = user
        if best_user is None:
            break  # nothing left with positive marginal
        seeds.append(best_user)
        covered.update(views[best_user])
        value += best_gain
    return SeedResult(tuple(sorted(seeds)), value, engine="greedy")


def exact(
    actions: Sequence[Action],
    index: PropagationIndex,
    k: int,
    fn: InfluenceFunction | None = None,
    budget: int = 10**6,
) -> ExactResult:
    """Exhaustive optimum over subsets of size min(k, active users).

    Monotonicity makes smaller subsets dominated, so only the largest
    feasible size is enumerated. The first maximum in lexicographic
    combination order wins, which pins tie-breaking for tests.
    """
    fn = fn if fn is not None else InfluenceFunction.cardinality()
    if k == 0:
        return ExactResult((), 0, 0)
    views = materialize_views(actions, index)
    users = sorted(views)
    r = min(k, len(users))
    size = math.comb(len(users), r)
    if size > budget:
        raise ValueError(
            f"enumeration of C({len(users)}, {r}) = {size} subsets exceeds budget {budget}"
        )
    best_seeds: tuple[UserId, ...] = ()
    best_value = 0
    enumerated = 0
    for combo in combinations(users, r):
        enumerated += 1
        value = fn.eval_union(views[u] for u in combo)
        if value > best_value:
            best_value = value
            best_seeds = combo
    return ExactResult(best_seeds, best_value, enumerated)


def reduce_max_k_coverage(
    sets: Sequence[Iterable], k: int
) -> tuple[list[Action], list[str]]:
    """Encode a max-k-coverage instance as an action stream.

    Per set: one root action by a synthetic owner user, then one reply per
    element by the element itself. Selecting an owner as a seed covers its
    whole set (plus the owner); an exact solver on the stream with budget k
    recovers an optimal coverage solution.
    """
    actions: list[Action] = []
    owners: list[str] = []
    seq = 0
    for i, members in enumerate(sets):
        members = sorted(members)
        if not members:
            raise ValueError(f"set {i} is empty")
        owner = f"owner:{i}"
        owners.append(owner)
        seq += 1
        root_seq = seq
        actions.append(Action(seq=seq, user=owner))
        for element in members:
            seq += 1
            actions.append(Action(seq=seq, user=element, parent=root_seq))
    return actions, owners


def brute_force_coverage(sets: Sequence[Iterable], k: int) -> int:
    """Largest union over at most k of the sets."""
    pools = [set(s) for s in sets]
    best = 0
    r = min(k, len(pools))
    for combo in combinations(range(len(pools)), r):
        union: set = set()
        for i in combo:
            union.update(pools[i])
        best = max(best, len(union))
    return best
