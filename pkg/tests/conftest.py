"""Shared fixture stream and its hand-derived ground truth.

The ten-action stream below exercises every structural case: root actions,
replies, a reply chain crossing the window boundary, repeat actors, and a
user influencing itself through a reply to its own thread. All expected
values were worked out by hand from the definitions and are frozen here;
tests compare both the reference oracle and the engines against them.
"""

import pytest

from influmax import Action

FIXTURE_ACTIONS = [
    Action(1, "u1"),
    Action(2, "u2", 1),
    Action(3, "u3"),
    Action(4, "u3", 1),
    Action(5, "u4", 3),
    Action(6, "u1", 4),
    Action(7, "u5", 3),
    Action(8, "u2"),
    Action(9, "u6", 8),
    Action(10, "u6", 9),
]

# ancestor chains (dedup, actor first) per action seq
FIXTURE_CHAINS = {
    1: ("u1",),
    2: ("u2", "u1"),
    3: ("u3",),
    4: ("u3", "u1"),
    5: ("u4", "u3"),
    6: ("u1", "u3"),
    7: ("u5", "u3"),
    8: ("u2",),
    9: ("u6", "u2"),
    10: ("u6", "u2"),
}

# influence sets over the window of the first 8 actions
INFLUENCE_AT_8 = {
    "u1": {"u1", "u2", "u3"},
    "u2": {"u2"},
    "u3": {"u1", "u3", "u4", "u5"},
    "u4": {"u4"},
    "u5": {"u5"},
}

# window [3, 10] after two more slides
INFLUENCE_AT_10 = {
    "u1": {"u1", "u3"},
    "u2": {"u2", "u6"},
    "u3": {"u1", "u3", "u4", "u5"},
    "u4": {"u4"},
    "u5": {"u5"},
    "u6": {"u6"},
}

OPT_AT_8 = (5, ("u1", "u3"))
OPT_AT_10 = (6, ("u2", "u3"))

# k=2, beta=0.3: largest single view at t=8 has value 4, lattice spans 6..10
LATTICE_AT_8 = (6, 10)

# oldest checkpoint's instances at t=8: (exponent, candidates, value)
SIEVE_STATES_AT_8 = [
    (6, ("u1", "u3"), 5),
    (7, ("u1", "u4"), 4),
    (8, ("u1", "u3"), 5),
    (9, ("u1",), 3),
    (10, ("u3",), 4),
]

# best value of a checkpoint started at each seq 1..8, all fed through t=8
CHECKPOINT_VALUES_AT_8 = [5, 5, 5, 5, 4, 3, 2, 1]

# sparse engine, N=8, L=1, beta=0.3: (position, start_seq, value) per slide
SIC_SNAPSHOTS = {
    5: [(4, 1, 4), (5, 2, 3), (6, 3, 2), (7, 4, 2), (8, 5, 1)],
    6: [(3, 1, 4), (6, 4, 3), (7, 5, 2), (8, 6, 1)],
    7: [(2, 1, 5), (5, 4, 4), (6, 5, 3), (7, 6, 2), (8, 7, 1)],
    8: [(1, 1, 5), (5, 5, 4), (6, 6, 3), (7, 7, 2), (8, 8, 1)],
    9: [(0, 1, 5), (5, 6, 4), (6, 7, 3), (7, 8, 2), (8, 9, 1)],
    10: [(-1, 1, 5), (4, 6, 4), (5, 7, 3), (6, 8, 2), (7, 9, 1), (8, 10, 1)],
}

# positions deleted by the prune pass, keyed by slide
SIC_PRUNES = {6: [4, 5], 8: [4], 9: [4]}


@pytest.fixture
def fixture_actions():
    return list(FIXTURE_ACTIONS)
