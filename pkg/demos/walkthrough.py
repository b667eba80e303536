"""Walk a ten-action stream through the whole stack by hand.

Prints the propagation chains, the per-user influence views, the exact
optimum for two overlapping windows, and what both engines answer. Run it
from the repository root:

    python3 demos/walkthrough.py
"""

from influmax import (
    Action,
    IcEngine,
    PropagationIndex,
    SicEngine,
    WindowConfig,
    exact,
)

STREAM = [
    Action(1, "u1"),
    Action(2, "u2", parent=1),
    Action(3, "u3"),
    Action(4, "u3", parent=1),
    Action(5, "u4", parent=3),
    Action(6, "u1", parent=4),
    Action(7, "u5", parent=3),
    Action(8, "u2"),
    Action(9, "u6", parent=8),
    Action(10, "u6", parent=9),
]


def show_chains():
    print("== propagation chains ==")
    index = PropagationIndex()
    for a in STREAM:
        chain = index.ingest(a)
        parent = f"replies to {a.parent}" if a.parent else "root"
        print(f"  action {a.seq:2d} by {a.user}  ({parent})  credits {chain}")
    return index


def show_views(index):
    print("\n== influence views of the first window (actions 1..8) ==")
    engine = IcEngine(WindowConfig(n=8, l=1, k=2, beta=0.3))
    for a in STREAM[:8]:
        engine.slide([a])
    oldest = engine.checkpoints[0]
    for user in sorted(oldest.table.views):
        members = ", ".join(sorted(oldest.table.views[user]))
        print(f"  {user} influenced {{{members}}}")
    res = exact(STREAM[:8], index, 2)
    print(f"  exact optimum: seeds {res.seeds} cover {res.value} users")
    q = engine.query()
    print(f"  engine answer: seeds {q.seeds} cover {q.value} users")
    return engine


def slide_forward(engine, index):
    print("\n== slide to the second window (actions 3..10) ==")
    for a in STREAM[8:]:
        engine.slide([a])
    res = exact(STREAM[2:], index, 2)
    print(f"  exact optimum: seeds {res.seeds} cover {res.value} users")
    q = engine.query()
    print(f"  engine answer: seeds {q.seeds} cover {q.value} users")


def show_pruning():
    print("\n== sparse engine on the same stream ==")
    print("  each row is one slide: (position, start action, value) per checkpoint")
    engine = SicEngine(WindowConfig(n=8, l=1, k=2, beta=0.3))
    for a in STREAM:
        engine.slide([a])
        cells = "  ".join(f"({p:+d}, a{s}, {v:g})" for p, s, v in engine.snapshot())
        print(f"  after {a.seq:2d}: {cells}")
    q = engine.query()
    print(
        f"  final answer: seeds {q.seeds} with value {q.value:g} counted "
        f"from action {q.checkpoint_start} on"
    )
    print("  positions <= 0 mark the one expired checkpoint kept as an anchor")


if __name__ == "__main__":
    idx = show_chains()
    eng = show_views(idx)
    slide_forward(eng, idx)
    show_pruning()
