"""Race the dense and sparse engines over one synthetic stream.

Generates a 20k-action stream with recency-biased replies, runs both
engines at the same window settings, and reports what the pruning buys:
far fewer checkpoints and a higher update rate at nearly the same answer
quality. Run from the repository root:

    python3 demos/engines_on_synthetic.py
"""

import time

from influmax import (
    IcEngine,
    SicEngine,
    WindowConfig,
    checkpoint_count_bound,
    generate,
    syn_n,
)

CFG = WindowConfig(n=2_000, l=50, k=5, beta=0.2)
NUM_ACTIONS = 20_000


def drive(engine, actions):
    """Feed the stream in slide-sized batches; time the update path only."""
    values = []
    counts = []
    elapsed = 0.0
    for i in range(0, NUM_ACTIONS, CFG.l):
        batch = actions[i : i + CFG.l]
        t0 = time.perf_counter()
        engine.slide(batch)
        elapsed += time.perf_counter() - t0
        values.append(engine.query().value)
        counts.append(engine.checkpoint_count)
    return values, counts, elapsed


if __name__ == "__main__":
    actions = generate(syn_n(num_users=1 << 12, num_actions=NUM_ACTIONS, seed=7))
    print(f"stream: {NUM_ACTIONS} actions, window {CFG.n}, slide {CFG.l}, k={CFG.k}")

    rows = {}
    for label, engine in (("dense", IcEngine(CFG)), ("sparse", SicEngine(CFG))):
        values, counts, seconds = drive(engine, actions)
        rows[label] = (values, counts, seconds)
        print(
            f"  {label:6s}: {NUM_ACTIONS / seconds:7.0f} actions/s, "
            f"checkpoints mean {sum(counts) / len(counts):5.1f} max {max(counts)}, "
            f"mean answer value {sum(values) / len(values):.1f}"
        )

    dense_values, dense_counts, _ = rows["dense"]
    sparse_values, sparse_counts, _ = rows["sparse"]
    worst = min(s / d for s, d in zip(sparse_values, dense_values) if d)
    bound = checkpoint_count_bound(CFG.n, CFG.beta)
    print(f"  sparse/dense answer ratio: worst slide {worst:.3f}")
    print(f"  sparse checkpoint bound for this window: {bound:.1f}")
    print("  dense keeps one checkpoint per slide in the window "
          f"({CFG.n // CFG.l}); sparse drops the redundant ones")
