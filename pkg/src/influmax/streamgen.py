"""Synthetic action-stream generator.

Users come from a recursive-quadrant (R-MAT style) random graph; a user's
out-degree is its selection weight, which yields the usual power-law
activity skew. Each action either starts a new thread (post) or responds to
the action a sampled distance earlier (follow). Response distances are
exponential; the two presets differ only in their mean: syn_o favors old
posts (mean 500k), syn_n favors recent ones (mean 5k).

Quadrant probabilities (0.57, 0.19, 0.19, 0.05) and edges = 10 * users are
calibration defaults, as is the 0.6 follow fraction; all three are config
knobs, not dataset constants.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .stream import Action, write_ndjson

_CHUNK = 1 << 20


@dataclass(frozen=True, slots=True)
class GenConfig:
    num_users: int
    num_actions: int
    lam: float
    follow_fraction: float = 0.6
    rmat: tuple[float, float, float, float] = (0.57, 0.19, 0.19, 0.05)
    edges: int | None = None  # default 10 * num_users
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_users < 1 or self.num_actions < 0:
            raise ValueError("need at least one user and a nonnegative action count")
        if not 0.0 <= self.follow_fraction <= 1.0:
            raise ValueError(f"follow fraction {self.follow_fraction} outside [0, 1]")
        if self.lam <= 0:
            raise ValueError(f"rate must be positive, got {self.lam}")
        if any(p < 0 for p in self.rmat) or abs(sum(self.rmat) - 1.0) > 1e-9:
            raise ValueError(f"quadrant probabilities {self.rmat} must be >= 0 and sum to 1")
        if self.edges is not None and self.edges < 0:
            raise ValueError(f"edge count must be nonnegative, got {self.edges}")


def syn_o(num_users: int = 1 << 21, num_actions: int = 10**6, seed: int = 0) -> GenConfig:
    """Old posts get more followers: mean response distance 500k."""
    return GenConfig(num_users=num_users, num_actions=num_actions, lam=2.0e-6, seed=seed)


def syn_n(num_users: int = 1 << 21, num_actions: int = 10**6, seed: int = 0) -> GenConfig:
    """Recent posts get more followers: mean response distance 5k."""
    return GenConfig(num_users=num_users, num_actions=num_actions, lam=2.0e-4, seed=seed)


def rounded_universe(num_users: int) -> int:
    """R-MAT needs a power-of-two vertex count; round up."""
    return 1 << max(0, math.ceil(math.log2(num_users)))


def rmat_out_degrees(
    num_users: int,
    edges: int,
    probs: tuple[float, float, float, float],
    rng: np.random.Generator,
) -> np.ndarray:
    """Out-degree per vertex after dropping edges into recursive quadrants.

    Each level splits the adjacency matrix in four; the sampled quadrant
    contributes one bit to the source and one to the destination. Only the
    source counts matter here. edges=0 degenerates to uniform weight 1.
    """
    if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError(f"quadrant probabilities {probs} must be >= 0 and sum to 1")
    size = rounded_universe(num_users)
    if edges == 0:
        return np.ones(size, dtype=np.int64)
    levels = int(math.log2(size))
    a, b, c, _ = probs
    cuts = np.array([a, a + b, a + b + c])
    degrees = np.zeros(size, dtype=np.int64)
    remaining = edges
    while remaining > 0:
        chunk = min(remaining, _CHUNK)
        remaining -= chunk
        src = np.zeros(chunk, dtype=np.int64)
        for _ in range(levels):
            quadrant = np.searchsorted(cuts, rng.random(chunk), side="right")
            src = (src << 1) | (quadrant >> 1)
        degrees += np.bincount(src, minlength=size)
    return degrees


def generate(cfg: GenConfig) -> list[Action]:
    """Deterministic synthetic stream; user ids are ints in memory."""
    rng = np.random.default_rng(cfg.seed)
    size = rounded_universe(cfg.num_users)
    edges = cfg.edges if cfg.edges is not None else 10 * size
    degrees = rmat_out_degrees(size, edges, cfg.rmat, rng)
    weights = degrees.astype(np.float64)
    total = weights.sum()
    if total <= 0:
        weights = np.ones(size)
        total = float(size)
    n = cfg.num_actions
    users = rng.choice(size, size=n, p=weights / total)
    follows = rng.random(n) < cfg.follow_fraction
    if n > 0:
        follows[0] = False  # nothing to respond to yet
    distances = np.maximum(1, np.rint(rng.exponential(1.0 / cfg.lam, n))).astype(np.int64)
    seqs = np.arange(1, n + 1, dtype=np.int64)
    parents = np.maximum(1, seqs - distances)  # clamp to the stream start
    actions = []
    users_list = users.tolist()
    follows_list = follows.tolist()
    parents_list = parents.tolist()
    for i in range(n):
        actions.append(
            Action(
                seq=i + 1,
                user=users_list[i],
                parent=parents_list[i] if follows_list[i] else None,
            )
        )
    return actions


def summarize(cfg: GenConfig, actions: list[Action]) -> dict:
    follow_count = sum(1 for a in actions if a.parent is not None)
    distances = [a.seq - a.parent for a in actions if a.parent is not None]
    return {
        "actions": len(actions),
        "distinct_users": len({a.user for a in actions}),
        "follow_share": follow_count / len(actions) if actions else 0.0,
        "mean_response_distance": sum(distances) / len(distances) if distances else 0.0,
    }


def write_stream(path: str | Path, cfg: GenConfig, actions: list[Action]) -> Path:
    """Write the stream as NDJSON (users rendered as strings) plus a sidecar
    manifest with the config and summary stats; returns the manifest path."""
    path = Path(path)
    with path.open("w") as fp:
        write_ndjson(
            fp,
            (
                Action(seq=a.seq, user=f"u{a.user}", parent=a.parent, tags=a.tags, pos=a.pos)
                for a in actions
            ),
        )
    manifest_path = path.with_suffix(path.suffix + ".manifest.json")
    manifest = {"config": asdict(cfg), "summary": summarize(cfg, actions)}
    with manifest_path.open("w") as fp:
        json.dump(manifest, fp, indent=2, sort_keys=True)
        fp.write("\n")
    return manifest_path
