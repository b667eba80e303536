"""Dense checkpoint framework: one checkpoint per window slide.

Every slide retires the oldest checkpoint once the ring is full, creates a
fresh one at the batch's first action, and feeds the whole batch to every
live checkpoint. The oldest checkpoint's suffix always equals the current
window, so it answers the query at the oracle's native approximation ratio.
"""

from __future__ import annotations

from collections import deque
from dataclasses import replace
from typing import Sequence

from .influence import InfluenceFunction, InfluenceRegistry
from .sieve import SieveCheckpoint
from .stream import Action, PropagationIndex, SeedResult, WindowConfig


class IcEngine:
    """Maintains ceil(N/L) checkpoints over a sliding window."""

    def __init__(self, cfg: WindowConfig, fn: InfluenceFunction | None = None):
        self.cfg = cfg
        self.fn = fn if fn is not None else InfluenceFunction.cardinality()
        self.index = PropagationIndex()
        self.registry = InfluenceRegistry(self.fn)
        self.checkpoints: deque[SieveCheckpoint] = deque()
        self.count = 0  # ingested actions

    @property
    def checkpoint_count(self) -> int:
        return len(self.checkpoints)

    def window_lo(self) -> int:
        """Earliest in-window position, in ingest order."""
        return max(1, self.count - self.cfg.n + 1)

    def slide(self, batch: Sequence[Action]) -> None:
        """Advance the window by one batch of exactly L actions."""
        cfg = self.cfg
        if len(batch) != cfg.l:
            raise ValueError(f"batch has {len(batch)} actions, expected {cfg.l}")
        if len(self.checkpoints) == cfg.checkpoint_cap:
            retired = self.checkpoints.popleft()
            self.registry.drop(retired.start_pos)
        start_pos = self.count + 1
        self.checkpoints.append(
            SieveCheckpoint(
                start_seq=batch[0].seq,
                start_pos=start_pos,
                k=cfg.k,
                beta=cfg.beta,
                fn=self.fn,
                table=self.registry.create(start_pos),
            )
        )
        checkpoints = self.checkpoints
        index = self.index
        for action in batch:
            chain = index.ingest(action)
            user = action.user
            for cp in checkpoints:
                cp.process(user, chain)
            self.count += 1
        oldest = checkpoints[0]
        if oldest.start_pos != self.window_lo():
            raise RuntimeError(
                f"oldest checkpoint at {oldest.start_pos}, window starts at {self.window_lo()}"
            )

    def query(self) -> SeedResult:
        """Answer from the oldest checkpoint, whose suffix is the window."""
        if not self.checkpoints:
            raise RuntimeError("no checkpoint to query; slide first")
        return replace(self.checkpoints[0].solution(), engine="ic")
