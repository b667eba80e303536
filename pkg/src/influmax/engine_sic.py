"""Sparse checkpoint framework: value-pruned checkpoint list.

Checkpoints whose values are sandwiched within a (1-beta) factor of an
earlier one are deleted; the survivors approximate the deleted suffixes for
all later slides. One expired checkpoint is retained (and keeps ingesting)
until the next checkpoint expires too, so the earliest non-expired one
always answers within a bounded factor of the full-window optimum.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Callable, Sequence

from .influence import InfluenceFunction, InfluenceRegistry
from .sieve import SieveCheckpoint
from .stream import Action, PropagationIndex, SeedResult, WindowConfig


def prune_run(checkpoints: list, beta: float, value_of: Callable) -> list[int]:
    """Delete every checkpoint whose value, together with its successor's,
    stays within (1-beta) of an earlier anchor. Deletions take effect
    immediately; the scan continues with the next surviving anchor. The last
    checkpoint is never deleted (its run would need a successor). Returns the
    indices of deleted entries in the pre-call list."""
    original = {id(cp): i for i, cp in enumerate(checkpoints)}
    deleted: list[int] = []
    i = 0
    while i < len(checkpoints):
        bar = (1.0 - beta) * value_of(checkpoints[i])
        j = i + 1
        while j + 1 < len(checkpoints):
            if value_of(checkpoints[j]) >= bar and value_of(checkpoints[j + 1]) >= bar:
                deleted.append(original[id(checkpoints[j])])
                del checkpoints[j]
            else:
                break
        i += 1
    return deleted


def checkpoint_count_bound(n: int, beta: float, slack: int = 3) -> float:
    """Upper bound on how many checkpoints survive pruning."""
    return 2.0 * math.log(n) / math.log(1.0 / (1.0 - beta)) + slack


class SicEngine:
    """Maintains a logarithmic number of checkpoints over a sliding window."""

    def __init__(
        self,
        cfg: WindowConfig,
        fn: InfluenceFunction | None = None,
        prune_enabled: bool = True,
    ):
        self.cfg = cfg
        self.fn = fn if fn is not None else InfluenceFunction.cardinality()
        self.prune_enabled = prune_enabled
        self.index = PropagationIndex()
        self.registry = InfluenceRegistry(self.fn)
        self.checkpoints: list[SieveCheckpoint] = []
        self.count = 0

    @property
    def checkpoint_count(self) -> int:
        return len(self.checkpoints)

    def position(self, cp: SieveCheckpoint) -> int:
        """Window position x of a checkpoint; x <= 0 means expired."""
        return cp.start_pos - self.count + self.cfg.n

    def positions(self) -> list[int]:
        return [self.position(cp) for cp in self.checkpoints]

    def slide(self, batch: Sequence[Action]) -> None:
        """Advance by one batch: create, feed all, prune, expire."""
        cfg = self.cfg
        if len(batch) != cfg.l:
            raise ValueError(f"batch has {len(batch)} actions, expected {cfg.l}")
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
        if self.prune_enabled:
            self.prune()
        # retain at most one expired checkpoint
        while len(checkpoints) >= 2 and self.position(checkpoints[1]) <= 0:
            retired = checkpoints.pop(0)
            self.registry.drop(retired.start_pos)

    def prune(self) -> list[int]:
        """Run the value-based deletion pass; returns deleted positions."""
        cps = self.checkpoints
        pre = list(cps)
        pre_positions = [self.position(cp) for cp in pre]
        values = {id(cp): cp.solution_value() for cp in cps}
        deleted = prune_run(cps, self.cfg.beta, lambda cp: values[id(cp)])
        for i in deleted:
            self.registry.drop(pre[i].start_pos)
        return [pre_positions[i] for i in deleted]

    def query(self) -> SeedResult:
        """Answer from the earliest non-expired checkpoint."""
        for cp in self.checkpoints:
            if self.position(cp) >= 1:
                return replace(cp.solution(), engine="sic")
        raise RuntimeError("no live checkpoint to query; slide first")

    def snapshot(self) -> list[tuple[int, int, float]]:
        """(position, start_seq, value) per checkpoint, oldest first."""
        return [
            (self.position(cp), cp.start_seq, cp.solution_value()) for cp in self.checkpoints
        ]

    def check_invariants(self, count_slack: int | None = None) -> None:
        """Assert the neighbor conditions, the expired-checkpoint cap, and
        (optionally) the checkpoint-count bound."""
        cps = self.checkpoints
        expired = sum(1 for cp in cps if self.position(cp) <= 0)
        if expired > 1:
            raise AssertionError(f"{expired} expired checkpoints retained")
        beta = self.cfg.beta
        values = [cp.solution_value() for cp in cps]
        for i in range(len(values) - 2):
            bar = (1.0 - beta) * values[i]
            if values[i + 1] >= bar and values[i + 2] >= bar:
                raise AssertionError(
                    f"neighbor condition violated at positions {self.positions()[i:i + 3]}: "
                    f"values {values[i:i + 3]} with beta={beta}"
                )
        if count_slack is not None:
            bound = checkpoint_count_bound(self.cfg.n, beta, count_slack)
            if len(cps) > bound:
                raise AssertionError(f"{len(cps)} checkpoints exceed bound {bound:.1f}")
