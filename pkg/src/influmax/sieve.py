"""Threshold-lattice streaming maximizer used as the checkpoint oracle.

A checkpoint covers the append-only suffix of actions starting at a fixed
stream position. It keeps one candidate instance per threshold exponent j
with m <= (1+beta)^j <= 2*k*m, where m is the largest single-view value seen
so far. An instance admits an offered owner while it has fewer than k
candidates and the owner's marginal gain reaches (T/2 - value) / (k - |CX|).
Admitted owners are never evicted; their covered sets are refreshed in place
as views grow, so every instance's cached value always equals f over the
union of its candidates' current views.

Raising m drops instances below the new lattice floor. To keep the reported
solution monotone, the best dropped instance is retained as a frozen copy
that continues to receive view refreshes but never admits; it is replaced
only by a strictly better one.
"""

from __future__ import annotations

import math

from .influence import CARDINALITY, InfluenceFunction, ViewTable
from .stream import SeedResult, UserId


def lattice_bounds(m, k: int, beta: float) -> tuple[int, int]:
    """Exponent range tiling [m, 2*k*m] with powers of (1+beta)."""
    if m <= 0:
        raise ValueError("lattice undefined for m <= 0")
    base = 1.0 + beta
    j_lo = math.ceil(math.log(m, base))
    while base**j_lo < m:
        j_lo += 1
    while base ** (j_lo - 1) >= m:
        j_lo -= 1
    cap = 2 * k * m
    j_hi = math.floor(math.log(cap, base))
    while base**j_hi > cap:
        j_hi -= 1
    while base ** (j_hi + 1) <= cap:
        j_hi += 1
    return j_lo, j_hi


class SieveInstance:
    """One candidate solution at a fixed threshold."""

    __slots__ = ("j", "threshold", "cx", "cx_set", "covered", "value")

    def __init__(self, j: int, threshold: float):
        self.j = j
        self.threshold = threshold
        self.cx: list[UserId] = []
        self.cx_set: set[UserId] = set()
        self.covered: set[UserId] = set()
        self.value = 0

    def __repr__(self) -> str:  # pragma: no cover
        return f"SieveInstance(j={self.j}, cx={self.cx}, value={self.value})"


class SieveCheckpoint:
    """Checkpoint oracle over one action suffix."""

    __slots__ = (
        "start_seq",
        "start_pos",
        "k",
        "beta",
        "fn",
        "table",
        "m",
        "instances",
        "frozen",
        "actions",
        "_base",
        "_lo_thr",
        "_hi_next",
        "_member_index",
        "_open",
        "_floor",
        "_floor_dirty",
        "_cardinality",
    )

    def __init__(
        self,
        start_seq: int,
        start_pos: int,
        k: int,
        beta: float,
        fn: InfluenceFunction,
        table: ViewTable | None = None,
    ):
        self.start_seq = start_seq
        self.start_pos = start_pos
        self.k = k
        self.beta = beta
        self.fn = fn
        self.table = table if table is not None else ViewTable(fn)
        self.m = 0
        self.instances: list[SieveInstance] = []
        self.frozen: SieveInstance | None = None
        self.actions = 0
        self._base = 1.0 + beta
        self._lo_thr = 0.0
        self._hi_next = 0.0
        self._member_index: dict[UserId, list[SieveInstance]] = {}
        self._open: list[SieveInstance] = []
        self._floor = math.inf
        self._floor_dirty = False
        self._cardinality = fn.kind == CARDINALITY

    # --- maintenance ---

    def process(self, influenced: UserId, chain) -> None:
        """Feed one action: update views, refresh covered sets, offer owners
        whose view gained a member. One fused pass over the chain keeps this
        hot path cheap; the table mutation matches ViewTable.apply exactly."""
        self.actions += 1
        views = self.table.views
        values = self.table.values
        fw = 1 if self._cardinality else self.fn.weight(influenced)
        index = self._member_index
        k = self.k
        gained = None
        for owner in chain:
            members = views.get(owner)
            if members is None:
                views[owner] = {influenced}
                values[owner] = fw
                if gained is None:
                    gained = [owner]
                else:
                    gained.append(owner)
            elif influenced not in members:
                members.add(influenced)
                values[owner] += fw
                if gained is None:
                    gained = [owner]
                else:
                    gained.append(owner)
            insts = index.get(owner)
            if insts is not None:
                for inst in insts:
                    covered = inst.covered
                    if influenced not in covered:
                        covered.add(influenced)
                        inst.value += fw
                        slots = k - len(inst.cx)
                        if slots > 0:
                            # a value bump only lowers the requirement
                            required = (inst.threshold * 0.5 - inst.value) / slots
                            if required < self._floor:
                                self._floor = required
        if gained is None:
            return
        for owner in gained:
            v = values[owner]
            if v > self.m:
                self.raise_m(v)
            if self._open:
                if self._floor_dirty:
                    self._recompute_floor()
                if v >= self._floor:
                    self._offer(owner, views[owner], v)

    def raise_m(self, new_value) -> None:
        """Lift the lattice floor; drops instances below it, freezes the best."""
        if new_value <= self.m:
            return
        self.m = new_value
        if self.instances and new_value <= self._lo_thr and 2 * self.k * new_value < self._hi_next:
            return
        j_lo, j_hi = lattice_bounds(new_value, self.k, self.beta)
        base = self._base
        kept = []
        dropped = []
        for inst in self.instances:
            (kept if inst.j >= j_lo else dropped).append(inst)
        if dropped:
            best = max(dropped, key=lambda i: (i.value, -i.j))
            if best.value > 0 and (self.frozen is None or best.value > self.frozen.value):
                self.frozen = best
        have = {inst.j for inst in kept}
        for j in range(j_lo, j_hi + 1):
            if j not in have:
                kept.append(SieveInstance(j, base**j))
        kept.sort(key=lambda i: i.j)
        self.instances = kept
        self._lo_thr = base**j_lo
        self._hi_next = base ** (j_hi + 1)
        self._reindex()

    def offer(self, owner: UserId):
        """Offer the owner's current view to every instance; returns the
        checkpoint's best value. Empty views are a no-op."""
        view = self.table.views.get(owner)
        if not view:
            return self.solution_value()
        if self._open:
            self._offer(owner, view, self.table.values[owner])
        return self.solution_value()

    def _offer(self, owner: UserId, view: set, view_value) -> None:
        if self._floor_dirty:
            self._recompute_floor()
        if view_value < self._floor:
            return  # marginal cannot exceed the view's own value
        k = self.k
        fn = self.fn
        filled = False
        admitted = False
        for inst in self._open:
            if owner in inst.cx_set:
                continue
            required = (inst.threshold * 0.5 - inst.value) / (k - len(inst.cx))
            if required > 0 and view_value < required:
                continue
            new = view - inst.covered
            gain = fn.eval_members(new) if new else 0
            if required > 0 and gain < required:
                continue
            inst.covered.update(new)
            inst.value += gain
            inst.cx.append(owner)
            inst.cx_set.add(owner)
            self._member_index.setdefault(owner, []).append(inst)
            admitted = True
            if len(inst.cx) >= k:
                filled = True
        if filled:
            self._open = [inst for inst in self._open if len(inst.cx) < k]
        if admitted:
            self._floor_dirty = True

    def _recompute_floor(self) -> None:
        """Smallest admission requirement over open instances; a view whose
        own value is below it cannot be admitted anywhere."""
        k = self.k
        floor = math.inf
        for inst in self._open:
            required = (inst.threshold * 0.5 - inst.value) / (k - len(inst.cx))
            if required < floor:
                floor = required
        self._floor = floor
        self._floor_dirty = False

    def _reindex(self) -> None:
        index: dict[UserId, list[SieveInstance]] = {}
        for inst in self.instances:
            for u in inst.cx:
                index.setdefault(u, []).append(inst)
        if self.frozen is not None:
            for u in self.frozen.cx:
                index.setdefault(u, []).append(self.frozen)
        self._member_index = index
        k = self.k
        self._open = [inst for inst in self.instances if len(inst.cx) < k]
        self._floor_dirty = True

    # --- queries ---

    def solution_value(self):
        best = self.frozen.value if self.frozen is not None else 0
        for inst in self.instances:
            if inst.value > best:
                best = inst.value
        return best

    def solution(self) -> SeedResult:
        """Best candidate set over all instances; ties go to the smaller
        exponent (the frozen copy's exponent is below every live one)."""
        best = self.frozen
        for inst in self.instances:
            if best is None or inst.value > best.value:
                best = inst
        if best is None or not best.cx:
            return SeedResult((), 0, checkpoint_start=self.start_seq)
        return SeedResult(
            tuple(sorted(best.cx)),
            best.value,
            checkpoint_start=self.start_seq,
            instance=best.j,
        )

    def recomputed_value(self, seeds):
        """From-scratch f over the seeds' current views (differential path)."""
        return self.table.union_value(seeds)

    def exponents(self) -> tuple[int, int] | None:
        if not self.instances:
            return None
        return self.instances[0].j, self.instances[-1].j

    def instance_states(self):
        return [(inst.j, inst.threshold, tuple(inst.cx), inst.value) for inst in self.instances]

    def check_consistency(self) -> None:
        """Assert every cached value matches a from-scratch recomputation."""
        pool = list(self.instances)
        if self.frozen is not None:
            pool.append(self.frozen)
        for inst in pool:
            expect_members = self.table.union_members(inst.cx)
            if inst.covered != expect_members:
                raise AssertionError(
                    f"instance j={inst.j}: covered set drifted from its views"
                )
            expect_value = self.fn.eval_members(expect_members)
            if inst.value != expect_value:
                raise AssertionError(
                    f"instance j={inst.j}: cached {inst.value} != recomputed {expect_value}"
                )
