"""Per-checkpoint influence views and monotone submodular influence functions.

Each checkpoint owns a view table mapping every user to the set of users it
has influenced over the checkpoint's action suffix. Views only grow: the
suffix is append-only, so any evaluation over a fixed user set is
non-decreasing in stream time. The influence function is either plain
cardinality or a nonnegative-weighted sum over the union of views.
"""

from __future__ import annotations

import csv
from typing import Iterable, Sequence, TextIO

from .stream import UserId

CARDINALITY = "cardinality"
WEIGHTED = "weighted"


class InfluenceFunction:
    """f over a union of influence views; monotone and submodular by shape."""

    __slots__ = ("kind", "weights")

    def __init__(self, kind: str = CARDINALITY, weights: dict[UserId, float] | None = None):
        if kind not in (CARDINALITY, WEIGHTED):
            raise ValueError(f"unknown influence function kind {kind!r}")
        if kind == CARDINALITY and weights:
            raise ValueError("cardinality function takes no weight table")
        if weights:
            for user, w in weights.items():
                if w < 0:
                    raise ValueError(f"negative weight {w} for user {user!r}")
        self.kind = kind
        self.weights = dict(weights) if weights else None

    @classmethod
    def cardinality(cls) -> "InfluenceFunction":
        return cls(CARDINALITY)

    @classmethod
    def weighted(cls, weights: dict[UserId, float] | None = None) -> "InfluenceFunction":
        return cls(WEIGHTED, weights or {})

    def weight(self, user: UserId):
        # int 1 keeps cardinality values integral end to end
        if self.kind == CARDINALITY:
            return 1
        return self.weights.get(user, 1.0) if self.weights else 1.0

    def eval_members(self, members: Iterable[UserId]):
        """f over an explicit member set; f(empty) = 0."""
        if self.kind == CARDINALITY:
            return len(members) if isinstance(members, (set, frozenset)) else len(set(members))
        w = self.weights or {}
        seen = members if isinstance(members, (set, frozenset)) else set(members)
        return sum(w.get(u, 1.0) for u in seen)

    def eval_union(self, views: Iterable[Iterable[UserId]]):
        union: set[UserId] = set()
        for view in views:
            union.update(view)
        return self.eval_members(union)

    def marginal(self, base: set[UserId], candidate: Iterable[UserId]):
        """f(base + candidate) - f(base), computed from the delta only."""
        if self.kind == CARDINALITY:
            return sum(1 for u in candidate if u not in base)
        w = self.weights or {}
        seen: set[UserId] = set()
        gain = 0.0
        for u in candidate:
            if u not in base and u not in seen:
                seen.add(u)
                gain += w.get(u, 1.0)
        return gain


def load_weights_csv(fp: TextIO) -> dict[str, float]:
    """user,weight table; negative weights are a configuration error."""
    reader = csv.reader(fp)
    weights: dict[str, float] = {}
    for lineno, row in enumerate(reader, start=1):
        if not row:
            continue
        if lineno == 1 and row[0] == "user":
            continue
        if len(row) != 2:
            raise ValueError(f"line {lineno}: expected 2 columns, got {len(row)}")
        try:
            w = float(row[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad weight {row[1]!r}") from exc
        if w < 0:
            raise ValueError(f"line {lineno}: negative weight {w} for user {row[0]!r}")
        weights[row[0]] = w
    return weights


class ViewTable:
    """Influence views of one checkpoint: user -> set of influenced users."""

    __slots__ = ("fn", "views", "values")

    def __init__(self, fn: InfluenceFunction):
        self.fn = fn
        self.views: dict[UserId, set[UserId]] = {}
        self.values: dict[UserId, float] = {}

    def apply(self, influenced: UserId, chain: Sequence[UserId]) -> list[UserId]:
        """Insert influenced into every chain owner's view; return owners whose
        view actually gained a member."""
        views = self.views
        values = self.values
        fw = self.fn.weight(influenced)
        gained: list[UserId] = []
        for owner in chain:
            members = views.get(owner)
            if members is None:
                views[owner] = {influenced}
                values[owner] = fw
                gained.append(owner)
            elif influenced not in members:
                members.add(influenced)
                values[owner] += fw
                gained.append(owner)
        return gained

    def view(self, owner: UserId) -> set[UserId]:
        return self.views.get(owner, set())

    def value(self, owner: UserId):
        return self.values.get(owner, 0)

    def union_value(self, owners: Iterable[UserId]):
        """From-scratch f over the union of the owners' views."""
        return self.fn.eval_union(self.views.get(o, ()) for o in owners)

    def union_members(self, owners: Iterable[UserId]) -> set[UserId]:
        union: set[UserId] = set()
        for o in owners:
            union.update(self.views.get(o, ()))
        return union


class InfluenceRegistry:
    """View tables of all live checkpoints, keyed by checkpoint id."""

    def __init__(self, fn: InfluenceFunction):
        self.fn = fn
        self._tables: dict[int, ViewTable] = {}

    def create(self, checkpoint_id: int) -> ViewTable:
        if checkpoint_id in self._tables:
            raise KeyError(f"checkpoint {checkpoint_id} already registered")
        table = ViewTable(self.fn)
        self._tables[checkpoint_id] = table
        return table

    def drop(self, checkpoint_id: int) -> None:
        del self._tables[checkpoint_id]

    def table(self, checkpoint_id: int) -> ViewTable:
        table = self._tables.get(checkpoint_id)
        if table is None:
            raise KeyError(f"unknown checkpoint {checkpoint_id}")
        return table

    def apply_action(
        self, checkpoint_id: int, influenced: UserId, chain: Sequence[UserId]
    ) -> list[tuple[UserId, bool]]:
        """Per-owner update report: (owner, gained) for every chain owner."""
        gained = set(self.table(checkpoint_id).apply(influenced, chain))
        return [(owner, owner in gained) for owner in chain]
