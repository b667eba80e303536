"""Action streams, sliding-window config, and the propagation index.

An action stream is a sequence of social events ordered by a strictly
increasing sequence number. Each action is either a root (no parent) or a
response to an earlier action. The propagation index materializes, per
action, the ordered chain of distinct users whose influence sets gain the
acting user; response chains may reach back arbitrarily far, including
before the current window.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, TextIO

UserId = Any  # hashable; ints in generated streams, strings in NDJSON


@dataclass(frozen=True, slots=True)
class Action:
    """One stream event."""

    seq: int
    user: UserId
    parent: int | None = None
    tags: frozenset[str] | None = None
    pos: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.parent is not None and self.parent >= self.seq:
            raise ValueError(f"parent {self.parent} not before action {self.seq}")


@dataclass(frozen=True, slots=True)
class WindowConfig:
    """Sliding-window parameters: size, slide, seed budget, trade-off beta."""

    n: int
    k: int
    beta: float
    l: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"window size must be positive, got {self.n}")
        if not 1 <= self.l <= self.n:
            raise ValueError(f"slide {self.l} outside [1, {self.n}]")
        if self.n % self.l != 0:
            # checkpoint starts align with the window boundary only then
            raise ValueError(f"slide {self.l} must divide window size {self.n}")
        if self.k < 1:
            raise ValueError(f"seed budget must be positive, got {self.k}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")

    @property
    def checkpoint_cap(self) -> int:
        return math.ceil(self.n / self.l)


@dataclass(frozen=True, slots=True)
class SeedResult:
    """A seed set with its influence value and where it came from."""

    seeds: tuple[UserId, ...]
    value: float
    engine: str = ""
    checkpoint_start: int | None = None
    instance: int | None = None


def window_bounds(current_seq: int, cfg: WindowConfig, first_seq: int = 1) -> tuple[int, int]:
    """Inclusive seq range of the window ending at current_seq."""
    if current_seq < first_seq:
        raise ValueError(f"current seq {current_seq} before stream start {first_seq}")
    return max(first_seq, current_seq - cfg.n + 1), current_seq


class PropagationIndex:
    """Maps each ingested action to its ordered ancestor-user chain.

    A chain lists the acting user first, then the users of all transitive
    parents, deduplicated keeping the first occurrence. Roots and actions
    whose parent was never seen (orphans) degrade to a single-user chain.
    """

    def __init__(self) -> None:
        self._chains: dict[int, tuple[UserId, ...]] = {}
        self._last_seq: int | None = None
        self.orphan_seqs: set[int] = set()

    def __len__(self) -> int:
        return len(self._chains)

    def __contains__(self, seq: int) -> bool:
        return seq in self._chains

    def ingest(self, action: Action) -> tuple[UserId, ...]:
        """Index one action and return its ancestor-user chain."""
        seq = action.seq
        if self._last_seq is not None and seq <= self._last_seq:
            raise ValueError(f"action {seq} not after {self._last_seq}")
        user = action.user
        parent = action.parent
        if parent is None:
            chain: tuple[UserId, ...] = (user,)
        else:
            if parent >= seq:
                raise ValueError(f"parent {parent} not before action {seq}")
            parent_chain = self._chains.get(parent)
            if parent_chain is None:
                self.orphan_seqs.add(seq)
                chain = (user,)
            elif user in parent_chain:
                chain = (user,) + tuple(u for u in parent_chain if u != user)
            else:
                chain = (user,) + parent_chain
        self._chains[seq] = chain
        self._last_seq = seq
        return chain

    def chain(self, seq: int) -> tuple[UserId, ...]:
        return self._chains[seq]

    def evict_before(self, seq: int) -> int:
        """Drop entries older than seq; chains of newer actions are unaffected
        because they were materialized at ingest time."""
        stale = [s for s in self._chains if s < seq]
        for s in stale:
            del self._chains[s]
        return len(stale)


# --- external formats ---

_NDJSON_KEYS = ("seq", "user", "parent", "tags", "pos")


def action_to_json(action: Action) -> str:
    rec: dict[str, Any] = {"seq": action.seq, "user": action.user, "parent": action.parent}
    if action.tags is not None:
        rec["tags"] = sorted(action.tags)
    if action.pos is not None:
        rec["pos"] = list(action.pos)
    return json.dumps(rec, separators=(",", ":"))


def action_from_json(line: str) -> Action:
    rec = json.loads(line)
    if not isinstance(rec, dict):
        raise ValueError("record is not an object")
    unknown = set(rec) - set(_NDJSON_KEYS)
    if unknown:
        raise ValueError(f"unknown fields {sorted(unknown)}")
    seq = rec["seq"]
    user = rec["user"]
    parent = rec.get("parent")
    if not isinstance(seq, int):
        raise ValueError(f"seq must be an int, got {seq!r}")
    if parent is not None and not isinstance(parent, int):
        raise ValueError(f"parent must be an int or null, got {parent!r}")
    tags = rec.get("tags")
    pos = rec.get("pos")
    return Action(
        seq=seq,
        user=user,
        parent=parent,
        tags=frozenset(tags) if tags is not None else None,
        pos=tuple(pos) if pos is not None else None,
    )


def read_ndjson(fp: TextIO) -> Iterator[Action]:
    """Parse an NDJSON stream; raises ValueError with the line number on bad input."""
    for lineno, line in enumerate(fp, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            yield action_from_json(line)
        except (ValueError, KeyError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc


def write_ndjson(fp: TextIO, actions: Iterable[Action]) -> int:
    count = 0
    for action in actions:
        fp.write(action_to_json(action))
        fp.write("\n")
        count += 1
    return count


def read_csv_stream(fp: TextIO) -> Iterator[Action]:
    """Parse the seq,user,parent CSV alternative (empty parent = root)."""
    reader = csv.reader(fp)
    for lineno, row in enumerate(reader, start=1):
        if not row:
            continue
        if lineno == 1 and row[0] == "seq":
            continue
        if len(row) != 3:
            raise ValueError(f"line {lineno}: expected 3 columns, got {len(row)}")
        try:
            seq = int(row[0])
            parent = int(row[2]) if row[2] != "" else None
            yield Action(seq=seq, user=row[1], parent=parent)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc


def write_csv_stream(fp: TextIO, actions: Iterable[Action]) -> int:
    writer = csv.writer(fp)
    writer.writerow(["seq", "user", "parent"])
    count = 0
    for action in actions:
        writer.writerow([action.seq, action.user, "" if action.parent is None else action.parent])
        count += 1
    return count
