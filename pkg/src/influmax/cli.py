"""Command-line front end.

Reads an NDJSON/CSV action stream (or generates a synthetic one), optionally
filters it to a sub-stream by tags or a bounding box, runs the chosen engine
over sliding windows, and writes per-slide results and timing metrics as
CSV, plus a JSON manifest echoing the resolved configuration and summary
statistics. Filtering happens before windowing: the window always holds N
actions of the filtered sub-stream.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .baselines import exact, greedy
from .engine_ic import IcEngine
from .engine_sic import SicEngine
from .influence import InfluenceFunction, load_weights_csv
from .stream import (
    Action,
    PropagationIndex,
    SeedResult,
    WindowConfig,
    action_from_json,
)
from . import streamgen

RESULTS_HEADER = "seq,engine,k,value,seeds,checkpoints,update_micros"
METRICS_HEADER = "seq,update_micros,throughput,checkpoints"


class ConfigError(Exception):
    """Invalid configuration; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    engine: str
    window: WindowConfig
    function: str = "cardinality"
    weights_path: str | None = None
    input_path: str | None = None
    gen_preset: str | None = None
    gen_users: int = 1 << 14
    gen_actions: int = 10_000
    seed: int = 0
    filter_tags: frozenset[str] | None = None
    filter_box: tuple[float, float, float, float] | None = None
    query_every: int = 1
    out_results: str | None = None
    out_metrics: str | None = None
    dump_checkpoints: str | None = None
    strict: bool = False
    budget: int = 10**6


def action_passes(
    action: Action,
    tags: frozenset[str] | None,
    box: tuple[float, float, float, float] | None,
) -> bool:
    """Conjunctive sub-stream filter; actions missing a filtered field fail it."""
    if tags is not None:
        if action.tags is None or not (action.tags & tags):
            return False
    if box is not None:
        if action.pos is None:
            return False
        x1, y1, x2, y2 = box
        x, y = action.pos
        if not (x1 <= x <= x2 and y1 <= y <= y2):
            return False
    return True


class StreamDiagnostics:
    def __init__(self) -> None:
        self.malformed = 0
        self.filtered_out = 0
        self.leftover = 0


def _parse_lines(
    lines: Iterable[str], parse, strict: bool, diag: StreamDiagnostics
) -> Iterator[Action]:
    last_seq = None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            action = parse(line)
        except (ValueError, KeyError, TypeError) as exc:
            if strict:
                raise ValueError(f"line {lineno}: {exc}") from exc
            diag.malformed += 1
            continue
        if last_seq is not None and action.seq <= last_seq:
            if strict:
                raise ValueError(f"line {lineno}: seq {action.seq} not after {last_seq}")
            diag.malformed += 1
            continue
        last_seq = action.seq
        yield action


def _parse_csv_row(line: str) -> Action:
    row = next(csv.reader([line]))
    if row and row[0] == "seq":
        raise _HeaderRow()
    if len(row) != 3:
        raise ValueError(f"expected 3 columns, got {len(row)}")
    return Action(
        seq=int(row[0]), user=row[1], parent=int(row[2]) if row[2] != "" else None
    )


class _HeaderRow(ValueError):
    pass


def load_actions(cfg: RunConfig, diag: StreamDiagnostics) -> Iterator[Action]:
    if cfg.gen_preset is not None:
        preset = streamgen.syn_o if cfg.gen_preset == "syn-o" else streamgen.syn_n
        raw = streamgen.generate(
            preset(num_users=cfg.gen_users, num_actions=cfg.gen_actions, seed=cfg.seed)
        )
        return iter(
            Action(seq=a.seq, user=f"u{a.user}", parent=a.parent) for a in raw
        )
    path = Path(cfg.input_path or "")
    if not path.exists():
        raise ConfigError(f"input not found: {path}")
    fp = path.open()
    if path.suffix == ".csv":
        def gen() -> Iterator[Action]:
            with fp:
                lines = iter(fp)
                first = next(lines, None)
                if first is not None and not first.startswith("seq,"):
                    lines = itertools.chain([first], lines)
                yield from _parse_lines(lines, _parse_csv_row, cfg.strict, diag)
        return gen()
    def gen_ndjson() -> Iterator[Action]:
        with fp:
            yield from _parse_lines(fp, action_from_json, cfg.strict, diag)
    return gen_ndjson()


class _RecomputeEngine:
    """Greedy/exact pseudo-engine: windowed recompute on every query."""

    def __init__(self, cfg: WindowConfig, fn: InfluenceFunction, kind: str, budget: int):
        self.cfg = cfg
        self.fn = fn
        self.kind = kind
        self.budget = budget
        self.index = PropagationIndex()
        self.window: list[Action] = []
        self.checkpoint_count = 0

    def slide(self, batch: Sequence[Action]) -> None:
        for action in batch:
            self.index.ingest(action)
        self.window.extend(batch)
        if len(self.window) > self.cfg.n:
            del self.window[: len(self.window) - self.cfg.n]

    def query(self) -> SeedResult:
        if self.kind == "greedy":
            return greedy(self.window, self.index, self.cfg.k, self.fn)
        res = exact(self.window, self.index, self.cfg.k, self.fn, budget=self.budget)
        return SeedResult(res.seeds, res.value, engine="exact")


def build_engine(cfg: RunConfig, fn: InfluenceFunction):
    if cfg.engine == "ic":
        return IcEngine(cfg.window, fn)
    if cfg.engine == "sic":
        return SicEngine(cfg.window, fn)
    return _RecomputeEngine(cfg.window, fn, cfg.engine, cfg.budget)


def run(cfg: RunConfig, out=sys.stdout) -> dict:
    """Drive the engine over the stream; returns the manifest dict."""
    if cfg.function == "weighted":
        weights = None
        if cfg.weights_path:
            try:
                with open(cfg.weights_path) as fp:
                    weights = load_weights_csv(fp)
            except OSError as exc:
                raise ConfigError(f"cannot read weights: {exc}") from exc
            except ValueError as exc:
                raise ConfigError(f"bad weight table: {exc}") from exc
        fn = InfluenceFunction.weighted(weights)
    else:
        fn = InfluenceFunction.cardinality()
    diag = StreamDiagnostics()
    actions = load_actions(cfg, diag)
    engine = build_engine(cfg, fn)

    results_fp = open(cfg.out_results, "w") if cfg.out_results else out
    metrics_fp = open(cfg.out_metrics, "w") if cfg.out_metrics else None
    dump_fp = open(cfg.dump_checkpoints, "w") if cfg.dump_checkpoints else None
    results = csv.writer(results_fp)
    results.writerow(RESULTS_HEADER.split(","))
    metrics = None
    if metrics_fp is not None:
        metrics = csv.writer(metrics_fp)
        metrics.writerow(METRICS_HEADER.split(","))
    dump = None
    if dump_fp is not None:
        dump = csv.writer(dump_fp)
        dump.writerow(["seq", "position", "start_seq", "value"])

    slides = 0
    queries = 0
    total_actions = 0
    total_elapsed = 0.0
    value_sum = 0.0
    checkpoint_sum = 0
    batch: list[Action] = []
    try:
        for action in actions:
            if not action_passes(action, cfg.filter_tags, cfg.filter_box):
                diag.filtered_out += 1
                continue
            batch.append(action)
            if len(batch) < cfg.window.l:
                continue
            started = time.perf_counter()
            engine.slide(batch)
            slides += 1
            do_query = slides % cfg.query_every == 0
            result = engine.query() if do_query else None
            elapsed = time.perf_counter() - started
            total_elapsed += elapsed
            total_actions += len(batch)
            micros = int(elapsed * 1e6)
            n_checkpoints = engine.checkpoint_count
            checkpoint_sum += n_checkpoints
            seq = batch[-1].seq
            if metrics is not None:
                throughput = cfg.window.l / elapsed if elapsed > 0 else float(cfg.window.l) * 1e6
                metrics.writerow([seq, micros, f"{throughput:.3f}", n_checkpoints])
            if result is not None:
                queries += 1
                value_sum += result.value
                results.writerow(
                    [
                        seq,
                        cfg.engine,
                        cfg.window.k,
                        result.value,
                        ";".join(str(s) for s in sorted(result.seeds)),
                        n_checkpoints,
                        micros,
                    ]
                )
            if dump is not None and isinstance(engine, SicEngine):
                for position, start_seq, value in engine.snapshot():
                    dump.writerow([seq, position, start_seq, value])
            batch = []
        diag.leftover = len(batch)
    finally:
        if cfg.out_results:
            results_fp.close()
        if metrics_fp is not None:
            metrics_fp.close()
        if dump_fp is not None:
            dump_fp.close()

    manifest = {
        "config": _config_dict(cfg),
        "slides": slides,
        "queries": queries,
        "actions_processed": total_actions,
        "skipped_malformed": diag.malformed,
        "filtered_out": diag.filtered_out,
        "leftover_actions": diag.leftover,
        "orphans": len(engine.index.orphan_seqs),
        "summary": {
            "mean_throughput": total_actions / total_elapsed if total_elapsed > 0 else 0.0,
            "mean_value": value_sum / queries if queries else 0.0,
            "mean_checkpoints": checkpoint_sum / slides if slides else 0.0,
        },
    }
    if cfg.out_results:
        manifest_path = Path(cfg.out_results).with_suffix(".manifest.json")
        with manifest_path.open("w") as fp:
            json.dump(manifest, fp, indent=2, sort_keys=True)
            fp.write("\n")
    else:
        print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return manifest


def _config_dict(cfg: RunConfig) -> dict:
    raw = asdict(cfg)
    raw["window"] = asdict(cfg.window)
    raw["filter_tags"] = sorted(cfg.filter_tags) if cfg.filter_tags else None
    raw["filter_box"] = list(cfg.filter_box) if cfg.filter_box else None
    return raw


def build_config(args: argparse.Namespace) -> RunConfig:
    if (args.input is None) == (args.gen is None):
        raise ConfigError("exactly one of --input and --gen is required")
    try:
        window = WindowConfig(n=args.n, l=args.l, k=args.k, beta=args.beta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    box = None
    if args.filter_box:
        parts = args.filter_box.split(",")
        if len(parts) != 4:
            raise ConfigError(f"--filter-box needs x1,y1,x2,y2, got {args.filter_box!r}")
        try:
            x1, y1, x2, y2 = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad --filter-box value: {exc}") from exc
        if x2 < x1 or y2 < y1:
            raise ConfigError("--filter-box corners out of order")
        box = (x1, y1, x2, y2)
    tags = frozenset(t for t in args.filter_tags.split(",") if t) if args.filter_tags else None
    if args.query_every < 1:
        raise ConfigError(f"--query-every must be >= 1, got {args.query_every}")
    if args.weights and args.function != "weighted":
        raise ConfigError("--weights requires --function weighted")
    return RunConfig(
        engine=args.engine,
        window=window,
        function=args.function,
        weights_path=args.weights,
        input_path=args.input,
        gen_preset=args.gen,
        gen_users=args.gen_users,
        gen_actions=args.gen_actions,
        seed=args.seed,
        filter_tags=tags,
        filter_box=box,
        query_every=args.query_every,
        out_results=args.out_results,
        out_metrics=args.out_metrics,
        dump_checkpoints=args.dump_checkpoints,
        strict=args.strict,
        budget=args.budget,
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="influmax",
        description="Continuous top-k influential users over a sliding action window.",
    )
    parser.add_argument("--engine", choices=["ic", "sic", "greedy", "exact"], required=True)
    parser.add_argument("--input", help="NDJSON (or .csv) action stream")
    parser.add_argument("--gen", choices=["syn-o", "syn-n"], help="generate a synthetic stream")
    parser.add_argument("--gen-users", type=int, default=1 << 14)
    parser.add_argument("--gen-actions", type=int, default=10_000)
    parser.add_argument("--n", type=int, required=True, help="window size in actions")
    parser.add_argument("--l", type=int, default=1, help="actions per window slide")
    parser.add_argument("--k", type=int, required=True, help="seed set size")
    parser.add_argument("--beta", type=float, default=0.2)
    parser.add_argument("--function", choices=["cardinality", "weighted"], default="cardinality")
    parser.add_argument("--weights", help="user,weight CSV for the weighted function")
    parser.add_argument("--filter-tags", help="comma-separated tag sub-stream filter")
    parser.add_argument("--filter-box", help="x1,y1,x2,y2 bounding-box sub-stream filter")
    parser.add_argument("--query-every", type=int, default=1, help="query cadence in slides")
    parser.add_argument("--out-results", help="per-query results CSV path (default stdout)")
    parser.add_argument("--out-metrics", help="per-slide timing CSV path")
    parser.add_argument("--dump-checkpoints", help="per-slide checkpoint CSV (sic only)")
    parser.add_argument("--strict", action="store_true", help="fail on malformed records")
    parser.add_argument("--seed", type=int, default=0, help="generator seed")
    parser.add_argument("--budget", type=int, default=10**6, help="exact-engine subset cap")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
