"""Continuous top-k influence maximization over sliding action-stream windows."""

from .baselines import ExactResult, brute_force_coverage, exact, greedy, reduce_max_k_coverage
from .engine_ic import IcEngine
from .engine_sic import SicEngine, checkpoint_count_bound, prune_run
from .influence import InfluenceFunction, InfluenceRegistry, ViewTable, load_weights_csv
from .sieve import SieveCheckpoint, lattice_bounds
from .stream import (
    Action,
    PropagationIndex,
    SeedResult,
    WindowConfig,
    action_from_json,
    action_to_json,
    read_csv_stream,
    read_ndjson,
    window_bounds,
    write_csv_stream,
    write_ndjson,
)
from .streamgen import GenConfig, generate, summarize, syn_n, syn_o, write_stream

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ExactResult",
    "GenConfig",
    "IcEngine",
    "InfluenceFunction",
    "InfluenceRegistry",
    "PropagationIndex",
    "SeedResult",
    "SicEngine",
    "SieveCheckpoint",
    "ViewTable",
    "WindowConfig",
    "action_from_json",
    "action_to_json",
    "brute_force_coverage",
    "checkpoint_count_bound",
    "exact",
    "generate",
    "greedy",
    "lattice_bounds",
    "load_weights_csv",
    "prune_run",
    "read_csv_stream",
    "read_ndjson",
    "reduce_max_k_coverage",
    "summarize",
    "syn_n",
    "syn_o",
    "window_bounds",
    "write_csv_stream",
    "write_ndjson",
    "write_stream",
]
