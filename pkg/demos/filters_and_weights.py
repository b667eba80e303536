"""Drive the command-line harness with sub-stream filters and user weights.

Builds a small NDJSON stream where two topics interleave, then runs the
harness three ways: plain, restricted to one topic, and with a weighted
influence function that favors two users. Prints the final seed choice of
each run so the effect of the knobs is visible. Run from the repository
root:

    python3 demos/filters_and_weights.py
"""

import csv
import tempfile
from pathlib import Path

from influmax import Action, write_ndjson
from influmax.cli import main

SPORTS = frozenset(["sports"])
NEWS = frozenset(["news"])


def build_stream(path: Path) -> None:
    """Two interleaved conversations: u2 echoes u1 on sports while u4 and u5
    take turns replying to u3 on news. u3 reaches three users, u1 two."""
    actions = []
    seq = 1
    for r in range(15):
        actions.append(Action(seq, "u1", tags=SPORTS, pos=(1.0, 1.0)))
        actions.append(Action(seq + 1, "u2", parent=seq, tags=SPORTS, pos=(2.0, 2.0)))
        actions.append(Action(seq + 2, "u3", tags=NEWS, pos=(7.0, 7.0)))
        replier = "u4" if r % 2 == 0 else "u5"
        actions.append(Action(seq + 3, replier, parent=seq + 2, tags=NEWS, pos=(8.0, 8.0)))
        seq += 4
    with path.open("w") as fh:
        write_ndjson(fh, actions)


def last_answer(results: Path) -> str:
    rows = list(csv.DictReader(results.open()))
    last = rows[-1]
    return f"seeds {last['seeds']} value {last['value']}"


def run(label: str, argv: list[str], results: Path) -> None:
    code = main(argv)
    assert code == 0, f"{label} exited {code}"
    print(f"  {label:18s} {last_answer(results)}")


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        stream = root / "stream.ndjson"
        build_stream(stream)

        weights = root / "weights.csv"
        weights.write_text("u1,1\nu2,9\nu3,1\nu4,1\nu5,1\n")

        base = ["--input", str(stream), "--n", "20", "--l", "5", "--k", "1"]
        print("one stream, three readings of it:")

        out = root / "plain.csv"
        run("plain", ["--engine", "sic", *base, "--out-results", str(out)], out)

        out = root / "sports.csv"
        run(
            "sports only",
            ["--engine", "sic", *base, "--filter-tags", "sports", "--out-results", str(out)],
            out,
        )

        out = root / "weighted.csv"
        run(
            "weighted users",
            [
                "--engine",
                "sic",
                *base,
                "--function",
                "weighted",
                "--weights",
                str(weights),
                "--out-results",
                str(out),
            ],
            out,
        )

        manifest = out.with_suffix(".manifest.json")
        print(f"  each run also wrote a manifest, e.g. {manifest.name}")
