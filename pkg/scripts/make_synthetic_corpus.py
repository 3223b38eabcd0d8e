#!/usr/bin/env python3
"""Generate a synthetic trace corpus with planted structure.

Writes traces.jsonl, geodb.csv and planted.json (the ground truth per
endpoint pair) into the output directory, ready for `geodiv pipeline`.

Usage:
    python scripts/make_synthetic_corpus.py --out corpus/ --pairs 500 --seed 7
    python scripts/make_synthetic_corpus.py --out corpus/ --min-lines 10000
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict
from pathlib import Path

from geodiv.synthetic import generate_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, metavar="DIR")
    parser.add_argument("--pairs", type=int, default=None, help="number of endpoint pairs")
    parser.add_argument("--min-lines", type=int, default=None, help="minimum trace line count")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if args.pairs is None and args.min_lines is None:
        parser.error("need --pairs and/or --min-lines")

    corpus = generate_corpus(n_pairs=args.pairs, seed=args.seed, min_lines=args.min_lines)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus.write(out / "traces.jsonl", out / "geodb.csv")
    (out / "planted.json").write_text(
        json.dumps([asdict(p) for p in corpus.planted], indent=2) + "\n", encoding="utf-8"
    )
    print(
        f"wrote {corpus.line_count} trace lines for {len(corpus.planted)} pairs "
        f"({len(corpus.geodb_lines) - 1} geodb rows) to {out}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
