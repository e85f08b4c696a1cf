#!/usr/bin/env python3
# Copyright 2026 The lexsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Convert a comma-separated word-pair benchmark to the lexsim dataset TSV.

Input columns (header row expected): word1, word2, sim. Other columns are
ignored. Graded scores are divided by --scale so they land in [0, 1];
binary files should already hold 0/1 and are checked.

    pairs_to_tsv.py hj.csv --kind graded --scale 3 > hj.tsv
    pairs_to_tsv.py rt.csv --kind binary > rt.tsv
"""

import argparse
import csv
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("path")
    parser.add_argument("--kind", choices=["graded", "binary"], required=True)
    parser.add_argument("--scale", type=float, default=1.0)
    parser.add_argument("--word1", default="word1")
    parser.add_argument("--word2", default="word2")
    parser.add_argument("--score", default="sim")
    args = parser.parse_args()

    out = sys.stdout
    out.write(f"# converted from {args.path} ({args.kind})\n")
    with open(args.path, newline="", encoding="utf-8") as f:
        for lineno, row in enumerate(csv.DictReader(f), start=2):
            try:
                gold = float(row[args.score]) / args.scale
            except (KeyError, ValueError) as e:
                sys.exit(f"{args.path}:{lineno}: bad row ({e})")
            if args.kind == "binary" and gold not in (0.0, 1.0):
                sys.exit(f"{args.path}:{lineno}: binary score must be 0 or 1, got {gold}")
            if args.kind == "graded" and not 0.0 <= gold <= 1.0:
                sys.exit(f"{args.path}:{lineno}: score {gold} outside [0, 1]; adjust --scale")
            w1 = row[args.word1].strip().lower()
            w2 = row[args.word2].strip().lower()
            out.write(f"{w1}\t{w2}\t{gold:g}\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
