#!/usr/bin/env python3
"""Survey degeneration behavior of random pencils.

Draws random pencils of a fixed rank over one field, runs the full
discriminant analysis on each, and tabulates how often the discriminant
is squarefree, how often the degeneration is simple, and what the
degenerate members look like.  For rank 4 it also cross-tabulates the
exhaustive common-zero search against simplicity; over a finite field
the interesting cell (no common zero, simple degeneration) stays empty,
which is exactly the smooth-genus-1-curve-has-a-point phenomenon.

    python scripts/degeneration_survey.py --field F3 --rank 4 --count 200
"""

import argparse
import collections
import os
import sys
from dataclasses import dataclass

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from quadclif.corpus import FIELDS, random_form
from quadclif.pencil import Pencil, analyze, common_isotropic_vector, cover_model

import random


@dataclass(frozen=True)
class SurveyConfig:
    field: str = "F3"
    rank: int = 4
    count: int = 200
    seed: int = 7
    zero_weight: float = 0.15


def survey(cfg):
    rng = random.Random(cfg.seed)
    field = FIELDS[cfg.field]
    rows = collections.Counter()
    genera = collections.Counter()
    point_kinds = collections.Counter()
    cross = collections.Counter()
    done = 0
    while done < cfg.count:
        q1 = random_form(rng, field, cfg.rank, cfg.zero_weight)
        q2 = random_form(rng, field, cfg.rank, cfg.zero_weight)
        pen = Pencil(q1, q2)
        rep = analyze(pen)
        done += 1
        if rep.identically_degenerate:
            rows["identically degenerate"] += 1
            continue
        rows["squarefree" if rep.squarefree else "with multiplicity"] += 1
        if rep.simple:
            rows["simple degeneration"] += 1
        for p in rep.points:
            point_kinds["radical rank %d, degree %d" % (p.radical_rank, p.degree)] += 1
        if rep.squarefree and field.characteristic != 2:
            genera[cover_model(rep).genus] += 1
        if cfg.rank == 4 and field.size() is not None:
            zero = common_isotropic_vector(q1, q2)
            cross[(zero is not None, rep.simple)] += 1
    return rows, point_kinds, genera, cross


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", choices=sorted(FIELDS), default="F3")
    ap.add_argument("--rank", type=int, default=4)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    cfg = SurveyConfig(field=args.field, rank=args.rank, count=args.count,
                       seed=args.seed)

    rows, point_kinds, genera, cross = survey(cfg)

    print("pencils of rank %d over %s, %d draws (seed %d)"
          % (cfg.rank, cfg.field, cfg.count, cfg.seed))
    for k in sorted(rows):
        print("  %-26s %d" % (k, rows[k]))
    if point_kinds:
        print("degenerate members:")
        for k in sorted(point_kinds):
            print("  %-26s %d" % (k, point_kinds[k]))
    if genera:
        print("cover genus (squarefree cases):")
        for g in sorted(genera):
            print("  genus %d: %d" % (g, genera[g]))
    if cross:
        print("common zero x simple (rank-4 finite-field cross table):")
        for (zero, simple), n in sorted(cross.items()):
            print("  zero=%-5s simple=%-5s %d" % (zero, simple, n))
        if cross.get((False, True)):
            print("  -> unexpected: simple pencils without a common zero;"
                  " over a finite field this should not happen")


if __name__ == "__main__":
    main()
