"""Deterministic example generators shared by the tests, the acceptance
suite, and the CLI selftest.

Everything here takes an explicit integer seed and drives a private
``random.Random``, so a corpus is a pure function of its config and can
be regenerated anywhere, any number of times, with identical output.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .pencil import Pencil, analyze
from .quadform import QuadraticForm
from .rings import QQ, PrimeField
from .splitting import SearchBudget, find_isotropic

FIELDS = {
    "Q": QQ,
    "F2": PrimeField(2),
    "F3": PrimeField(3),
    "F5": PrimeField(5),
}

DEFAULT_SEED = 1729


def random_form(rng, field, n, zero_weight=0.25, bound=5):
    """Random upper-triangular coefficient form of rank n.

    zero_weight is the chance that any given coefficient slot stays
    empty, which is what lets radicals and other degeneracies appear in
    the sample.
    """
    rows = []
    for i in range(n):
        row = [0] * n
        for j in range(i, n):
            if rng.random() >= zero_weight:
                c = 0
                while c == 0:
                    c = rng.randint(-bound, bound)
                row[j] = c
        rows.append(row)
    return QuadraticForm.of_ints(field, rows)


@dataclass(frozen=True)
class FormCorpusConfig:
    count: int = 200
    ranks: tuple = (1, 2, 3, 4, 5, 6, 7)
    fields: tuple = ("Q", "F2", "F3", "F5")
    seed: int = DEFAULT_SEED
    zero_weight: float = 0.25


def form_corpus(cfg=FormCorpusConfig()):
    """Mixed-rank, mixed-field list of forms, degenerate ones included."""
    rng = random.Random(cfg.seed)
    out = []
    for i in range(cfg.count):
        field = FIELDS[cfg.fields[i % len(cfg.fields)]]
        n = cfg.ranks[(i // len(cfg.fields)) % len(cfg.ranks)]
        out.append(random_form(rng, field, n, cfg.zero_weight))
    return out


def orthogonal_pair_corpus(count=50, seed=DEFAULT_SEED):
    """Pairs over F3/F5 whose ranks sum to at most 6."""
    rng = random.Random(seed + 1)
    out = []
    for _ in range(count):
        field = FIELDS[rng.choice(("F3", "F5"))]
        na = rng.randint(1, 5)
        nb = rng.randint(1, 6 - na)
        out.append((random_form(rng, field, na), random_form(rng, field, nb)))
    return out


def isotropic_form_corpus(count=100, seed=DEFAULT_SEED, budget=None):
    """(form, isotropic vector) samples, ranks 3 to 6 over F3/F5/Q.

    The vector is required to lie outside the radical, so splitting off
    a hyperbolic plane through it is possible.  Rejection sampling: a
    draw without such a vector inside the search budget is discarded.
    """
    rng = random.Random(seed + 2)
    if budget is None:
        budget = SearchBudget(height=4, degree=2, enum=20000)
    out = []
    while len(out) < count:
        field = FIELDS[rng.choice(("F3", "F5", "Q"))]
        n = rng.randint(3, 6)
        q = random_form(rng, field, n, zero_weight=0.15, bound=4)
        v = find_isotropic(q, budget)
        if v is None:
            continue
        bv = q.polar_matrix().mul_vec(v)
        if all(not a for a in bv):
            continue
        out.append((q, v))
    return out


def morita_corpus():
    """The fixed list of twenty rank <= 4 forms used to exercise the
    matrix-algebra witness, with one-dimensional radicals represented on
    every field."""
    Q, F3, F5 = FIELDS["Q"], FIELDS["F3"], FIELDS["F5"]
    specs = [
        (F3, [1]),
        (F3, [1, 1]),
        (F3, [1, 2]),
        (F3, [1, 1, 1]),
        (F3, [1, 1, 2]),
        (F3, [1, 2, 0]),
        (F3, [1, 1, 1, 1]),
        (F3, [1, 1, 1, 2]),
        (F3, [1, 1, 2, 0]),
        (F5, [1]),
        (F5, [1, 2]),
        (F5, [1, 1, 1]),
        (F5, [2, 3, 0]),
        (F5, [1, 2, 3, 4]),
        (F5, [1, 1, 1, 0]),
        (Q, [1]),
        (Q, [1, -1]),
        (Q, [1, 2, -3]),
        (Q, [1, -1, 0]),
        (Q, [1, 2, 3, -6]),
    ]
    return [QuadraticForm.diagonal(f, cs) for f, cs in specs]


def rank5_pencil_corpus(count=50, seed=DEFAULT_SEED):
    """Nonzero rank-5 pairs over F3 for the isotropy-witness bound."""
    rng = random.Random(seed + 3)
    f3 = FIELDS["F3"]
    out = []
    while len(out) < count:
        q1 = random_form(rng, f3, 5, zero_weight=0.2)
        q2 = random_form(rng, f3, 5, zero_weight=0.2)
        if _is_zero_form(q1) or _is_zero_form(q2):
            continue
        out.append(Pencil(q1, q2))
    return out


def squarefree_pencil_corpus(n, field_name, count=20, seed=DEFAULT_SEED):
    """Pencils of rank-n forms whose discriminant is squarefree."""
    rng = random.Random(seed + 100 * n + sum(map(ord, field_name)))
    field = FIELDS[field_name]
    out = []
    while len(out) < count:
        q1 = random_form(rng, field, n, zero_weight=0.1, bound=3)
        q2 = random_form(rng, field, n, zero_weight=0.1, bound=3)
        rep = analyze(Pencil(q1, q2))
        if rep.identically_degenerate or not rep.squarefree:
            continue
        out.append(Pencil(q1, q2))
    return out


def all_diagonal_forms(field, n, regular_only=False):
    """Every diagonal rank-n form over a small prime field, in a fixed
    order.  regular_only drops the zero coefficient."""
    p = field.size()
    lo = 1 if regular_only else 0
    vals = range(lo, p)
    return [QuadraticForm.diagonal(field, list(combo))
            for combo in itertools.product(vals, repeat=n)]


def _is_zero_form(q):
    return not any(any(a for a in row) for row in q.c)
