"""Isotropic vector search and hyperbolic reduction."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadclif.rings import QQ, PrimeField, FunctionField, quadratic_extension
from quadclif.quadform import QuadraticForm
from quadclif.splitting import (
    DEFAULT_BUDGET,
    SearchBudget,
    find_isotropic,
    hyperbolic_complement,
    reduce_fully,
    search_is_exhaustive,
    split_hyperbolic,
)

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def ints(field, vals):
    return tuple(field.from_int(v) for v in vals)


# ---------------------------------------------------------------- search


def test_first_witness_is_lexicographic_over_f3():
    q = QuadraticForm.diagonal(F3, [1, 1, 1])
    v = find_isotropic(q)
    assert v == ints(F3, [1, 1, 1])
    assert not q.evaluate(v)


def test_anisotropic_rank2_proof_over_f3():
    q = QuadraticForm.diagonal(F3, [1, 1])
    assert find_isotropic(q) is None
    assert search_is_exhaustive(F3)


def test_rank1_never_isotropic():
    assert find_isotropic(QuadraticForm.diagonal(F5, [3])) is None
    assert find_isotropic(QuadraticForm.diagonal(QQ, [7])) is None


def test_zero_diagonal_entry_found_immediately():
    q = QuadraticForm.diagonal(F5, [0, 1, 2])
    v = find_isotropic(q)
    assert v == ints(F5, [1, 0, 0])


def test_rational_search_hits_and_misses():
    hit = QuadraticForm.diagonal(QQ, [1, -1])
    v = find_isotropic(hit)
    assert v == (Fraction(1), Fraction(-1))
    # x^2 = 2y^2 has no rational point; bounded search cannot prove that
    miss = QuadraticForm.diagonal(QQ, [1, -2])
    assert find_isotropic(miss) is None
    assert not search_is_exhaustive(QQ)


def test_rational_witness_normalization():
    # 3x^2 - 27y^2 vanishes on (3, -1); search should return the primitive
    # representative with positive leading entry.
    q = QuadraticForm.diagonal(QQ, [3, -27])
    v = find_isotropic(q)
    assert v == (Fraction(3), Fraction(-1))


def test_extension_field_search():
    F9 = quadratic_extension(F3)
    q = QuadraticForm.diagonal(F9, [F9.one(), F9.one()])
    v = find_isotropic(q)
    assert v is not None and not q.evaluate(v)
    # -1 is a square in F9, so <1,1> is isotropic there but not over F3


def test_function_field_constant_witness():
    K = FunctionField(F3, "t")
    q = QuadraticForm.diagonal(K, [K.one(), K.one(), K.one()])
    v = find_isotropic(q)
    assert v is not None and not q.evaluate(v)
    assert all(c.num.degree() <= 0 and c.den.degree() == 0 for c in v)


def test_function_field_degree_parity_obstruction():
    # q = x^2 - t y^2 over F3(t): values have even valuation at t on the
    # first summand and odd on the second, so no witness exists at all.
    K = FunctionField(F3, "t")
    t = K.gen()
    q = QuadraticForm.diagonal(K, [K.one(), -t])
    assert find_isotropic(q, SearchBudget(height=3, degree=3, enum=50000)) is None


def test_budget_is_respected_over_q():
    # the minimal witnesses of x^2 = 25y^2 have height 5; height 4 misses them
    q = QuadraticForm.diagonal(QQ, [1, -25])
    assert find_isotropic(q, SearchBudget(height=4)) is None
    assert find_isotropic(q, SearchBudget(height=5)) == (Fraction(5), Fraction(-1))


# ------------------------------------------------------- splitting a plane


def test_hyperbolic_complement_axioms():
    q = QuadraticForm.diagonal(QQ, [1, -1, 1, 1])
    v = find_isotropic(q)
    w = hyperbolic_complement(q, v)
    assert not q.evaluate(w)
    assert q.polar(v, w) == QQ.one()


def test_hyperbolic_complement_char2():
    # x0*x1 + x2^2 over F2: v = e0 is isotropic, complement must pair to 1
    rows = [[0, 1, 0], [0, 0, 0], [0, 0, 1]]
    q = QuadraticForm.of_ints(F2, rows)
    v = ints(F2, [1, 0, 0])
    w = hyperbolic_complement(q, v)
    assert not q.evaluate(w)
    assert q.polar(v, w) == F2.one()


def test_split_hyperbolic_exact_blocks():
    q = QuadraticForm.diagonal(QQ, [1, -1, 1, 1])
    v = find_isotropic(q)
    w, comp, rest = split_hyperbolic(q, v)
    assert len(comp) == 2
    pair = q.restrict([v, w])
    assert pair.c[0][0] == QQ.zero()
    assert pair.c[1][1] == QQ.zero()
    assert pair.c[0][1] == QQ.one()
    assert rest == QuadraticForm.diagonal(QQ, [1, 1])
    # the two blocks are orthogonal
    for b in comp:
        assert q.polar(v, b) == QQ.zero()
        assert q.polar(w, b) == QQ.zero()


def test_split_rejects_radical_vector():
    q = QuadraticForm.diagonal(F5, [1, 0])
    v = ints(F5, [0, 1])
    with pytest.raises(ValueError):
        split_hyperbolic(q, v)


# ------------------------------------------------------------- reduction


def test_reduce_fully_rational_example():
    q = QuadraticForm.diagonal(QQ, [1, -1, 1, 1])
    rep = reduce_fully(q)
    assert rep.witt_index == 1
    assert rep.anisotropic_form == QuadraticForm.diagonal(QQ, [1, 1])
    assert rep.radical_basis == []
    assert not rep.conclusive  # bounded search cannot certify anisotropy over Q


def test_reduce_fully_finite_rank6():
    q = QuadraticForm.diagonal(F5, [1, 2, 3, 4, 1, 2])
    rep = reduce_fully(q)
    assert rep.witt_index == 2
    assert rep.anisotropic_form.n == 2
    assert rep.conclusive


def test_reduce_fully_hyperbolic_space():
    q = QuadraticForm.hyperbolic(F3, 2)
    rep = reduce_fully(q)
    assert rep.witt_index == 2
    assert rep.anisotropic_basis == []
    assert rep.conclusive


def test_reduce_carries_radical():
    q = QuadraticForm.diagonal(F5, [1, 0, 4, 0])
    rep = reduce_fully(q)
    assert rep.witt_index == 1
    assert len(rep.radical_basis) == 2
    assert rep.anisotropic_basis == []
    assert rep.conclusive


def test_reduction_witness_is_in_original_coordinates():
    q = QuadraticForm.diagonal(F5, [1, 2, 3, 4, 1, 2])
    rep = reduce_fully(q)
    for v, w in rep.pairs:
        assert q.evaluate(v) == F5.zero()
        assert q.evaluate(w) == F5.zero()
        assert q.polar(v, w) == F5.one()
    full = [u for vw in rep.pairs for u in vw]
    full += rep.anisotropic_basis + rep.radical_basis
    expected = QuadraticForm.hyperbolic(F5, rep.witt_index)
    expected = expected.direct_sum(rep.anisotropic_form)
    expected = expected.direct_sum(rep.radical_form)
    assert q.restrict(full) == expected


def test_normal_form_string_mentions_blocks():
    q = QuadraticForm.diagonal(F5, [1, 0, 4, 0])
    rep = reduce_fully(q)
    assert rep.describe() == "H(1) + aniso(0) + rad(2)"


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=4), min_size=2, max_size=5))
def test_reduction_random_diagonals_f5(entries):
    q = QuadraticForm.diagonal(F5, entries)
    rep = reduce_fully(q)
    assert rep.conclusive
    assert 2 * rep.witt_index + rep.anisotropic_form.n + len(
        rep.radical_basis
    ) == len(entries)
    # anisotropic over a finite field means rank <= 2
    assert rep.anisotropic_form.n <= 2
    if rep.anisotropic_form.n:
        assert find_isotropic(rep.anisotropic_form) is None


def test_budget_constructor_validation():
    with pytest.raises(ValueError):
        SearchBudget(height=0)
    assert DEFAULT_BUDGET.height == 10


def test_reduce_fully_rank1_leftover_is_conclusive():
    # <1,-1,2> = H + <2>; the line is regular, so nothing is left to search
    rep = reduce_fully(QuadraticForm.diagonal(QQ, [1, -1, 2]))
    assert rep.witt_index == 1
    assert rep.anisotropic_form.n == 1
    assert rep.conclusive
