"""Isotropic subspace enumeration, rulings, and the center comparison."""

import pytest
from hypothesis import given, settings, strategies as st

from quadclif.rings import PrimeField, quadratic_extension
from quadclif.quadform import QuadraticForm
from quadclif.lagrangian import (
    enumerate_isotropic,
    ruling_components,
    stein_vs_center,
)

F2, F3, F5 = PrimeField(2), PrimeField(3), PrimeField(5)


# ------------------------------------------------------- enumeration


def test_split_rank4_counts_are_2q_plus_2():
    for F, want in ((F2, 6), (F3, 8), (F5, 12)):
        subs = enumerate_isotropic(QuadraticForm.hyperbolic(F, 2), 1)
        assert len(subs) == want


def test_isotropic_lines_are_quadric_points():
    q = QuadraticForm.hyperbolic(F3, 2)
    lines = enumerate_isotropic(q, 0)
    assert len(lines) == 16  # (q+1)^2 for the split rank-4 quadric
    for (row,) in lines:
        assert not q.evaluate(row)
        lead = next(i for i, a in enumerate(row) if a)
        assert row[lead] == F3.one()


def test_hyperbolic_line_has_two_isotropic_lines():
    q = QuadraticForm.hyperbolic(F3, 1)
    lines = enumerate_isotropic(q, 0)
    pts = {row for (row,) in lines}
    assert pts == {(F3.one(), F3.zero()), (F3.zero(), F3.one())}


def test_witt_index_one_has_no_planes():
    assert enumerate_isotropic(QuadraticForm.diagonal(F3, [1, 1, 1, 2]), 1) == ()


def test_degenerate_form_keeps_radical_points():
    q = QuadraticForm.diagonal(F3, [1, 1, 0])
    lines = enumerate_isotropic(q, 0)
    assert (F3.zero(), F3.zero(), F3.one()) in {row for (row,) in lines}


def test_enumeration_is_deterministic_and_rref():
    q = QuadraticForm.hyperbolic(F3, 2)
    first = enumerate_isotropic(q, 1)
    second = enumerate_isotropic(q, 1)
    assert first == second
    from quadclif.rings import Matrix
    for sub in first:
        red, piv = Matrix(F3, [list(r) for r in sub]).rref()
        assert red.rows == sub and len(piv) == 2


def test_enumeration_budget_errors():
    with pytest.raises(ValueError):
        enumerate_isotropic(QuadraticForm.zero_form(F3, 7), 0)
    F25 = quadratic_extension(F5)
    big = QuadraticForm.hyperbolic(F25, 3)
    with pytest.raises(ValueError):
        enumerate_isotropic(big, 2)
    from quadclif.rings import QQ
    with pytest.raises(ValueError):
        enumerate_isotropic(QuadraticForm.diagonal(QQ, [1, -1]), 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3 ** 10 - 1))
def test_planes_lie_on_the_line_set(code):
    vals = []
    for _ in range(10):
        vals.append(code % 3)
        code //= 3
    q = QuadraticForm.of_ints(
        F3, [[vals[0], vals[1], vals[2], vals[3]],
             [0, vals[4], vals[5], vals[6]],
             [0, 0, vals[7], vals[8]],
             [0, 0, 0, vals[9]]])
    pts = {row for (row,) in enumerate_isotropic(q, 0)}
    for u, v in enumerate_isotropic(q, 1):
        # the four projective points of the plane, already normalized
        # because u, v are the RREF basis
        combos = [v, u]
        for c in (F3.one(), F3.from_int(2)):
            combos.append(tuple(a + c * b for a, b in zip(u, v)))
        for w in combos:
            assert w in pts
        assert not q.polar(u, v)


# ----------------------------------------------------------- rulings


def test_h2_rulings_split_evenly():
    for F in (F2, F3, F5):
        subs = enumerate_isotropic(QuadraticForm.hyperbolic(F, 2), 1)
        part = ruling_components(subs, 2)
        assert part.sizes == (len(subs) // 2, len(subs) // 2)


def test_h3_f2_rulings():
    subs = enumerate_isotropic(QuadraticForm.hyperbolic(F2, 3), 2)
    assert len(subs) == 30
    part = ruling_components(subs, 3)
    assert part.sizes == (15, 15)


def test_h1_rulings_are_singletons():
    subs = enumerate_isotropic(QuadraticForm.hyperbolic(F3, 1), 0)
    part = ruling_components(subs, 1)
    assert part.sizes == (1, 1)


def test_single_lagrangian_is_rejected():
    subs = enumerate_isotropic(QuadraticForm.hyperbolic(F3, 2), 1)
    with pytest.raises(ValueError):
        ruling_components(subs[:1], 2)


def test_wrong_dimension_is_rejected():
    subs = enumerate_isotropic(QuadraticForm.hyperbolic(F3, 2), 1)
    with pytest.raises(ValueError):
        ruling_components(subs, 3)


def test_intersection_parity_within_components():
    # planes in one ruling of H(2) meet in dimension 0 or 2; across
    # rulings they meet in dimension 1
    from quadclif.rings import Matrix
    subs = enumerate_isotropic(QuadraticForm.hyperbolic(F3, 2), 1)
    part = ruling_components(subs, 2)
    a = part.components[0]
    b = part.components[1]
    inter = lambda U, V: 4 - Matrix(F3, [list(r) for r in U + V]).rank()
    assert all(inter(u, v) % 2 == 0 for u in a for v in a)
    assert all(inter(u, v) % 2 == 1 for u in a for v in b)


# ------------------------------------------------- center comparison


def test_stein_square_delta_f5():
    r = stein_vs_center(QuadraticForm.diagonal(F5, [1, 1, 1, 1]))
    assert r.delta_is_square and r.center_kind == "split"
    assert not r.extension_used
    assert r.count == 12 and r.component_sizes == (6, 6)
    assert r.frobenius_swaps is None and r.matches_center


def test_stein_nonsquare_delta_f3():
    r = stein_vs_center(QuadraticForm.diagonal(F3, [1, 1, 1, 2]))
    assert not r.delta_is_square and r.center_kind == "field"
    assert r.extension_used
    assert r.count == 20 and r.component_sizes == (10, 10)
    assert r.frobenius_swaps is True
    perm = r.lagrangians.frobenius
    assert sorted(perm) == list(range(20))
    assert all(perm[perm[i]] == i and perm[i] != i for i in range(20))


def test_stein_nonsquare_delta_f5_goes_to_f25():
    r = stein_vs_center(QuadraticForm.diagonal(F5, [1, 1, 1, 2]))
    assert r.extension_used and r.count == 52
    assert r.component_sizes == (26, 26) and r.frobenius_swaps is True


def test_stein_hyperbolic_line():
    r = stein_vs_center(QuadraticForm.hyperbolic(F3, 1))
    assert r.count == 2 and r.component_sizes == (1, 1)
    assert r.delta_is_square and not r.extension_used


def test_stein_rank6_split_over_f3():
    r = stein_vs_center(QuadraticForm.hyperbolic(F3, 3))
    assert r.delta_is_square and not r.extension_used
    assert r.count == 80 and r.component_sizes == (40, 40)


def test_stein_rejections():
    with pytest.raises(ValueError):
        stein_vs_center(QuadraticForm.diagonal(F3, [1, 1, 1]))  # odd rank
    with pytest.raises(ValueError):
        stein_vs_center(QuadraticForm.hyperbolic(F2, 2))  # char 2
    with pytest.raises(ValueError):
        stein_vs_center(QuadraticForm.diagonal(F3, [1, 1, 1, 0]))  # degenerate
    from quadclif.rings import QQ
    with pytest.raises(ValueError):
        stein_vs_center(QuadraticForm.diagonal(QQ, [1, 1, 1, 1]))


def test_all_regular_diagonal_rank2_forms_f3():
    # tiny complete sweep: both center kinds appear and every report
    # is internally consistent
    kinds = set()
    for a in (1, 2):
        for b in (1, 2):
            r = stein_vs_center(QuadraticForm.diagonal(F3, [a, b]))
            kinds.add(r.center_kind)
            assert r.matches_center
            if r.delta_is_square:
                assert r.count == 2
            else:
                assert r.extension_used and r.frobenius_swaps
    assert kinds == {"split", "field"}


def test_basis_strings_are_exact():
    r = stein_vs_center(QuadraticForm.hyperbolic(F3, 1))
    strs = r.lagrangians.basis_strings()
    assert set(strs) == {("1 0",), ("0 1",)}
