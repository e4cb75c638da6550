"""Isotropic vectors and hyperbolic splitting of quadratic forms.

The search for isotropic vectors is exact and deterministic:

* finite fields: exhaustive projective enumeration (first nonzero
  coordinate normalized to 1, lexicographic in the field's element
  order), so returning None is a proof of anisotropy;
* the rationals: integer vectors swept by increasing height (maximum
  absolute coordinate), primitive and sign-normalized, up to a height
  budget, so None is merely inconclusive;
* rational function fields: constant vectors first (searched through
  the base field), then polynomial coefficient vectors of bounded
  degree when the base is finite, again inconclusive on None.

Splitting follows the classical construction: an isotropic v with
b(v, w0) nonzero for some basis vector w0 is completed to a hyperbolic
pair (v, w) with q(w) = 0 and b(v, w) = 1 by subtracting the right
multiple of v, and the form decomposes exactly as H plus its restriction
to the orthogonal complement of the pair.  Everything is re-verified on
the spot; reduction reports carry change-of-basis witnesses in the
original coordinates and check them by restriction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .quadform import QuadraticForm
from .rings import InvariantViolation, Matrix


@dataclass(frozen=True)
class SearchBudget:
    """Caps for the inconclusive searches (infinite fields only).

    height: maximum absolute coordinate for integer vectors over Q.
    degree: maximum coefficient degree for polynomial vectors over k(t).
    enum: overall cap on candidates tried in one k(t) search sweep.
    """

    height: int = 10
    degree: int = 2
    enum: int = 200000

    def __post_init__(self):
        if self.height < 1 or self.degree < 0 or self.enum < 1:
            raise ValueError("budget caps must be positive")


DEFAULT_BUDGET = SearchBudget()


def search_is_exhaustive(field):
    """True when find_isotropic returning None proves anisotropy."""
    return field.size() is not None


# ---------------------------------------------------------------------------
# fast evaluation models


def _prime_int_rows(q):
    p = q.field.p
    return [[q.c[i][j].v if j >= i else 0 for j in range(q.n)] for i in range(q.n)], p


def _rational_int_rows(q):
    den = 1
    for row in q.c:
        for a in row:
            den = den * a.denominator // math.gcd(den, a.denominator)
    rows = [[int(a * den) for a in row] for row in q.c]
    return rows


def _eval_int_rows(rows, v, n):
    acc = 0
    for i in range(n):
        vi = v[i]
        if vi:
            row = rows[i]
            s = 0
            for j in range(i, n):
                if row[j] and v[j]:
                    s += row[j] * v[j]
            acc += vi * s
    return acc


# ---------------------------------------------------------------------------
# isotropic vector search


def find_isotropic(q, budget=DEFAULT_BUDGET):
    """First nonzero vector with q(v) = 0 in the canonical order, or None."""
    kind = q.field.kind
    if kind in ("prime", "extension"):
        return _find_isotropic_finite(q)
    if kind == "rationals":
        return _find_isotropic_rational(q, budget)
    if kind == "function":
        return _find_isotropic_function_field(q, budget)
    raise ValueError("no isotropy search over %s" % q.field.label())


def _find_isotropic_finite(q):
    field = q.field
    n = q.n
    if field.kind == "prime":
        rows, p = _prime_int_rows(q)
        for lead in range(n):
            tail_len = n - lead - 1
            for tail in itertools.product(range(p), repeat=tail_len):
                v = (0,) * lead + (1,) + tail
                if _eval_int_rows(rows, v, n) % p == 0:
                    return tuple(field.from_int(c) for c in v)
        return None
    elems, index, add, mul = field.small_tables()
    zero_i = index[field.zero()]
    one_i = index[field.one()]
    size = len(elems)
    rows = [[index[q.c[i][j]] for j in range(n)] for i in range(n)]
    for lead in range(n):
        tail_len = n - lead - 1
        for tail in itertools.product(range(size), repeat=tail_len):
            v = (zero_i,) * lead + (one_i,) + tail
            acc = zero_i
            for i in range(n):
                vi = v[i]
                if vi != zero_i:
                    row = rows[i]
                    for j in range(i, n):
                        c = row[j]
                        if c != zero_i and v[j] != zero_i:
                            acc = add[acc][mul[vi][mul[c][v[j]]]]
            if acc == zero_i:
                return tuple(elems[c] for c in v)
    return None


def _find_isotropic_rational(q, budget):
    n = q.n
    rows = _rational_int_rows(q)
    for h in range(1, budget.height + 1):
        for v in itertools.product(range(-h, h + 1), repeat=n):
            if max(abs(c) for c in v) != h:
                continue
            first = next((c for c in v if c), None)
            if first is None or first < 0:
                continue
            if math.gcd(*v) != 1:
                continue
            if _eval_int_rows(rows, v, n) == 0:
                return tuple(Fraction(c) for c in v)
    return None


def _find_isotropic_function_field(q, budget):
    K = q.field
    base = K.base
    n = q.n
    # constant vectors first: q(v) must vanish identically in t
    if base.size() is not None:
        consts = list(base.elements())
        count = 0
        capped = False
        for lead in range(n):
            if capped:
                break
            for tail in itertools.product(consts, repeat=n - lead - 1):
                count += 1
                if count > budget.enum:
                    capped = True
                    break
                v = tuple([K.zero()] * lead + [K.one()] + [_const_in(K, e) for e in tail])
                if not q.evaluate(v):
                    return v
        # polynomial coefficient vectors of degree 1..degree
        p = base.size()
        for d in range(1, budget.degree + 1):
            width = n * (d + 1)
            if p ** width > budget.enum:
                return None
            for flat in itertools.product(consts, repeat=width):
                v = []
                for i in range(n):
                    coeffs = flat[i * (d + 1):(i + 1) * (d + 1)]
                    v.append(_poly_in(K, coeffs))
                v = tuple(v)
                if any(v) and not q.evaluate(v):
                    return v
        return None
    # infinite base (Q): constant vectors by height sweep
    for h in range(1, budget.height + 1):
        for ints in itertools.product(range(-h, h + 1), repeat=n):
            if max(abs(c) for c in ints) != h:
                continue
            first = next((c for c in ints if c), None)
            if first is None or first < 0:
                continue
            if math.gcd(*ints) != 1:
                continue
            v = tuple(K.from_int(c) for c in ints)
            if not q.evaluate(v):
                return v
    return None


def _const_in(K, e):
    from .rings import Poly, RatFunc

    return RatFunc(K, Poly.const(K.base, K.var, e), None)


def _poly_in(K, coeffs):
    from .rings import Poly, RatFunc

    return RatFunc(K, Poly(K.base, K.var, coeffs), None)


# ---------------------------------------------------------------------------
# hyperbolic splitting


def hyperbolic_complement(q, v):
    """w with q(w) = 0 and b(v, w) = 1, for isotropic v outside the radical.

    Takes the first standard basis vector e_j with b(v, e_j) nonzero and
    corrects it: w = c e_j - c^2 q(e_j) v with c = 1/b(v, e_j).
    """
    if q.evaluate(v):
        raise ValueError("vector is not isotropic")
    B = q.polar_matrix()
    bv = B.mul_vec(v)
    j = next((i for i, c in enumerate(bv) if c), None)
    if j is None:
        raise ValueError("vector lies in the radical; no hyperbolic complement")
    c = q.field.one() / bv[j]
    qj = q.c[j][j]
    scale = c * c * qj
    w = tuple(
        (c if i == j else q.field.zero()) - scale * v[i] for i in range(q.n)
    )
    if q.evaluate(w) or q.polar(v, w) != q.field.one():
        raise InvariantViolation("hyperbolic-complement",
                                 "constructed pair fails q(w) = 0, b(v, w) = 1")
    return w


def split_hyperbolic(q, v):
    """(w, complement basis, restricted form) splitting off one H.

    The complement is the kernel of the two polar rows of v and w; the
    exactness of the block decomposition is re-verified by restriction.
    """
    w = hyperbolic_complement(q, v)
    B = q.polar_matrix()
    comp = Matrix(q.field, [B.mul_vec(v), B.mul_vec(w)]).kernel_basis()
    if len(comp) != q.n - 2:
        raise InvariantViolation("hyperbolic-split",
                                 "orthogonal complement has wrong dimension %d" % len(comp))
    pair_form = q.restrict([v, w])
    if pair_form != QuadraticForm.hyperbolic(q.field, 1):
        raise InvariantViolation("hyperbolic-split", "pair block is not an exact H")
    for u in comp:
        if q.polar(v, u) or q.polar(w, u):
            raise InvariantViolation("hyperbolic-split", "complement not orthogonal to the pair")
    return w, comp, q.restrict(comp)


class ReductionReport:
    """Outcome of iterated hyperbolic splitting.

    witt_index counts the hyperbolic planes split off; pairs holds their
    (v, w) witnesses in the original coordinates.  anisotropic_form is
    the leftover regular part (proven anisotropic when conclusive is
    True, i.e. over a finite field or when nothing is left).  The
    radical part of the input is split off first and carried verbatim;
    in characteristic 2 it may support nonzero quadratic values
    (the quasilinear part), which stay untouched.
    """

    __slots__ = ("form", "witt_index", "pairs", "anisotropic_basis",
                 "anisotropic_form", "radical_basis", "radical_form",
                 "conclusive", "normal_form")

    def __init__(self, form, witt_index, pairs, anisotropic_basis, anisotropic_form,
                 radical_basis, radical_form, conclusive):
        self.form = form
        self.witt_index = witt_index
        self.pairs = pairs
        self.anisotropic_basis = anisotropic_basis
        self.anisotropic_form = anisotropic_form
        self.radical_basis = radical_basis
        self.radical_form = radical_form
        self.conclusive = conclusive
        expected = QuadraticForm.hyperbolic(form.field, witt_index)
        expected = expected.direct_sum(anisotropic_form).direct_sum(radical_form)
        basis = []
        for v, w in pairs:
            basis.append(v)
            basis.append(w)
        basis.extend(anisotropic_basis)
        basis.extend(radical_basis)
        got = form.restrict(basis)
        if got != expected:
            raise InvariantViolation(
                "reduction-witness",
                "restriction along the witness basis does not match H^w + aniso + rad",
            )
        self.normal_form = expected

    def describe(self):
        return "H(%d) + aniso(%d) + rad(%d)" % (
            self.witt_index, self.anisotropic_form.n, self.radical_form.n)

    def __repr__(self):
        return ("ReductionReport(witt=%d, aniso_rank=%d, radical=%d, conclusive=%s)"
                % (self.witt_index, self.anisotropic_form.n,
                   self.radical_form.n, self.conclusive))


def reduce_fully(q, budget=DEFAULT_BUDGET):
    """Split off the radical, then hyperbolic planes until stuck."""
    rad_basis, comp_basis, q_rad, q_reg = q.split_radical()
    frame = [tuple(v) for v in comp_basis]
    pairs = []
    current = q_reg
    while current.n >= 1:
        v_cur = find_isotropic(current, budget)
        if v_cur is None:
            break
        if current.n == 1:
            # a regular rank-1 form cannot be isotropic; a hit means a bug
            raise InvariantViolation("reduction-rank1", "isotropic vector in a regular line")
        w_cur, comp_cur, next_form = split_hyperbolic(current, v_cur)
        v_orig = _combine(frame, v_cur, q.field)
        w_orig = _combine(frame, w_cur, q.field)
        pairs.append((v_orig, w_orig))
        frame = [_combine(frame, u, q.field) for u in comp_cur]
        current = next_form
    # a regular rank-1 leftover is anisotropic with no search needed
    conclusive = search_is_exhaustive(q.field) or current.n <= 1
    return ReductionReport(q, len(pairs), pairs, frame, current,
                           [tuple(v) for v in rad_basis], q_rad, conclusive)


def _combine(frame, coords, field):
    n = len(frame[0]) if frame else 0
    out = [field.zero()] * n
    for c, vec in zip(coords, frame):
        if c:
            for i in range(n):
                if vec[i]:
                    out[i] = out[i] + c * vec[i]
    return tuple(out)
