from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ogdegen import exactnum as en
from ogdegen.dmatroid import index_two_matrix
from ogdegen.errors import PoleAtZero, SingularSystem

T = en.T
F = Fraction

small = st.integers(-6, 6)
fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9))
polys = st.lists(small, min_size=0, max_size=3)


@st.composite
def rational_functions(draw):
    num = draw(polys)
    den = draw(st.lists(small, min_size=1, max_size=3).filter(any))
    return en.RationalFunction(num, den)


def to_sympy(f, t=sympy.Symbol("t")):
    num = sum(c * t ** i for i, c in enumerate(f.num.coeffs))
    den = sum(c * t ** i for i, c in enumerate(f.den.coeffs))
    return num / den


# -- examples ---------------------------------------------------------------

def test_rank_examples():
    assert en.mat_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert en.mat_rank([[0] * 5, [0] * 5]) == 0
    R = index_two_matrix()
    assert en.mat_rank(R.columns([0, 1, 2])) == 3


def test_solve_square_examples():
    assert en.solve_square([[1, 0], [0, 1]], [5, 7]) == [5, 7]
    assert en.solve_square([[2, 1], [1, 1]], [3, 2]) == [1, 1]
    with pytest.raises(SingularSystem):
        en.solve_square([[1, 1], [2, 2]], [1, 1])


def test_solve_unique_overdetermined():
    assert en.solve_unique([[1, 0], [0, 1], [1, 1]], [2, 3, 5]) == [2, 3]
    with pytest.raises(SingularSystem):
        en.solve_unique([[1, 0], [0, 1], [1, 1]], [2, 3, 6])


def test_eval_at_zero_examples():
    assert en.eval_at_zero((T + 3) / (T + 1)) == 3
    assert en.eval_at_zero(T / T) == 1
    with pytest.raises(PoleAtZero):
        en.eval_at_zero(1 / T)


def test_normal_form_is_structural():
    a = (T * T - 1) / (T - 1)
    assert a == T + 1
    assert a.den.coeffs == (1,)
    b = en.RationalFunction((2, 4), (-6,))
    assert b.num.coeffs == (-1, -2) and b.den.coeffs == (3,)


def test_smith_examples():
    assert en.smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).diagonal == (1, 1, 1)
    assert en.smith_normal_form([[1, 1, 0], [1, 0, 1], [0, 1, 1]]).diagonal == (1, 1, 2)
    assert en.smith_normal_form([[2, 0], [0, 4]]).diagonal == (2, 4)


def test_lattice_index_examples():
    assert en.lattice_index([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3) == 1
    assert en.lattice_index([[1, 1, 0], [1, 0, 1], [0, 1, 1]], 3) == 2
    assert en.lattice_index([[1, 0, 0], [0, 1, 0]], 3) is en.INFINITE


def test_json_round_trip():
    M = [[F(1, 2), (T + 1) / (T - 3)], [F(0), T]]
    back = en.matrix_from_json(en.matrix_to_json(M))
    assert back.entries == tuple(tuple(r) for r in M)


# -- properties -------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(rational_functions(), rational_functions())
def test_field_ops_match_sympy(a, b):
    sa, sb = to_sympy(a), to_sympy(b)
    assert sympy.simplify(to_sympy(a + b) - (sa + sb)) == 0
    assert sympy.simplify(to_sympy(a * b) - sa * sb) == 0
    if b:
        assert sympy.simplify(to_sympy(a / b) - sa / sb) == 0


@settings(max_examples=200, deadline=None)
@given(rational_functions(), rational_functions())
def test_eval_at_zero_commutes(a, b):
    try:
        a0, b0 = en.eval_at_zero(a), en.eval_at_zero(b)
    except PoleAtZero:
        return
    assert en.eval_at_zero(a + b) == a0 + b0
    assert en.eval_at_zero(a * b) == a0 * b0
    if b0:
        assert en.eval_at_zero(a / b) == a0 / b0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8).flatmap(
    lambda m: st.lists(st.lists(fractions, min_size=m, max_size=m), min_size=1, max_size=8)))
def test_rank_over_q_matches_sympy(rows):
    assert en.mat_rank(rows) == sympy.Matrix(rows).rank()
    assert en.naive_rank(rows) == en.mat_rank(rows)


@st.composite
def low_degree_matrices(draw):
    m = draw(st.integers(1, 6))
    k = draw(st.integers(1, 6))
    cell = st.one_of(st.just(en.RationalFunction()), st.builds(
        lambda p: en.RationalFunction(p), st.lists(st.integers(-3, 3), max_size=3)))
    rows = draw(st.lists(st.lists(cell, min_size=k, max_size=k), min_size=m, max_size=m))
    # force some dependence now and then
    if m > 1 and draw(st.booleans()):
        rows[-1] = [x + y for x, y in zip(rows[0], rows[1 % m])]
    return rows


@settings(max_examples=200, deadline=None)
@given(low_degree_matrices())
def test_rank_over_qt_matches_naive_and_sympy(rows):
    r = en.mat_rank(rows)
    assert r == en.naive_rank(rows)
    assert r == sympy.Matrix([[to_sympy(v) for v in row] for row in rows]).rank(simplify=True)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(fractions, min_size=n, max_size=n))))
def test_solve_square_inverts(data):
    M, x = data
    if en.mat_rank(M) < len(M):
        with pytest.raises(SingularSystem):
            en.solve_square(M, en.mat_vec(M, x))
        return
    assert en.solve_square(M, en.mat_vec(M, x)) == x


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=1, max_size=5)))
def test_smith_matches_sympy(rows):
    sf = en.smith_normal_form(rows)
    d = sf.diagonal
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    M = sympy.Matrix(rows)
    assert sf.rank == M.rank()
    if M.rows == M.cols:
        prod = 1
        for v in d:
            prod *= v
        assert (prod if sf.rank == M.rows else 0) == abs(M.det())
    if sf.rank:
        from sympy.matrices.normalforms import smith_normal_form
        S = smith_normal_form(M, domain=sympy.ZZ)
        ref = sorted(abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0)
        assert sorted(d) == ref
