from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fftc.exact import (
    QQ,
    QQ_I,
    FieldSpec,
    GaussianRational,
    Matrix,
    ModP,
    ScalarParseError,
    SparseEchelon,
    gaussian,
    inverse,
    kernel_basis,
    mat_rref,
    parse_scalar,
    rank,
    render_scalar,
    same_span,
    solve_linear,
)

F5 = FieldSpec("prime_field", 5)
SF_CARTAN_N1 = [[2, 2, 0, 0], [2, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_parse_rational():
    assert parse_scalar("3/4", QQ) == Fraction(3, 4)
    assert parse_scalar("-6/8", QQ) == Fraction(-3, 4)
    assert parse_scalar("10/5", QQ) == 2


def test_parse_gaussian_unit_squares_to_minus_one():
    i = parse_scalar("0+1/1*i", QQ_I)
    assert i * i == -1
    assert isinstance(i * i, int)


def test_parse_mod_p():
    assert parse_scalar("7", F5) == ModP(2, 5)
    assert parse_scalar("-1", F5).value == 4


@pytest.mark.parametrize("text", ["", "1/", "abc", "1.5", "2**3", "1/2/3", "i*i"])
def test_parse_malformed(text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text, QQ_I)


def test_parse_zero_denominator():
    with pytest.raises(ScalarParseError):
        parse_scalar("1/0", QQ)


def test_parse_i_outside_gaussian_field():
    with pytest.raises(ScalarParseError):
        parse_scalar("1+2*i", QQ)
    with pytest.raises(ScalarParseError):
        parse_scalar("i", F5)


@pytest.mark.parametrize(
    "text,value",
    [
        ("i", gaussian(0, 1)),
        ("-i", gaussian(0, -1)),
        ("-1/4*i", gaussian(0, Fraction(-1, 4))),
        ("1/2-3*i", gaussian(Fraction(1, 2), -3)),
        ("2+i", gaussian(2, 1)),
        ("5+0*i", 5),
    ],
)
def test_gaussian_grammar(text, value):
    assert parse_scalar(text, QQ_I) == value


def test_prime_field_requires_prime():
    with pytest.raises(ValueError):
        FieldSpec("prime_field", 6)
    with pytest.raises(ValueError):
        FieldSpec("rational", 5)


def test_no_floats():
    with pytest.raises(TypeError):
        QQ.convert(0.5)


rationals = st.fractions(max_denominator=50).map(lambda x: x.numerator if x.denominator == 1 else x)
gaussians = st.builds(gaussian, rationals, rationals)


@given(gaussians)
def test_render_round_trip_gaussian(x):
    assert parse_scalar(render_scalar(x), QQ_I) == x


@given(st.integers(min_value=-100, max_value=100))
def test_render_round_trip_mod_p(n):
    x = F5.convert(n)
    assert parse_scalar(render_scalar(x), F5) == x


@given(rationals.filter(lambda x: x != 0))
def test_rational_inverse_is_exact(x):
    assert x * (1 / Fraction(x)) == 1


@given(gaussians.filter(lambda x: x != 0))
def test_gaussian_inverse_is_exact(x):
    assert x * (1 / x) == 1


def test_rref_examples():
    r, k, piv = mat_rref(Matrix([[1, 2], [2, 4]]))
    assert k == 1 and piv == [0]
    assert r == Matrix([[1, 2], [0, 0]])
    r, k, _ = mat_rref(Matrix.identity(3))
    assert k == 3 and r == Matrix.identity(3)


def test_sf_cartan_rank_and_kernel():
    m = Matrix(SF_CARTAN_N1)
    assert rank(m) == 3
    ker = kernel_basis(m)
    assert len(ker) == 1
    assert same_span(ker, [(1, -1, 0, 0)], QQ)


def test_kernel_trivial_cases():
    assert len(kernel_basis(Matrix.zeros(2, 2))) == 2
    assert kernel_basis(Matrix([[1, 2], [3, 4]])) == []


def test_solve_examples():
    assert solve_linear(Matrix([[2]]), [1]) == (Fraction(1, 2),)
    assert solve_linear(Matrix([[1, 1], [1, 1]]), [1, 2]) is None
    assert solve_linear(Matrix([[0, 1], [1, 0]]), [1, 0]) == (0, 1)


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_linear(Matrix([[1, 2]]), [1, 2])


def test_gaussian_matrix_inverse():
    i = gaussian(0, 1)
    m = Matrix([[1, i], [0, 2]], QQ_I)
    assert m @ inverse(m) == Matrix.identity(2, QQ_I)


def test_mod_p_elimination():
    m = Matrix([[1, 2], [3, 1]], F5)  # det = -5 = 0 mod 5
    assert rank(m) == 1


small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return Matrix([[draw(small) for _ in range(c)] for _ in range(r)])


@settings(max_examples=150)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == m.cols
    for v in kernel_basis(m):
        assert not any(m.apply(v))


@settings(max_examples=150)
@given(matrices())
def test_rref_preserves_row_space(m):
    r, k, _ = mat_rref(m)
    assert same_span(list(r.data[:k]), list(m.data), QQ)
    # and RREF is idempotent
    assert mat_rref(r)[0] == r


@settings(max_examples=100)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(m, x):
    b = m.apply(x[: m.cols])
    y = solve_linear(m, b)
    assert y is not None and m.apply(y) == b


@settings(max_examples=100)
@given(st.lists(st.lists(small, min_size=6, max_size=6), min_size=1, max_size=8))
def test_sparse_echelon_matches_dense_rank(rows):
    ech = SparseEchelon()
    for r in rows:
        ech.add({k: x for k, x in enumerate(r) if x})
    assert len(ech) == rank(Matrix(rows))
    ker = ech.kernel(6)
    assert len(ker) == 6 - len(ech)
    for v in ker:
        for r in rows:
            assert sum(r[k] * x for k, x in v.items()) == 0


def test_kron_shape_and_trace():
    a = Matrix([[1, 2], [3, 4]])
    b = Matrix([[0, 1], [1, 0], ])
    k = a.kron(b)
    assert (k.rows, k.cols) == (4, 4)
    assert k.trace() == a.trace() * b.trace()


def test_gaussian_collapses_to_rational():
    x = GaussianRational(1, 2) + GaussianRational(1, -2)
    assert x == 2 and isinstance(x, int)
