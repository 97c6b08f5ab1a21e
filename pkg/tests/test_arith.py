from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcfourier._conway import conway_polynomial, is_irreducible_mod_p
from bcfourier.arith import (
    CoefficientSpec,
    LambdaRing,
    LocalFieldSpec,
    WindowElement,
    char_eval,
    char_exponent,
    finite_field,
    frobenius_trace,
    galois_ring,
    pair,
    window_codec,
)
from bcfourier.errors import (
    FieldMismatch,
    InsufficientPrecision,
    InsufficientRoots,
    NotInvertible,
    WindowMismatch,
)

from conftest import F2T, F3T, F4T, Q2, Q3, Q4UR

FIELDS = [Q2, Q3, Q4UR, F2T, F3T, F4T]


# Galois rings and finite fields ------------------------------------------------

@pytest.mark.parametrize("p,f", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (7, 3), (3, 6), (2, 7)])
def test_conway_irreducible(p, f):
    poly = conway_polynomial(p, f)
    assert len(poly) == f + 1 and poly[-1] == 1
    assert is_irreducible_mod_p(poly, p)


def test_conway_known_entries():
    assert conway_polynomial(2, 2) == (1, 1, 1)
    assert conway_polynomial(3, 2) == (2, 2, 1)
    assert conway_polynomial(2, 3) == (1, 1, 0, 1)


@pytest.mark.parametrize("p,f,N", [(2, 2, 4), (3, 2, 3), (2, 3, 3), (5, 2, 2)])
def test_teichmuller_generator(p, f, N):
    gr = galois_ring(p, f, N)
    theta = gr.theta()
    assert gr.pow(theta, p**f - 1) == gr.one()
    assert gr.frobenius(theta) == gr.pow(theta, p)
    assert gr.frobenius(theta, f) == theta


def test_trace_of_f4_generator():
    gr = galois_ring(2, 2, 1)
    assert frobenius_trace(gr, gr.theta()) == 1


@given(st.sampled_from([(2, 2, 3), (3, 2, 2), (2, 3, 2)]), st.data())
def test_galois_ring_inverse(params, data):
    p, f, N = params
    gr = galois_ring(p, f, N)
    x = tuple(data.draw(st.integers(0, gr.modulus - 1)) for _ in range(f))
    if gr.is_unit(x):
        assert gr.mul(x, gr.inverse(x)) == gr.one()
    else:
        assert gr.valuation(x) >= 1


@given(st.sampled_from([(2, 2, 3), (3, 2, 2)]), st.data())
def test_frobenius_is_ring_map(params, data):
    p, f, N = params
    gr = galois_ring(p, f, N)
    draw = lambda: tuple(data.draw(st.integers(0, gr.modulus - 1)) for _ in range(f))  # noqa: E731
    x, y = draw(), draw()
    assert gr.frobenius(gr.mul(x, y)) == gr.mul(gr.frobenius(x), gr.frobenius(y))
    assert gr.frobenius(gr.add(x, y)) == gr.add(gr.frobenius(x), gr.frobenius(y))
    assert gr.trace(gr.frobenius(x)) == gr.trace(x)


def test_finite_field_tables():
    ff = finite_field(3, 2)
    for a in range(1, 9):
        assert ff.mul(a, ff.inv(a)) == 1
        assert ff.add(a, ff.neg(a)) == 0
    with pytest.raises(NotInvertible):
        ff.inv(0)


# Coefficient ring Lambda --------------------------------------------------------

def test_cube_roots_of_unity():
    R = CoefficientSpec(2, 3, 1).ring(3)
    z = R.zeta()
    assert z**3 == R.one()
    assert (R.one() + z + z * z).is_zero()


def test_cube_root_mod_two():
    R = LambdaRing(2, 1, 1, 3)
    z = R.zeta()
    assert z * z**2 == R.one()
    assert (R.one() + z + z**2).is_zero()


def test_inv_int():
    R = CoefficientSpec(2, 2, 0).ring(3)
    assert R.inv_int(3) == 3
    with pytest.raises(NotInvertible):
        R.inv_int(2)


def test_lambda_ring_validation():
    with pytest.raises(ValueError):
        LambdaRing(3, 1, 1, 3)
    with pytest.raises(ValueError):
        LambdaRing(4, 1, 1, 3)


@given(st.sampled_from([(3, 2, 2, 2), (2, 3, 2, 3), (5, 1, 3, 2)]), st.data())
def test_lambda_ring_axioms(params, data):
    ell, n, M, p = params
    R = LambdaRing(ell, n, M, p)
    elt = lambda: R.element(data.draw(st.lists(st.integers(-50, 50), min_size=1, max_size=R.order)))  # noqa: E731
    a, b, c = elt(), elt(), elt()
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    e = data.draw(st.integers(0, 3 * R.order))
    assert R.zeta(e) == R.zeta() ** e


def test_mul_arrays_matches_scalar():
    R = LambdaRing(3, 2, 2, 2)
    a, b = R.element([1, 2, 3, 4]), R.element([5, 0, 7])
    out = R.mul_arrays([a.coeffs], [b.coeffs])
    assert tuple(out[0]) == (a * b).coeffs


# Window elements -------------------------------------------------------------------

def test_pair_half_half():
    x = WindowElement.from_fraction(Q2, 1, 1, Fraction(1, 2))
    assert pair(x, x) == WindowElement.from_fraction(Q2, 2, 0, Fraction(1, 4))


def test_pair_independent_of_representative():
    x = WindowElement.from_fraction(Q3, 1, 1, Fraction(1, 3) + 3)
    y = WindowElement.from_fraction(Q3, 1, 1, Fraction(1, 3))
    assert pair(x, y) == WindowElement.from_fraction(Q3, 2, 0, Fraction(1, 9))
    assert pair(WindowElement.from_fraction(Q3, 1, 1, 0), y) == WindowElement.from_fraction(Q3, 2, 0, 0)


def test_psi_sums_to_zero_over_nontrivial_quotient():
    R = CoefficientSpec(2, 3, 1).ring(3)
    total = R.zero()
    for i in range(3):
        total = total + char_eval(WindowElement.from_index(Q3, 1, 0, i), R)
    assert total.is_zero()


def test_psi_of_half_is_minus_one():
    R = CoefficientSpec(3, 2, 1).ring(2)
    x = WindowElement.from_fraction(Q2, 1, 0, Fraction(1, 2))
    assert char_eval(x, R) == R.from_int(-1)


def test_psi_trivial_on_integers():
    R = CoefficientSpec(3, 2, 2).ring(2)
    x = WindowElement.from_fraction(Q2, 0, 2, Fraction(3))
    assert char_eval(x, R) == R.one()


def test_psi_char_p_reads_residue():
    R = CoefficientSpec(3, 2, 1).ring(2)
    x = WindowElement.from_laurent(F2T, 2, 0, {-1: 1, -2: 1})
    assert char_exponent(x, R) == 1
    y = WindowElement.from_laurent(F2T, 2, 0, {-2: 1})
    assert char_exponent(y, R) == 0


def test_insufficient_roots():
    R = CoefficientSpec(3, 2, 1).ring(2)
    x = WindowElement.from_fraction(Q2, 2, 0, Fraction(1, 4))
    with pytest.raises(InsufficientRoots):
        char_exponent(x, R)


def test_window_errors():
    x = WindowElement.from_fraction(Q2, 1, 1, Fraction(1, 2))
    y = WindowElement.from_fraction(Q2, 0, 2, Fraction(1))
    with pytest.raises(WindowMismatch):
        x + y
    with pytest.raises(WindowMismatch):
        pair(x, y.rewindow(0, 1))
    with pytest.raises(FieldMismatch):
        WindowElement.from_fraction(F2T, 1, 1, Fraction(1, 2))
    with pytest.raises(InsufficientPrecision):
        WindowElement.from_fraction(Q2, 2, 0, Fraction(1, 4)) * WindowElement.from_fraction(Q2, 2, 0, Fraction(1, 4))


@given(st.sampled_from(FIELDS), st.integers(0, 2), st.integers(0, 2), st.data())
def test_index_roundtrip(field, m, k, data):
    n = field.q ** (m + k)
    i = data.draw(st.integers(0, n - 1))
    x = WindowElement.from_index(field, m, k, i)
    assert x.index() == i
    codec = window_codec(field, m, k)
    assert codec.point(i) == x


@given(st.sampled_from(FIELDS), st.integers(0, 2), st.integers(0, 2), st.data())
def test_window_group_laws(field, m, k, data):
    n = field.q ** (m + k)
    draw = lambda: WindowElement.from_index(field, m, k, data.draw(st.integers(0, n - 1)))  # noqa: E731
    x, y, z = draw(), draw(), draw()
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x - x).is_zero()
    assert -(-x) == x


@given(st.sampled_from(FIELDS), st.integers(1, 2), st.integers(0, 2), st.data())
def test_psi_is_additive(field, m, k, data):
    R = CoefficientSpec(3 if field.p != 3 else 2, 2, m).ring(field.p)
    n = field.q ** (m + k)
    draw = lambda: WindowElement.from_index(field, m, k, data.draw(st.integers(0, n - 1)))  # noqa: E731
    x, y = draw(), draw()
    assert char_eval(x + y, R) == char_eval(x, R) * char_eval(y, R)


@pytest.mark.parametrize("field", FIELDS)
def test_psi_nontrivial_on_inverse_uniformizer_ball(field):
    R = CoefficientSpec(3 if field.p != 3 else 2, 2, 1).ring(field.p)
    values = {char_exponent(WindowElement.from_index(field, 1, 0, i), R) for i in range(field.q)}
    assert values != {0}


@given(st.sampled_from([Q2, Q3, F2T, F4T]), st.integers(0, 2), st.integers(0, 2), st.data())
def test_pairing_is_bilinear(field, m, k, data):
    n = field.q ** (m + k)
    x = WindowElement.from_index(field, k, m, data.draw(st.integers(0, n - 1)))
    y1 = WindowElement.from_index(field, m, k, data.draw(st.integers(0, n - 1)))
    y2 = WindowElement.from_index(field, m, k, data.draw(st.integers(0, n - 1)))
    assert pair(x, y1 + y2) == pair(x, y1) + pair(x, y2)


def test_shift_and_valuation():
    x = WindowElement.from_laurent(F4T, 2, 2, {-1: 3, 1: 1})
    assert x.valuation() == -1
    assert x.shift(1).valuation() == 0
    assert WindowElement.from_fraction(Q3, 1, 2, Fraction(1, 3)).valuation() == -1
    assert WindowElement.from_fraction(Q3, 1, 2, Fraction(9)).is_zero()


def test_rewindow():
    x = WindowElement.from_fraction(Q2, 2, 2, Fraction(3, 2))
    y = x.rewindow(1, 1)
    assert y == WindowElement.from_fraction(Q2, 1, 1, Fraction(3, 2))
    with pytest.raises(WindowMismatch):
        x.rewindow(0, 1)
    with pytest.raises(InsufficientPrecision):
        x.rewindow(2, 3)


def test_field_aliases():
    assert LocalFieldSpec(2, 1, "0").characteristic == "zero-unramified"
    assert LocalFieldSpec(2, 1, "p").characteristic == "positive"
    assert Q4UR.q == 4 and Q4UR.char_zero
    with pytest.raises(ValueError):
        LocalFieldSpec(4, 1)
