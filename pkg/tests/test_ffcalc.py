from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcfourier import ffcalc
from bcfourier.errors import NegativeSlope, NonPositiveSlope, TorsionNotDualizable
from bcfourier.ffcalc import INF, BCDatum, CoherentDatum, StableDatum, stable

O = CoherentDatum([(0, 1)])
MIXED = CoherentDatum([stable(2), stable(Fraction(1, 2))])


def test_rank_degree_examples():
    assert ffcalc.rank_degree(O) == (1, 0)
    assert ffcalc.rank_degree(CoherentDatum(torsion=[5])) == (0, 5)
    assert ffcalc.rank_degree(MIXED) == (3, 3)


def test_stable_datum_validation():
    with pytest.raises(ValueError):
        StableDatum(2, 4)
    with pytest.raises(ValueError):
        CoherentDatum(torsion=[0])


def test_hn_polygon_examples():
    assert ffcalc.hn_polygon(CoherentDatum([stable(1)])).vertices == ((0, 0), (1, 1))
    assert ffcalc.hn_polygon(CoherentDatum()).segments == ()
    poly = ffcalc.hn_polygon(MIXED + CoherentDatum(torsion=[1]))
    assert poly.segments == ((INF, 0, 1), (2, 1, 2), (Fraction(1, 2), 2, 1))
    assert poly.vertices == ((0, 0), (0, 1), (1, 3), (3, 4))


def test_dual_and_twist_examples():
    half = CoherentDatum([stable(Fraction(1, 2))])
    assert ffcalc.dual(half) == CoherentDatum([stable(Fraction(-1, 2))])
    assert ffcalc.twist(half, 1) == CoherentDatum([stable(Fraction(3, 2))])
    assert ffcalc.twist(MIXED, -1).degree == 0
    with pytest.raises(TorsionNotDualizable):
        ffcalc.dual(CoherentDatum(torsion=[1]))


def test_change_field_examples():
    assert ffcalc.pushforward(O, 2) == CoherentDatum([(0, 1, 2)])
    assert ffcalc.pullback(CoherentDatum([stable(Fraction(1, 2))]), 2) == CoherentDatum([(1, 1, 2)])
    assert ffcalc.pushforward(CoherentDatum([stable(1)]), 3) == CoherentDatum([(1, 3, 1)])


def test_presentation_nonneg_examples():
    p = ffcalc.presentation_nonneg(O)
    assert (p.left, p.middle) == (0, 1)
    p = ffcalc.presentation_nonneg(CoherentDatum(torsion=[4]))
    assert (p.left, p.middle) == (4, 4)
    p = ffcalc.presentation_nonneg(MIXED)
    assert (p.left, p.middle) == (3, 6) and p.verify()
    with pytest.raises(NegativeSlope):
        ffcalc.presentation_nonneg(CoherentDatum([stable(-1)]))


def test_presentation_positive_examples():
    p = ffcalc.presentation_positive(CoherentDatum([stable(1)]))
    assert (p.r, p.d_prime, p.ambient) == (1, 0, CoherentDatum([stable(1)]))
    p = ffcalc.presentation_positive(MIXED)
    assert (p.r, p.d_prime) == (3, 18)
    assert p.ambient == CoherentDatum([(1, 3, 9)])
    assert ffcalc.rank_degree(p.ambient) == (27, 9)
    assert p.verify()
    with pytest.raises(NonPositiveSlope):
        ffcalc.presentation_positive(O + CoherentDatum([stable(1)]))


def test_ample_twist_bound():
    assert ffcalc.ample_twist_bound(O) == 1
    assert ffcalc.ample_twist_bound(CoherentDatum([stable(-3)])) == 4
    assert ffcalc.ample_twist_bound(CoherentDatum(torsion=[2])) == 0


def test_bc_dimension():
    assert ffcalc.bc_dimension(CoherentDatum([stable(1)])) == (1, -2)
    assert ffcalc.bc_dimension(CoherentDatum(torsion=[3])) == (3, -6)
    assert ffcalc.bc_dimension(MIXED) == (3, -6)
    with pytest.raises(NonPositiveSlope):
        ffcalc.bc_dimension(O)


def test_bc_dualize_examples():
    assert ffcalc.bc_dualize(BCDatum(locsys_rank=3)) == BCDatum(classifying_rank=3)
    D = ffcalc.bc_dualize(BCDatum(degree0=CoherentDatum([stable(1)])))
    assert D == BCDatum(degree1=CoherentDatum([stable(-1)]))
    T = ffcalc.bc_dualize(BCDatum(degree0=CoherentDatum(torsion=[2])))
    assert T.dual_torsion == (2,) and T.rank_profile() == (0, 0, 0, 2)


def test_ext_table():
    E, S = ffcalc.UNIT, ffcalc.SKYSCRAPER
    assert str(ffcalc.ext_table(E, E)) == "E[0]"
    assert ffcalc.ext_table(S, E).degrees() == [1]
    assert str(ffcalc.ext_table(S, E)) == "O#(-1)[-1]"
    assert ffcalc.ext_table("o#", "o#").degrees() == [0, 1]
    assert all(ffcalc.serre_consistent(x, y) for x in (E, S) for y in (E, S))
    with pytest.raises(ValueError):
        ffcalc.generator("nope")


# properties -------------------------------------------------------------------------

def data(min_slope=None, strict=False, torsion=True):
    slopes = st.fractions(min_value=-4, max_value=4, max_denominator=5)
    if min_slope is not None:
        slopes = slopes.filter(lambda s: s > min_slope if strict else s >= min_slope)
    bundles = st.lists(st.tuples(slopes, st.integers(1, 3)), max_size=4)
    tors = st.lists(st.integers(1, 5), max_size=3) if torsion else st.just([])
    return st.builds(lambda bs, ts: CoherentDatum([stable(s, c) for s, c in bs], ts), bundles, tors)


@given(data(), data(), st.integers(-3, 3))
def test_additivity_and_twist(F, G, n):
    assert ffcalc.rank_degree(F + G) == (F.rank + G.rank, F.degree + G.degree)
    assert ffcalc.twist(F, n).degree == F.degree + n * F.rank
    assert ffcalc.twist(F, n).rank == F.rank
    assert ffcalc.twist(ffcalc.twist(F, n), -n) == F


@given(data(torsion=False))
def test_dual_involution(F):
    assert ffcalc.dual(ffcalc.dual(F)) == F


@given(data())
def test_hn_polygon_concave(F):
    poly = ffcalc.hn_polygon(F)
    slopes = [s for s, _r, _d in poly.segments]
    assert all(a > b for a, b in zip(slopes, slopes[1:]))
    if poly.vertices:
        assert poly.vertices[-1] == (F.rank, F.degree)


@given(data(), st.integers(1, 4))
def test_change_field_bookkeeping(F, r):
    up, down = ffcalc.pullback(F, r), ffcalc.pushforward(F, r)
    assert (up.rank, up.degree) == (F.rank, r * F.degree)
    assert (down.rank, down.degree) == (r * F.rank, F.degree)
    both = ffcalc.pushforward(up, r)
    assert (both.rank, both.degree) == (r * F.rank, r * F.degree)


@given(data(min_slope=0))
def test_nonneg_presentation(F):
    assert ffcalc.presentation_nonneg(F).verify()


@given(data(min_slope=0, strict=True))
def test_positive_presentation(F):
    p = ffcalc.presentation_positive(F)
    assert p.verify()
    r = p.r
    assert p.d_prime == r * (r * F.degree - F.rank)
    assert p.ambient == (CoherentDatum([(1, r, r * F.degree)]) if F.degree else CoherentDatum())


@given(data(min_slope=0, strict=True), st.integers(0, 3), st.integers(0, 3),
       data(min_slope=0, strict=True, torsion=False), st.lists(st.integers(1, 3), max_size=2))
def test_bc_dualize_involution(pos, a, b, neg, tors):
    B = BCDatum(pos, a, b, ffcalc.dual(neg), tuple(tors))
    D = ffcalc.bc_dualize(B)
    assert ffcalc.bc_dualize(D) == B
    assert D.rank_profile() == tuple(reversed(B.rank_profile()))
    assert BCDatum.from_dict(B.to_dict()) == B
