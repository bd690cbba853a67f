import pytest
from hypothesis import given, strategies as st

from linkoids.laurent import (
    A, LAM, lam_pair, LaurentPoly, DELTA, MINUS_A3,
    parse_poly, serialize_poly, poly_add, poly_mul, poly_substitute,
)
from linkoids.errors import NegativeExponentSubstitution

pA = LaurentPoly.var(A)
pAinv = LaurentPoly.var(A, -1)
lam = LaurentPoly.var(LAM)


def test_add_examples():
    assert poly_add(pA, -pA).is_zero()
    assert poly_add(pA + pAinv, pAinv) == pA + 2 * pAinv
    assert poly_add(DELTA, DELTA) == parse_poly("-2A^2-2A^-2".replace("2A", "2*A"))


def test_mul_examples():
    assert poly_mul(pA + pAinv, pA - pAinv) == LaurentPoly.var(A, 2) - LaurentPoly.var(A, -2)
    assert poly_mul(MINUS_A3, LaurentPoly.var(A, -3, -1)) == 1
    assert poly_mul(DELTA, DELTA) == parse_poly("A^4+2+A^-4")


def test_substitute_examples():
    p = LaurentPoly.var(lam_pair(1, 2)) * LaurentPoly.var(lam_pair(3, 4))
    assert poly_substitute(p, {lam_pair(1, 2): lam, lam_pair(3, 4): lam}) == lam * lam
    assert poly_substitute(pA * lam, {LAM: 1}) == pA
    q = LaurentPoly.var(lam_pair(1, 4)) * LaurentPoly.var(lam_pair(2, 3))
    got = poly_substitute(q, {lam_pair(1, 4): DELTA * LaurentPoly.var(lam_pair(1, 4))})
    assert got == DELTA * q


def test_substitute_negative_exponent_guard():
    p = LaurentPoly.var(A, -1)
    with pytest.raises(NegativeExponentSubstitution):
        p.substitute({A: DELTA})
    # units are fine
    assert p.substitute({A: MINUS_A3}) == LaurentPoly.var(A, -3, -1)


def test_mirror_involution():
    p = MINUS_A3 + DELTA * lam
    assert p.mirror().mirror() == p


def test_normalization_powers():
    assert MINUS_A3 ** -1 == LaurentPoly.var(A, -3, -1)
    assert MINUS_A3 ** -3 == LaurentPoly.var(A, -9, -1)
    assert MINUS_A3 ** 0 == 1


def test_serialize_examples():
    assert str(lam) == "l"
    assert str(MINUS_A3 * lam) == "-A^3*l"
    assert str(DELTA) == "-A^2-A^-2"
    l12, l34 = LaurentPoly.var(lam_pair(1, 2)), LaurentPoly.var(lam_pair(3, 4))
    assert str((LaurentPoly.var(A, 2) + 1) * l12 * l34) == "A^2*l12*l34+l12*l34"
    assert str(LaurentPoly.var(lam_pair(3, 14))) == "l3_14"
    assert str(LaurentPoly.zero()) == "0"


def test_parse_roundtrip_examples():
    for s in ["0", "l", "-A^3*l", "-A^2-A^-2", "A^2*l12*l34+l12*l34",
              "A^7+A^3+A^-1-A^-9", "l3_14", "5*A^-2*l13*l24-7"]:
        assert serialize_poly(parse_poly(s)) == s


_vars = st.sampled_from([A, LAM, lam_pair(1, 2), lam_pair(3, 4), lam_pair(2, 13)])


@st.composite
def _polys(draw):
    n = draw(st.integers(0, 5))
    p = LaurentPoly.zero()
    for _ in range(n):
        c = draw(st.integers(-9, 9))
        v = draw(_vars)
        e = draw(st.integers(-3, 3))
        if v != A and e < 0:
            e = -e  # lambda variables occur with nonnegative exponents in practice
        p = p + LaurentPoly.var(v, e, c) if e else p + LaurentPoly.const(c)
    return p


@given(_polys())
def test_serialize_parse_roundtrip(p):
    assert parse_poly(serialize_poly(p)) == p


@given(_polys(), _polys(), _polys())
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p * LaurentPoly.const(1) == p


@given(_polys())
def test_mirror_is_involution(p):
    assert p.mirror().mirror() == p
