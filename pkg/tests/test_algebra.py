import math
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from paraprod.algebra import Scalar, UPoly, upoly_M_transform, upoly_S_transform, upoly_T_transform
from paraprod.expr import parse_upoly

from conftest import scalars, upolys, wpolys

u = UPoly.u()
w = UPoly.w()


def P(text):
    return parse_upoly(text)


class TestScalar:
    def test_gaussian_rationals(self):
        a = Scalar(Fraction(1, 2), 1)
        assert a * a.conjugate() == Scalar(Fraction(5, 4))
        assert a.abs2() == Fraction(5, 4)
        assert Scalar(0, 1) * Scalar(0, 1) == Scalar(-1)

    def test_division_stays_exact(self):
        assert Scalar(1) / 3 * 3 == Scalar(1)
        assert (Scalar(1, 1) / Scalar(1, -1)) == Scalar(0, 1)

    def test_big_factorials_do_not_overflow(self):
        x = Scalar(1)
        for k in range(1, 30):
            x = x * k
        assert x == Scalar(math.factorial(29))


class TestTransforms:
    def test_T_examples(self):
        assert upoly_T_transform(P("1")) == u
        assert upoly_T_transform(UPoly()).is_zero()
        for n in range(6):
            assert upoly_T_transform(u**n) == (u ** (n + 1)).scale(Fraction(1, n + 1))

    def test_S_examples(self):
        assert upoly_S_transform(P("1")).is_zero()
        assert upoly_S_transform(u) == P("w*u + 1/2*u^2")
        for n in range(1, 6):
            want = w * u**n + (u ** (n + 1)).scale(Fraction(n, n + 1))
            assert upoly_S_transform(u**n) == want

    def test_M_examples(self):
        assert upoly_M_transform(P("1")) == u + w
        assert upoly_M_transform(u) == P("u^2 + w*u")
        assert upoly_M_transform(UPoly()).is_zero()

    def test_M_is_sum_of_S_T_and_w(self):
        # multiplication by g splits as S + T + g(0) * evaluation at 0
        p = P("3 + w*u - 2/3*u^2")
        split = upoly_S_transform(p) + upoly_T_transform(p) + w * UPoly.from_wpoly(p.at_u_zero())
        assert split == upoly_M_transform(p)

    @given(upolys(), upolys(), scalars)
    def test_linearity(self, p, q, c):
        for t in (upoly_T_transform, upoly_S_transform, upoly_M_transform):
            assert t(p + q.scale(c)) == t(p) + t(q).scale(c)

    @given(upolys())
    def test_degrees(self, p):
        if p.is_zero():
            return
        assert upoly_T_transform(p).degree() == p.degree() + 1
        if p.degree() >= 1:
            assert upoly_S_transform(p).degree() == p.degree() + 1


class TestRings:
    @given(wpolys(), wpolys(), wpolys())
    def test_wpoly_ring(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert (a - a).is_zero()

    @given(upolys(), upolys(), upolys())
    def test_upoly_ring(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a

    @given(upolys(), st.integers(0, 3))
    def test_w_division(self, p, k):
        q = (w**k) * p * w
        assert q.divide_by_w() == (w**k) * p
