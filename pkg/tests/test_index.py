import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rssw.index import (
    GradedClass,
    ManifoldInvariants,
    ahat,
    ch_line,
    ch_spinor_product,
    ch_tc_twisted,
    index_dirac,
    index_rs,
    index_rs_pipeline,
)

q = gmpy2.mpq


class TestGradedClass:
    def test_truncated_product(self):
        a = GradedClass(2, 3, 5, c1sq=7)
        b = GradedClass(1, -1, 4, c1sq=7)
        p = a * b
        assert (p.deg0, p.deg2, p.deg4) == (2, 1, 8 + 5 - 3 * 7)

    def test_mismatched_c1sq(self):
        with pytest.raises(ValueError):
            GradedClass(1, 0, 0, 1) * GradedClass(1, 0, 0, 2)


class TestLine:
    def test_trivial(self):
        c = ch_line(0)
        assert (c.deg0, c.deg2, c.deg4) == (1, 1, 0)

    def test_top_term(self):
        assert ch_line(4).deg4 == 2

    def test_double_twist(self):
        assert (ch_line(6) * ch_line(6)).deg4 == 12


class TestAhat:
    def test_zero(self):
        a = ahat(0)
        assert (a.deg0, a.deg2, a.deg4) == (1, 0, 0)

    def test_sigma_16(self):
        assert ahat(16).deg4 == -2

    def test_is_dirac_index(self):
        assert ahat(-32).evaluate() == index_dirac(ManifoldInvariants(-32, 2, 0))


class TestTangent:
    def test_chi_cancels(self):
        for chi in (2, 7, 24):
            assert ch_tc_twisted(ManifoldInvariants(0, chi, 0)).evaluate() == 0

    def test_spinor_product_symmetric(self):
        inv = ManifoldInvariants(16, 24, 0)
        # 4 - 2 c2(s+) - 2 c2(s-) with c2(s+-) = -3 sigma / 4 -+ chi / 2
        assert ch_spinor_product(inv).deg4 == 3 * 16

    def test_full_term(self):
        inv = ManifoldInvariants(16, 24, 0)
        assert (ahat(16) * ch_tc_twisted(inv)).evaluate() == 40

    def test_generic_term(self):
        inv = ManifoldInvariants(-24, 10, 3)
        assert (ahat(-24, 3) * ch_tc_twisted(inv)).evaluate() == 2 * 3 + q(5, 2) * -24

    def test_rank_and_c1(self):
        c = ch_tc_twisted(ManifoldInvariants(8, 4, 1))
        assert (c.deg0, c.deg2) == (4, 4)


class TestIndex:
    def test_zero(self):
        assert index_rs(ManifoldInvariants(0, 2, 0)) == 0

    def test_sigma_16(self):
        assert index_rs(ManifoldInvariants(16, 24, 0)) == 38

    def test_untwisted(self):
        for s in (-32, -16, 16, 48):
            assert index_rs(ManifoldInvariants(s, 4, 0)) == q(19 * s, 8)

    def test_dirac(self):
        assert index_dirac(ManifoldInvariants(0, 2, 0)) == 0
        assert index_dirac(ManifoldInvariants(-16, 24, 0)) == 2
        assert index_dirac(ManifoldInvariants(16, 24, 2)) == -1

    def test_integrality_flag(self):
        with pytest.raises(ArithmeticError):
            index_rs(ManifoldInvariants(8, 4, 1), integral=True)


@given(st.integers(-64, 64), st.integers(-50, 50), st.integers(-50, 50), st.integers(-20, 20))
def test_chi_independent(sigma, chi1, chi2, c1sq):
    assert index_rs(ManifoldInvariants(sigma, chi1, c1sq)) == index_rs(ManifoldInvariants(sigma, chi2, c1sq))


@given(st.integers(-64, 64), st.integers(-20, 20), st.integers(-64, 64), st.integers(-20, 20))
def test_additive(s1, c1, s2, c2):
    a = index_rs_pipeline(ManifoldInvariants(s1, 2, c1))
    b = index_rs_pipeline(ManifoldInvariants(s2, 2, c2))
    assert index_rs_pipeline(ManifoldInvariants(s1 + s2, 2, c1 + c2)) == a + b
