import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from laplace_arith.core import (
    INFINITY,
    MultiIndex,
    Ordering,
    PadicContext,
    lcd,
    multi_pochhammer,
    multiindex_order,
    pochhammer,
    rising,
    val_p,
)

rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=40
)
nonzero_rationals = rationals.filter(lambda x: x != 0)


class TestPochhammer:
    def test_base_case_is_gamma(self):
        # nonstandard convention: (g)_0 = g, so (g)_0 == (g)_1
        assert pochhammer(F(1, 2), 0) == F(1, 2)
        assert pochhammer(F(1, 2), 0) == pochhammer(F(1, 2), 1)

    def test_direct_products(self):
        assert pochhammer(F(1, 2), 3) == F(15, 8)
        assert pochhammer(F(-2, 3), 2) == F(-2, 9)

    def test_brute_force_oracle(self):
        for num in range(-7, 8):
            g = F(num, 3)
            for n in range(1, 9):
                prod = F(1)
                for m in range(n):
                    prod *= g + m
                assert pochhammer(g, n) == prod

    @given(rationals, st.integers(min_value=1, max_value=30))
    def test_recurrence(self, g, n):
        assert pochhammer(g, n + 1) == pochhammer(g, n) * (g + n)

    @given(rationals, st.integers(min_value=0, max_value=25))
    def test_gamma_compatibility(self, g, n):
        # (g)_{n+1} = g * (g+1)_n with the standard rising factorial
        assert pochhammer(g, n + 1) == g * rising(g + 1, n)

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            pochhammer(F(1, 2), -1)


class TestMultiPochhammer:
    def test_examples(self):
        assert multi_pochhammer((F(1, 2), F(1, 3)), (1, 1)) == F(1, 6)
        assert multi_pochhammer((F(1, 2), F(1, 3)), (0, 0)) == F(1, 6)
        assert multi_pochhammer((F(1, 2), F(1, 3)), (3, 2)) == F(5, 6)

    def test_componentwise_oracle(self):
        gammas = (F(1, 2), F(-2, 5), F(7, 3))
        alpha = (3, 2, 4)
        expected = F(1)
        for g, a in zip(gammas, alpha):
            expected *= pochhammer(g, a)
        assert multi_pochhammer(gammas, alpha) == expected

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            multi_pochhammer((F(1, 2),), (1, 2))


class TestValuation:
    def test_examples(self):
        p3 = PadicContext(3)
        assert val_p(F(9, 5), p3) == 2
        assert val_p(F(1, 3), p3) == -1
        assert val_p(0, p3) == INFINITY

    def test_pochhammer_half_at_two(self):
        # every factor of (1/2)_10 has 2-adic valuation -1
        p2 = PadicContext(2)
        assert val_p(pochhammer(F(1, 2), 10), p2) == -10
        total = sum(val_p(F(1, 2) + m, p2) for m in range(10))
        assert total == -10

    @given(nonzero_rationals, nonzero_rationals, st.sampled_from([2, 3, 5, 7]))
    def test_multiplicative(self, x, y, p):
        ctx = PadicContext(p)
        assert val_p(x * y, ctx) == val_p(x, ctx) + val_p(y, ctx)

    @given(nonzero_rationals, nonzero_rationals, st.sampled_from([2, 3, 5]))
    def test_ultrametric(self, x, y, p):
        ctx = PadicContext(p)
        assert val_p(x + y, ctx) >= min(val_p(x, ctx), val_p(y, ctx))

    def test_prime_checked(self):
        with pytest.raises(ValueError):
            PadicContext(6)
        with pytest.raises(ValueError):
            PadicContext(1)

    def test_pi_v_valuation(self):
        assert PadicContext(3).pi_v_valuation == F(1, 2)
        assert PadicContext(2).pi_v_valuation == 1


class TestLcd:
    def test_examples(self):
        assert lcd([F(1, 2), F(1, 3)]) == 6
        assert lcd([2, 3]) == 1

    def test_pochhammer_ratio_oracle(self):
        values = [pochhammer(F(1, 2), n) / pochhammer(F(1, 3), n) for n in range(6)]
        expected = 1
        for v in values:
            expected = math.lcm(expected, v.denominator)
        assert lcd(values) == expected

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            lcd([])

    def test_geometric_growth_smoke(self):
        # d' = d = 1 case: log lcd / n stays bounded
        values = []
        logs = []
        for n in range(1, 120):
            values.append(pochhammer(F(1, 2), n) / pochhammer(F(1, 3), n))
            logs.append(math.log(lcd(values)) / n)
        assert max(logs[60:]) < 4


class TestMultiIndex:
    def test_order_examples(self):
        assert multiindex_order((1, 2), (1, 2)) is Ordering.EQUAL
        assert multiindex_order((1, 2), (1, 3)) is Ordering.LESS
        assert multiindex_order((1, 2), (2, 1)) is Ordering.INCOMPARABLE
        assert multiindex_order((2, 3), (1, 3)) is Ordering.GREATER

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            multiindex_order((1,), (1, 2))

    def test_arithmetic(self):
        a = MultiIndex((2, 3))
        b = MultiIndex((1, 1))
        assert a + b == MultiIndex((3, 4))
        assert a - b == MultiIndex((1, 2))
        assert (-a) == MultiIndex((-2, -3))
        assert a.order == 5
        assert a.factorial() == 12

    def test_strict_less_needs_some_strict_slot(self):
        # strict < means componentwise <= plus strict in some slot
        assert MultiIndex((1, 2)).leq(MultiIndex((1, 2)))
        assert multiindex_order((0, 2), (1, 2)) is Ordering.LESS

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            MultiIndex(())
