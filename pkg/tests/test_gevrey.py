import math
from fractions import Fraction as F

import pytest

from laplace_arith.core import rising
from laplace_arith.gevrey import (
    CertificationError,
    NgaElement,
    NgaSummand,
    certify_gevrey,
    holonomicity_probe,
    transform_order_shift,
)
from laplace_arith.weyl import WeylOperator, parse_operator


def exp_coeffs(n_max, d=1):
    if d == 1:
        return {(n,): F(1, math.factorial(n)) for n in range(n_max + 1)}
    out = {}
    for i in range(n_max + 1):
        for j in range(n_max + 1 - i):
            out[(i, j)] = F(1, math.factorial(i) * math.factorial(j))
    return out


class TestCertify:
    def test_exponential_prototype(self):
        cert = certify_gevrey(exp_coeffs(70), -1)
        assert cert.passed
        assert cert.size_slope == 0 and cert.denom_slope == 0

    def test_two_variables(self):
        cert = certify_gevrey(exp_coeffs(16, d=2), -1)
        assert cert.passed

    def test_factorial_squared_fails(self):
        bad = {(n,): F(math.factorial(n)) ** 2 for n in range(60)}
        assert not certify_gevrey(bad, 0).passed

    def test_exponential_is_not_order_zero(self):
        # lcd{1/k! : k <= n} is n!, which is super-geometric, so the
        # E-function prototype does not certify as a G-function
        assert not certify_gevrey(exp_coeffs(70), 0).passed

    def test_geometric_at_zero(self):
        geo = {(n,): F(3) ** n for n in range(70)}
        cert = certify_gevrey(geo, 0)
        assert cert.passed

    def test_rescaling_consistency(self):
        # multiplying by alpha!^t moves a certificate from s to s + t
        base = exp_coeffs(60)
        for t in (1, -1, 2):
            rescaled = {
                a: c * F(math.factorial(a[0])) ** t for a, c in base.items()
            }
            orig = certify_gevrey(base, -1)
            moved = certify_gevrey(rescaled, -1 + t)
            assert orig.passed == moved.passed
            assert orig.size_slope == moved.size_slope
            assert orig.denom_slope == moved.denom_slope

    def test_fractional_order(self):
        # order 1/2 normalization handled through exact squares
        coeffs = {(n,): F(1) for n in range(40)}
        cert = certify_gevrey(coeffs, F(1, 2))
        assert cert.s == F(1, 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            certify_gevrey({}, 0)


class TestTransformShift:
    def test_exponential_up_shift(self):
        s = NgaSummand(exp_coeffs(80), (F(1, 2),), (0,), "+")
        rep = transform_order_shift(NgaElement([s]), -1, 80)
        assert rep["passed"]
        assert rep["summands"][0]["image_order"] == "0"

    def test_geometric_down_shift(self):
        s = NgaSummand(
            {(n,): F(1) for n in range(80)}, (F(1, 2),), (0,), "-"
        )
        rep = transform_order_shift(NgaElement([s]), 0, 80)
        assert rep["passed"]
        assert rep["summands"][0]["image_order"] == "-1"

    def test_round_trip_returns_to_order(self):
        # up then down: transform image coefficients of the exponential
        # prototype, pushed back through the 1/x direction, land at -1 again
        window = 70
        g = F(1, 2)
        up_coeffs = {
            (n,): F(1, math.factorial(n)) * rising(g, n + 1)
            for n in range(window + 1)
        }
        s_back = NgaSummand(up_coeffs, (g,), (0,), "-")
        rep = transform_order_shift(NgaElement([s_back]), 0, window)
        assert rep["passed"]
        assert rep["summands"][0]["image_order"] == "-1"

    def test_log_powers_split_into_coordinates(self):
        # window 100: the harmonic-sum coordinate's denominator sequence
        # needs that much room for its fitted slope to settle
        s = NgaSummand(exp_coeffs(100), (F(1, 2),), (1,), "+")
        rep = transform_order_shift(NgaElement([s]), -1, 100)
        assert rep["passed"]
        coords = rep["summands"][0]["coordinates"]
        assert len(coords) >= 2
        logpows = {tuple(c["logpow"]) for c in coords}
        assert (1,) in logpows and (0,) in logpows

    def test_source_failure_raises_with_diagnostics(self):
        bad = NgaSummand(
            {(n,): F(math.factorial(n)) ** 2 for n in range(40)},
            (F(1, 2),),
            (0,),
            "+",
        )
        with pytest.raises(CertificationError) as exc:
            transform_order_shift(NgaElement([bad]), 0, 40)
        assert not exc.value.certificate.passed

    def test_zero_element_vacuous(self):
        rep = transform_order_shift(
            NgaElement([NgaSummand({}, (F(1, 2),), (0,), "+")]), 0, 10
        )
        assert rep["passed"]

    def test_integral_exponent_rejected(self):
        with pytest.raises(ValueError):
            NgaSummand({(0,): F(1)}, (F(2),), (0,), "+")


class TestHolonomicityProbe:
    def test_exponential_equation(self):
        rep = holonomicity_probe(
            exp_coeffs(20), [parse_operator("Dx1 - 1")], 19
        )
        assert rep["all_annihilate"]

    def test_wrong_operator_reported_not_raised(self):
        rep = holonomicity_probe(
            exp_coeffs(20), [parse_operator("Dx1 - 2")], 19
        )
        assert not rep["all_annihilate"]
        assert rep["operators"][0]["residual_support"]

    def test_hypergeometric_truncation(self):
        c = F(1, 3)
        coeffs = {
            (n,): F(1) / (F(math.factorial(n)) * rising(c, n))
            for n in range(16)
        }
        op = WeylOperator(
            1, {((1,), (2,)): 1, ((0,), (1,)): c, ((0,), (0,)): -1}
        )
        rep = holonomicity_probe(coeffs, [op], 15)
        assert rep["all_annihilate"]

    def test_no_operators_rejected(self):
        with pytest.raises(ValueError):
            holonomicity_probe(exp_coeffs(5), [], 5)
