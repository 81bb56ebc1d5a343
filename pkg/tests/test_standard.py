import math
import random
from fractions import Fraction as F

import pytest

from laplace_arith.core import MultiIndex, pochhammer
from laplace_arith.gammaring import GammaPoly, gamma_shift, rho_closed_form
from laplace_arith.series import LogLaurentSeries, derive, monomial_mul
from laplace_arith.standard import (
    RTable,
    RhoTable,
    build_r_table,
    injectivity_certificate,
    laplace_series,
    laplace_term,
    rho_recurrence_step,
    term_prefactor,
)

G = F(1, 2)


class TestRhoRecurrence:
    def test_k0_row_is_constant_one(self):
        # the log-free transform pins every shifted row of k = 0 to 1
        tab = RhoTable(0, G)
        for n in range(-10, 11):
            assert tab.row(n) == (GammaPoly.one((G,)),)

    def test_single_step_matches_shift_oracle(self):
        row = tuple(rho_closed_form(1, j, G) for j in range(2))
        stepped = rho_recurrence_step(row, G)
        # j = 0 entry at gamma+1 must be the rebased closed form
        expected = gamma_shift(rho_closed_form(1, 0, G + 1), -1)
        assert stepped[0] == expected
        assert stepped[1] == row[1]

    def test_identity_under_zero_steps(self):
        tab = RhoTable(3, G)
        assert tab.row(0) == tuple(rho_closed_form(3, j, G) for j in range(4))

    @pytest.mark.parametrize("gamma", [F(1, 2), F(-1, 3), F(5, 7)])
    @pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
    def test_rows_match_closed_forms(self, gamma, k):
        tab = RhoTable(k, gamma)
        for n in range(-12, 13):
            assert tab.row(n) == tab.closed_form_row(n)

    def test_top_coefficient_shift_invariant(self):
        tab = RhoTable(3, G)
        for n in range(-8, 9):
            assert tab.row(n)[3].constant_value() == -1

    def test_integer_base_rejected(self):
        with pytest.raises(ValueError):
            RhoTable(1, F(2))


class TestRTable:
    def test_base_rows_are_kronecker(self):
        rt = RTable(3, G)
        for j in range(4):
            for l in range(j, 4):
                assert rt.value(0, j, l) == (1 if j == l else 0)

    def test_top_entry_one_and_triangular(self):
        rt = build_r_table(3, G, 10)
        for n in range(-10, 11):
            assert rt.value(n, 3, 3) == 1
            assert rt.value(n, 2, 2) == 1
            assert rt.value(n, 1, 0) == 0

    def test_single_step_value(self):
        # our sign convention: r[+1, 0, 1] = -1/(g+1); the printed variant
        # differs by the global recurrence sign
        rt = RTable(1, G)
        assert rt.value(1, 0, 1) == -1 / (G + 1)
        assert rt.value(-1, 0, 1) == 1 / G

    @pytest.mark.parametrize("gamma", [F(1, 2), F(-1, 3)])
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_rho1_reconstruction(self, gamma, k):
        tab = RhoTable(k, gamma)
        rt = build_r_table(k, gamma, 10)
        base = tab.row(0)
        for n in range(-10, 11):
            row = tab.row(n)
            for j in range(k + 1):
                acc = GammaPoly.zero((gamma,), tab.max_order)
                for l in range(j, k + 1):
                    acc = acc + rt.value(n, j, l) * base[l]
                assert acc == row[j]


# -- symbolic membership oracle (integer span of Pochhammer-reciprocal
# products): rebuild the table where each value is a Z-linear combination of
# products prod 1/(g+m_i), and check ranges, integrality and evaluation.


def _sym_scale(p, c):
    return {k: c * v for k, v in p.items() if c * v}


def _sym_add(p1, p2):
    out = dict(p1)
    for k, v in p2.items():
        out[k] = out.get(k, 0) + v
        if not out[k]:
            del out[k]
    return out


def _sym_append(p, m):
    return {tuple(sorted(k + (m,))): v for k, v in p.items()}


def _sym_eval(p, gamma):
    total = F(0)
    for mono, c in p.items():
        term = F(c)
        for m in mono:
            term /= gamma + m
        total += term
    return total


def _build_symbolic(k, gamma, n_max):
    """Symbolic twin of RTable: values[(sign, n, j, l)] -> span element."""
    values = {}
    for sign in (1, -1):
        for j in range(k + 1):
            for l in range(j, k + 1):
                values[(sign, 0, j, l)] = {tuple(): 1} if j == l else {}
    for n in range(1, n_max + 1):
        for j in range(k, -1, -1):
            for l in range(j, k + 1):
                if l == j:
                    values[(1, n, j, l)] = {tuple(): 1}
                    values[(-1, n, j, l)] = {tuple(): 1}
                    continue
                # plus branch: -(j+1) sum_{i<n} r[+i, j+1, l] * 1/(g+i+1)
                acc = {}
                for i in range(n):
                    acc = _sym_add(
                        acc, _sym_append(values[(1, i, j + 1, l)], i + 1)
                    )
                values[(1, n, j, l)] = _sym_scale(acc, -(j + 1))
                # minus branch: +(j+1) sum_{1<=i<=n} r[-i, j+1, l] * 1/(g-i+1)
                acc = {}
                for i in range(1, n + 1):
                    acc = _sym_add(
                        acc, _sym_append(values[(-1, i, j + 1, l)], -(i - 1))
                    )
                values[(-1, n, j, l)] = _sym_scale(acc, j + 1)
    return values


class TestMembershipOracle:
    @pytest.mark.parametrize("gamma", [F(1, 2), F(-1, 3)])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_span_structure_and_evaluation(self, gamma, k):
        n_max = 8
        sym = _build_symbolic(k, gamma, n_max)
        rt = build_r_table(k, gamma, n_max)
        for n in range(n_max + 1):
            for j in range(k + 1):
                for l in range(j, k + 1):
                    for sign in (1, -1):
                        elem = sym[(sign, n, j, l)]
                        for mono, c in elem.items():
                            assert isinstance(c, int)  # Z-span coefficients
                            assert len(mono) <= k  # at most k factors
                            for m in mono:
                                if sign == 1:
                                    assert 1 <= m <= n
                                else:
                                    assert 0 <= -m <= n  # 1/(g - m') factors
                        assert _sym_eval(elem, gamma) == rt.value(
                            sign * n, j, l
                        )


class TestRTableGrowth:
    def test_archimedean_growth_bounded(self):
        # |r| grows at most geometrically in the shift (both branches)
        from laplace_arith.estimates import geometric_growth_fit, log_size

        rt = build_r_table(2, G, 200)
        for sign in (1, -1):
            samples = []
            for n in range(1, 201):
                big = max(
                    abs(rt.value(sign * n, j, l))
                    for j in range(3)
                    for l in range(j, 3)
                )
                samples.append((n, log_size(big)))
            assert geometric_growth_fit(samples).passed

    def test_denominator_growth_bounded(self):
        import math as m

        from laplace_arith.estimates import geometric_growth_fit, log_size

        rt = build_r_table(2, G, 200)
        for sign in (1, -1):
            samples = []
            cur = 1
            for n in range(1, 201):
                for j in range(3):
                    for l in range(j, 3):
                        cur = m.lcm(cur, rt.value(sign * n, j, l).denominator)
                samples.append((n, log_size(F(cur)) if cur > 1 else F(0)))
            assert geometric_growth_fit(samples).passed

    def test_padic_envelope_at_500(self):
        # max |r|_v^(1/n) <= 1 + envelope: valuations stay above
        # -8 log(n)/log(p) at n = 500 for gamma in Z_p
        from laplace_arith.core import PadicContext, val_p
        from laplace_arith.estimates import log_lower, log_upper

        ctx = PadicContext(3)
        rt = build_r_table(2, G, 500)
        n = 500
        bound = -8 * log_upper(n) / log_lower(3)
        for sign in (1, -1):
            worst = min(
                val_p(rt.value(sign * n, j, l), ctx)
                for j in range(3)
                for l in range(j, 3)
                if rt.value(sign * n, j, l)
            )
            assert worst >= bound


class TestConcurrency:
    def test_shared_tables_under_threads(self):
        from concurrent.futures import ThreadPoolExecutor

        tab = RhoTable(3, F(5, 7))
        rt = RTable(3, F(5, 7))

        def probe(n):
            return (tab.row(n), [rt.value(n, j, 3) for j in range(4)])

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(probe, list(range(-40, 41)) * 3))
        # all replicas agree and match a fresh sequential build
        fresh_tab = RhoTable(3, F(5, 7))
        fresh_rt = build_r_table(3, F(5, 7), 40)
        for idx, n in enumerate(list(range(-40, 41)) * 3):
            row, rvals = results[idx]
            assert row == fresh_tab.row(n)
            assert rvals == [fresh_rt.value(n, j, 3) for j in range(4)]


class TestLaplaceTerm:
    def test_one_variable_zero_shift(self):
        t = laplace_term((G,), (0,), (0,))
        assert t.gamma == (F(-3, 2),)
        ((alpha, logpow), coeff), = t.terms.items()
        assert alpha == MultiIndex((0,)) and logpow == MultiIndex((0,))
        assert coeff.constant_value() == G  # (g)_1 against Gamma(g)

    def test_positive_shift_prefactor(self):
        t = laplace_term((G,), (0,), (2,))
        ((alpha, _), coeff), = t.terms.items()
        assert alpha == MultiIndex((-2,))
        assert coeff.constant_value() == pochhammer(G, 3)  # 15/8

    def test_two_variable_product(self):
        t = laplace_term((G, F(1, 3)), (0, 0), (0, 0))
        ((alpha, _), coeff), = t.terms.items()
        assert t.gamma == (F(-3, 2), F(-4, 3))
        assert coeff.constant_value() == G * F(1, 3)

    def test_top_log_sign(self):
        t = laplace_term((G,), (2,), (1,))
        top = t.terms[(MultiIndex((-1,)), MultiIndex((2,)))]
        assert top.constant_value() == pochhammer(G, 2)  # (-1)^2 * (g)_2

    def test_negative_shift_prefactor(self):
        # (-1)^m g / ((-g)(-g+1)...): exercised against Gamma-ratio oracle
        for m in range(1, 6):
            pref = term_prefactor((G,), (-m,))
            expected = F(1)
            for t in range(m):
                expected /= G - t  # Gamma(g+1)/Gamma(g-m+1), then / g
            assert pref == G * expected

    def test_integral_gamma_rejected(self):
        with pytest.raises(ValueError):
            laplace_term((F(3),), (0,), (0,))


class TestLaplaceSeries:
    def test_single_term_delegates(self):
        s = LogLaurentSeries((G,), {((2,), (1,)): F(5)})
        assert laplace_series(s) == laplace_term((G,), (1,), (2,)).scale(F(5))

    def test_klj_top_line(self):
        gammas = (G, F(1, 3))
        terms = {}
        for a1 in range(3):
            terms[((a1, 0), (0, 0))] = F(1, math.factorial(a1))
        img = laplace_series(LogLaurentSeries(gammas, terms))
        for a1 in range(3):
            got = img.terms[(MultiIndex((-a1, 0)), MultiIndex((0, 0)))]
            expected = (
                F(1, math.factorial(a1))
                * pochhammer(G, a1 + 1)
                * pochhammer(F(1, 3), 1)
            )
            assert got.constant_value() == expected

    def test_top_log_coefficient_sign(self):
        # k = (1, 0): top-log output carries (-1)^|k| a_alpha (g)_{alpha+1}
        gammas = (G, F(1, 3))
        s = LogLaurentSeries(gammas, {((2, 1), (1, 0)): F(3)})
        img = laplace_series(s)
        got = img.terms[(MultiIndex((-2, -1)), MultiIndex((1, 0)))]
        expected = -F(3) * pochhammer(G, 3) * pochhammer(F(1, 3), 2)
        assert got.constant_value() == expected

    def test_orthant_swap(self):
        pos = LogLaurentSeries((G,), {((2,), (0,)): 1, ((0,), (0,)): 1})
        assert laplace_series(pos).orthant == "-"
        neg = LogLaurentSeries((G,), {((-2,), (0,)): 1})
        assert laplace_series(neg).orthant == "+"


class TestCommutation:
    @pytest.mark.parametrize("d,gammas", [(1, (G,)), (2, (G, F(-2, 5)))])
    def test_op2_both_identities(self, d, gammas):
        rng = random.Random(41)
        betas = {
            1: [(1,), (2,), (3,)],
            2: [(1, 0), (0, 1), (1, 1), (2, 1)],
        }[d]
        for _ in range(8):
            terms = {}
            for _ in range(4):
                a = tuple(rng.randint(-3, 3) for _ in range(d))
                j = tuple(rng.randint(0, 2) for _ in range(d))
                terms[(a, j)] = F(rng.randint(-9, 9) or 1, rng.randint(1, 4))
            s = LogLaurentSeries(gammas, terms)
            img = laplace_series(s)
            for beta in betas:
                sign = -1 if sum(beta) % 2 else 1
                lhs = img
                ds = s
                for i, b in enumerate(beta):
                    for _ in range(b):
                        lhs = derive(lhs, i)
                        ds = derive(ds, i)
                assert lhs == laplace_series(monomial_mul(s, beta).scale(sign))
                assert laplace_series(ds) == monomial_mul(img, beta)


class TestInjectivity:
    def test_certificate_and_nonvanishing(self):
        rng = random.Random(42)
        for _ in range(15):
            d = rng.randint(1, 2)
            gammas = tuple(F(rng.randint(-5, 5) * 2 + 1, 2) for _ in range(d))
            terms = {}
            for _ in range(rng.randint(1, 4)):
                a = tuple(rng.randint(-2, 2) for _ in range(d))
                j = tuple(rng.randint(0, 2) for _ in range(d))
                terms[(a, j)] = F(rng.randint(-5, 5) or 1)
            s = LogLaurentSeries(gammas, terms)
            cert = injectivity_certificate(s)
            assert cert["nonzero"]
            assert cert["maximal_log_classes"]
            assert not laplace_series(s).is_zero()

    def test_single_h_term_never_vanishes(self):
        for k in range(4):
            s = LogLaurentSeries((G,), {((0,), (k,)): 1})
            assert not laplace_series(s).is_zero()
