import json
from fractions import Fraction as F

import pytest

from laplace_arith import schemas
from laplace_arith.core import PadicContext
from laplace_arith.gammaring import GammaPoly
from laplace_arith.linalg import Matrix
from laplace_arith.series import LogLaurentSeries, MatrixSeries
from laplace_arith.standard import build_r_table, laplace_series
from laplace_arith.weyl import WeylOperator, parse_operator


def json_round(obj):
    return json.loads(json.dumps(obj))


class TestRationals:
    def test_format(self):
        assert schemas.rational_str(F(3, 2)) == "3/2"
        assert schemas.rational_str(F(7)) == "7"
        assert schemas.parse_rational("3/2") == F(3, 2)
        assert schemas.parse_rational("-4") == F(-4)

    def test_floats_rejected(self):
        with pytest.raises(ValueError):
            schemas.parse_rational(0.5)


class TestPadic:
    def test_round_trip(self):
        ctx = PadicContext(7)
        assert schemas.parse_padic_context(
            json_round(schemas.dump_padic_context(ctx))
        ) == ctx


class TestGammaPoly:
    def test_one_variable_round_trip(self):
        p = GammaPoly(
            (F(1, 2),),
            {
                (((0, 1), 2),): F(3, 7),
                (((0, 2), 1), ((0, 3), 1)): F(-1),
                tuple(): F(5),
            },
        )
        doc = json_round(schemas.dump_gamma_poly(p))
        assert schemas.parse_gamma_poly(doc) == p
        # one-variable monomials use [order, exponent] pairs
        entries = [t["monomial"] for t in doc["terms"]]
        assert [[1, 2]] in entries

    def test_multivariate_round_trip(self):
        p = GammaPoly(
            (F(1, 2), F(-1, 3)),
            {(((0, 1), 1), ((1, 2), 3)): F(2, 9)},
        )
        doc = json_round(schemas.dump_gamma_poly(p))
        assert schemas.parse_gamma_poly(doc) == p
        assert doc["terms"][0]["monomial"] == [[0, 1, 1], [1, 2, 3]]


class TestMatrixDocs:
    def test_matrix_round_trip(self):
        m = Matrix([[F(1, 2), 3], [F(-7, 5), 0]])
        assert schemas.parse_matrix(json_round(schemas.dump_matrix(m))) == m

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            schemas.parse_matrix({"rows": 2, "cols": 2, "entries": ["1"]})


class TestSeriesDocs:
    def test_rational_series_round_trip(self):
        s = LogLaurentSeries(
            (F(1, 2), F(-1, 3)),
            {((1, 0), (1, 0)): F(3, 4), ((0, -2), (0, 1)): F(-2)},
        )
        doc = json_round(schemas.dump_series(s))
        assert schemas.parse_series(doc) == s
        assert doc["orthant"] == "mixed"

    def test_gamma_coefficient_series_round_trip(self):
        s = laplace_series(
            LogLaurentSeries((F(1, 2),), {((1,), (1,)): F(2)})
        )
        doc = json_round(schemas.dump_series(s))
        assert schemas.parse_series(doc) == s

    def test_matrix_coefficient_series_round_trip(self):
        s = LogLaurentSeries(
            (F(1, 2),),
            {((0,), (1,)): Matrix([[1, 2], [3, 4]])},
        )
        doc = json_round(schemas.dump_series(s))
        assert schemas.parse_series(doc) == s

    def test_declared_orthant_validated(self):
        doc = {
            "d": 1,
            "gamma": ["1/2"],
            "orthant": "-",
            "terms": [{"alpha": [2], "logpow": [0], "coeff": "1"}],
        }
        with pytest.raises(ValueError):
            schemas.parse_series(doc)

    def test_matrix_series_round_trip(self):
        m = MatrixSeries(
            (Matrix([[F(1, 2), 1], [0, F(1, 2)]]),),
            {(2,): Matrix([[1, 2], [3, 4]]), (-1,): Matrix([[0, 1], [1, 0]])},
        )
        doc = json_round(schemas.dump_matrix_series(m))
        assert schemas.parse_matrix_series(doc) == m

    def test_rectangular_coefficients(self):
        m = MatrixSeries(
            (Matrix([[F(1, 2)]]),), {(0,): Matrix([[1], [2]])}, mu=2
        )
        doc = json_round(schemas.dump_matrix_series(m))
        assert schemas.parse_matrix_series(doc) == m


class TestOperatorDocs:
    def test_round_trip(self):
        op = parse_operator("x1*Dx1^2 + (3/2)*Dx2 - 1", d=2)
        doc = json_round(schemas.dump_operator(op))
        assert schemas.parse_operator_json(doc) == op

    def test_example_shape(self):
        op = WeylOperator(1, {((1,), (2,)): F(1)})
        assert schemas.dump_operator(op) == {
            "d": 1,
            "terms": [{"x": [1], "dx": [2], "coeff": "1"}],
        }


class TestRTableDump:
    def test_audit_format(self):
        table = build_r_table(1, F(1, 2), 3)
        doc = json_round(schemas.dump_r_table(1, F(1, 2), 2, table))
        assert doc["k"] == 1 and doc["gamma"] == "1/2"
        rows = {(r["n"], r["j"], r["l"]): r["r"] for r in doc["rows"]}
        assert rows[(0, 0, 0)] == "1"
        assert rows[(1, 0, 1)] == "-2/3"  # -1/(g+1) at g = 1/2
        assert rows[(-1, 0, 1)] == "2"  # 1/g
