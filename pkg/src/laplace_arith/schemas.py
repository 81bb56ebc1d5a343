"""Lossless JSON serialization for every artifact type.

Rationals travel as decimal strings "a/b" (denominator omitted when 1), so
no floating point ever appears in an artifact.  Every dump re-parses to an
equal in-memory value; the round-trip property is part of the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .core import PadicContext, as_rational
from .gammaring import GammaPoly
from .linalg import Matrix
from .series import LogLaurentSeries, MatrixSeries
from .weyl import WeylOperator


def rational_str(x) -> str:
    return str(as_rational(x))


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ValueError(f"expected an exact rational string, got {s!r}")
    return as_rational(s)


def dump_padic_context(ctx: PadicContext) -> dict:
    return {"p": ctx.p}


def parse_padic_context(obj: dict) -> PadicContext:
    return PadicContext(int(obj["p"]))


def dump_gamma_poly(p: GammaPoly) -> dict:
    one_var = len(p.base) == 1
    terms = []
    for mono, coeff in sorted(p.terms.items()):
        if one_var:
            entry = [[order, exp] for (_, order), exp in mono]
        else:
            entry = [[var, order, exp] for (var, order), exp in mono]
        terms.append({"monomial": entry, "coeff": rational_str(coeff)})
    base = rational_str(p.base[0]) if one_var else [rational_str(g) for g in p.base]
    return {"base_gamma": base, "terms": terms, "max_order": p.max_order}


def parse_gamma_poly(obj: dict) -> GammaPoly:
    raw = obj["base_gamma"]
    base = (
        (parse_rational(raw),)
        if isinstance(raw, str)
        else tuple(parse_rational(g) for g in raw)
    )
    max_order = int(obj.get("max_order", 8))
    terms = {}
    for t in obj["terms"]:
        mono = []
        for entry in t["monomial"]:
            if len(entry) == 2:
                order, exp = entry
                mono.append(((0, int(order)), int(exp)))
            elif len(entry) == 3:
                var, order, exp = entry
                mono.append(((int(var), int(order)), int(exp)))
            else:
                raise ValueError(f"bad monomial entry {entry!r}")
        terms[tuple(sorted(mono))] = parse_rational(t["coeff"])
    return GammaPoly(base, terms, max_order)


def dump_matrix(m: Matrix) -> dict:
    return {
        "rows": m.nrows,
        "cols": m.ncols,
        "entries": [rational_str(e) for row in m.rows for e in row],
    }


def parse_matrix(obj: dict) -> Matrix:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = [parse_rational(e) for e in obj["entries"]]
    if len(entries) != rows * cols:
        raise ValueError("matrix entry count does not match its shape")
    return Matrix(
        [entries[r * cols : (r + 1) * cols] for r in range(rows)]
    )


def _dump_coeff(c) -> Union[str, dict]:
    if isinstance(c, GammaPoly):
        return dump_gamma_poly(c)
    if isinstance(c, Matrix):
        return {"matrix": dump_matrix(c)}
    return rational_str(c)


def _parse_coeff(obj):
    if isinstance(obj, str):
        return parse_rational(obj)
    if isinstance(obj, dict) and "matrix" in obj:
        return parse_matrix(obj["matrix"])
    if isinstance(obj, dict):
        return parse_gamma_poly(obj)
    raise ValueError(f"unrecognized coefficient {obj!r}")


def dump_series(s: LogLaurentSeries) -> dict:
    return {
        "d": s.d,
        "gamma": [rational_str(g) for g in s.gamma],
        "orthant": s.orthant,
        "terms": [
            {
                "alpha": list(alpha),
                "logpow": list(logpow),
                "coeff": _dump_coeff(c),
            }
            for (alpha, logpow), c in sorted(
                s.terms.items(), key=lambda kv: (kv[0][0], kv[0][1])
            )
        ],
    }


def parse_series(obj: dict) -> LogLaurentSeries:
    gamma = tuple(parse_rational(g) for g in obj["gamma"])
    terms = {}
    for t in obj["terms"]:
        key = (tuple(int(e) for e in t["alpha"]), tuple(int(e) for e in t["logpow"]))
        terms[key] = _parse_coeff(t["coeff"])
    declared = obj.get("orthant")
    s = LogLaurentSeries(gamma, terms)
    if declared in ("+", "-") and s.orthant not in (declared, "0"):
        raise ValueError(f"terms do not lie in the declared {declared} orthant")
    return s


def dump_matrix_series(m: MatrixSeries) -> dict:
    return {
        "d": m.d,
        "nu": m.nu,
        "mu": m.mu,
        "lambda": [
            [rational_str(e) for row in lam.rows for e in row]
            for lam in m.Lambda
        ],
        "terms": [
            {
                "alpha": list(alpha),
                "Y": [rational_str(e) for row in y.rows for e in row],
            }
            for alpha, y in sorted(m.terms.items())
        ],
    }


def parse_matrix_series(obj: dict) -> MatrixSeries:
    nu = int(obj["nu"])
    mu = int(obj.get("mu", nu))
    lambdas = []
    for flat in obj["lambda"]:
        entries = [parse_rational(e) for e in flat]
        if len(entries) != nu * nu:
            raise ValueError("lambda entry count does not match nu")
        lambdas.append(Matrix([entries[r * nu : (r + 1) * nu] for r in range(nu)]))
    terms = {}
    for t in obj["terms"]:
        entries = [parse_rational(e) for e in t["Y"]]
        if len(entries) != mu * nu:
            raise ValueError("coefficient entry count does not match mu x nu")
        terms[tuple(int(e) for e in t["alpha"])] = Matrix(
            [entries[r * nu : (r + 1) * nu] for r in range(mu)]
        )
    return MatrixSeries(tuple(lambdas), terms, mu=mu)


def dump_operator(op: WeylOperator) -> dict:
    return {
        "d": op.d,
        "terms": [
            {"x": list(a), "dx": list(b), "coeff": rational_str(c)}
            for (a, b), c in sorted(op.terms.items())
        ],
    }


def parse_operator_json(obj: dict) -> WeylOperator:
    d = int(obj["d"])
    terms = {}
    for t in obj["terms"]:
        key = (tuple(int(e) for e in t["x"]), tuple(int(e) for e in t["dx"]))
        terms[key] = terms.get(key, Fraction(0)) + parse_rational(t["coeff"])
    return WeylOperator(d, terms)


def dump_r_table(k: int, gamma, n_max: int, table) -> dict:
    """Audit dump of change-of-basis coefficients for |n| <= n_max."""
    rows = []
    for n in range(-n_max, n_max + 1):
        for j in range(k + 1):
            for l in range(j, k + 1):
                rows.append(
                    {"n": n, "j": j, "l": l, "r": rational_str(table.value(n, j, l))}
                )
    return {"k": k, "gamma": rational_str(gamma), "rows": rows}
