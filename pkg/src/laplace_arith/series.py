"""Data model for the formal objects the transforms act on.

Two types live here:

* :class:`LogLaurentSeries` -- finite sums of ``c * x^(g+a) * (log x)^j``
  over integer multi-indices ``a`` and nonnegative log-powers ``j``, with
  coefficients in a pluggable ring (Fraction, GammaPoly, or exact Matrix).
  Supports in the positive or negative orthant carry the two completion
  directions; mixed supports arise transiently (e.g. after derivations) and
  are tolerated by the data structure, classified by :attr:`orthant`.

* :class:`MatrixSeries` -- a pair (Y(x), Lambda) standing for Y(x) x^Lambda,
  where Lambda is a tuple of commuting square matrices whose eigenvalues are
  rational and non-integral (checked at construction).

There is deliberately no series-times-series product: the transform theory
is termwise and no Cauchy multiplication is ever needed, so none is exposed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import MultiIndex, as_rational
from .gammaring import GammaPoly
from .linalg import Matrix, commute, joint_eigensectors, solve_columns

Coeff = Union[Fraction, GammaPoly, Matrix]
TermKey = Tuple[MultiIndex, MultiIndex]


def _coerce_coeff(c) -> Coeff:
    if isinstance(c, (GammaPoly, Matrix)):
        return c
    return as_rational(c)


class LogLaurentSeries:
    """Finite-support series sum of c * x^(gamma+alpha) * (log x)^logpow."""

    __slots__ = ("d", "gamma", "terms")

    def __init__(
        self,
        gamma: Sequence,
        terms: Dict[Tuple[Sequence[int], Sequence[int]], Coeff] = None,
        orthant: Optional[str] = None,
    ):
        self.gamma: Tuple[Fraction, ...] = tuple(as_rational(g) for g in gamma)
        self.d = len(self.gamma)
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        clean: Dict[TermKey, Coeff] = {}
        for (alpha, logpow), coeff in (terms or {}).items():
            a = MultiIndex(alpha)
            j = MultiIndex(logpow)
            if a.dim != self.d or j.dim != self.d:
                raise ValueError("term index dimension mismatch")
            if any(e < 0 for e in j):
                raise ValueError("log powers must be nonnegative")
            c = _coerce_coeff(coeff)
            if c:
                clean[(a, j)] = c
        self.terms = clean
        if orthant is not None:
            if orthant not in ("+", "-"):
                raise ValueError("orthant must be '+' or '-'")
            if self.orthant not in (orthant, "0"):
                raise ValueError(
                    f"support is not contained in the {orthant} orthant"
                )

    @classmethod
    def _raw(cls, gamma, terms) -> "LogLaurentSeries":
        """Internal: skip validation when keys/coefficients are canonical."""
        out = object.__new__(cls)
        out.gamma = gamma
        out.d = len(gamma)
        out.terms = terms
        return out

    @property
    def orthant(self) -> str:
        """'+', '-', '0' (only alpha = 0), or 'mixed'."""
        if not self.terms:
            return "0"
        nonneg = all(a.is_nonnegative() for a, _ in self.terms)
        nonpos = all(a.is_nonpositive() for a, _ in self.terms)
        if nonneg and nonpos:
            return "0"
        if nonneg:
            return "+"
        if nonpos:
            return "-"
        return "mixed"

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LogLaurentSeries)
            and self.gamma == other.gamma
            and self.terms == other.terms
        )

    __hash__ = None  # mutable-dict-backed; not hashable

    def __add__(self, other: "LogLaurentSeries") -> "LogLaurentSeries":
        if not isinstance(other, LogLaurentSeries):
            return NotImplemented
        if self.gamma != other.gamma:
            raise ValueError("cannot add series with different exponent bases")
        terms = dict(self.terms)
        for key, c in other.terms.items():
            if key in terms:
                s = terms[key] + c
                if s:
                    terms[key] = s
                else:
                    del terms[key]
            else:
                terms[key] = c
        return LogLaurentSeries._raw(self.gamma, terms)

    def __sub__(self, other: "LogLaurentSeries") -> "LogLaurentSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "LogLaurentSeries":
        if isinstance(c, (int, str)):
            c = as_rational(c)
        terms = {}
        for key, v in self.terms.items():
            cv = c * v
            if cv:
                terms[key] = cv
        return LogLaurentSeries._raw(self.gamma, terms)

    def __repr__(self) -> str:
        return (
            f"LogLaurentSeries(d={self.d}, gamma={self.gamma}, "
            f"{len(self.terms)} terms, orthant={self.orthant!r})"
        )

    def support_radius(self) -> int:
        """max over terms of max_i |alpha_i|; 0 for the empty series."""
        if not self.terms:
            return 0
        return max(max(abs(e) for e in a) for a, _ in self.terms)

    def restrict(self, radius: int) -> "LogLaurentSeries":
        """Drop terms with any |alpha_i| > radius."""
        return LogLaurentSeries._raw(
            self.gamma,
            {
                (a, j): c
                for (a, j), c in self.terms.items()
                if all(abs(e) <= radius for e in a)
            },
        )

    def max_logpow(self) -> int:
        if not self.terms:
            return 0
        return max(max(j) for _, j in self.terms)


def derive(s: LogLaurentSeries, i: int) -> LogLaurentSeries:
    """Exact partial derivative in variable i.

    c x^(g+a) (log x)^j  ->  (g_i + a_i) c x^(g+a-e_i) (log x)^j
                             + j_i c x^(g+a-e_i) (log x)^(j-e_i)
    """
    if not 0 <= i < s.d:
        raise ValueError("variable index out of range")
    e_i = MultiIndex.unit(s.d, i)
    terms: Dict[TermKey, Coeff] = {}

    def accumulate(key, c):
        if not c:
            return
        if key in terms:
            v = terms[key] + c
            if v:
                terms[key] = v
            else:
                del terms[key]
        else:
            terms[key] = c

    for (a, j), c in s.terms.items():
        factor = s.gamma[i] + a[i]
        accumulate((a - e_i, j), factor * c)
        if j[i] > 0:
            accumulate((a - e_i, j - e_i), Fraction(j[i]) * c)
    return LogLaurentSeries._raw(s.gamma, terms)


def monomial_mul(s: LogLaurentSeries, beta: Sequence[int]) -> LogLaurentSeries:
    """Multiply by x^beta (beta >= 0): shifts every alpha by +beta."""
    b = MultiIndex(beta)
    if b.dim != s.d:
        raise ValueError("beta dimension mismatch")
    if any(e < 0 for e in b):
        raise ValueError("beta must be nonnegative")
    return LogLaurentSeries(
        s.gamma, {(a + b, j): c for (a, j), c in s.terms.items()}
    )


class MatrixSeries:
    """Y(x) x^Lambda with commuting Lambda-tuple and exact coefficients.

    ``terms[alpha]`` is the mu x nu coefficient of x^alpha in Y.  Supports
    live in the union of the two orthants; mixed-sign multi-indices are
    rejected unless ``allow_mixed_support`` is set (the double-transform
    identity rewrites x^(-Lambda-1) as x^(-1) x^(-Lambda), which shifts a
    pure support off the orthants transiently).
    """

    __slots__ = ("d", "nu", "mu", "Lambda", "terms")

    def __init__(
        self,
        Lambda: Sequence[Matrix],
        terms: Dict[Sequence[int], Matrix],
        mu: Optional[int] = None,
        allow_mixed_support: bool = False,
    ):
        self.Lambda: Tuple[Matrix, ...] = tuple(Lambda)
        self.d = len(self.Lambda)
        if self.d < 1:
            raise ValueError("need at least one variable")
        nu = self.Lambda[0].nrows
        for lam in self.Lambda:
            if lam.nrows != nu or lam.ncols != nu:
                raise ValueError("Lambda matrices must share a square size")
        for a in range(self.d):
            for b in range(a + 1, self.d):
                if not commute(self.Lambda[a], self.Lambda[b]):
                    raise ValueError("Lambda matrices must commute")
        for lam in self.Lambda:
            for ev, _ in lam.rational_eigenvalues():
                if ev.denominator == 1:
                    raise ValueError(f"integral eigenvalue {ev} in Lambda")
        self.nu = nu
        clean: Dict[MultiIndex, Matrix] = {}
        for alpha, y in (terms or {}).items():
            a = MultiIndex(alpha)
            if a.dim != self.d:
                raise ValueError("support dimension mismatch")
            if not allow_mixed_support and not (
                a.is_nonnegative() or a.is_nonpositive()
            ):
                raise ValueError(
                    f"support point {tuple(a)} is outside both orthants"
                )
            if not isinstance(y, Matrix):
                raise TypeError("coefficients must be exact matrices")
            if y.ncols != nu:
                raise ValueError("coefficient width must equal nu")
            if mu is not None and y.nrows != mu:
                raise ValueError("coefficient height must equal mu")
            if y:
                clean[a] = y
        self.terms = clean
        self.mu = mu if mu is not None else (
            next(iter(clean.values())).nrows if clean else nu
        )
        for y in clean.values():
            if y.nrows != self.mu:
                raise ValueError("inconsistent coefficient heights")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixSeries)
            and self.Lambda == other.Lambda
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"MatrixSeries(d={self.d}, nu={self.nu}, mu={self.mu}, "
            f"{len(self.terms)} terms)"
        )

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c) -> "MatrixSeries":
        c = as_rational(c)
        return MatrixSeries(
            self.Lambda,
            {a: c * y for a, y in self.terms.items()},
            mu=self.mu,
            allow_mixed_support=True,
        )

    def flip_sign(self) -> "MatrixSeries":
        """Y(x) -> Y(-x): multiplies each Y_alpha by (-1)^|alpha|."""
        return MatrixSeries(
            self.Lambda,
            {
                a: (y if a.order % 2 == 0 else -y)
                for a, y in self.terms.items()
            },
            mu=self.mu,
            allow_mixed_support=True,
        )


def shift_lambda_basis(m: MatrixSeries, t: Sequence[int]) -> MatrixSeries:
    """Rewrite Y(x) x^Lambda as (Y(x) x^(-t)) x^(Lambda + t I).

    Pure bookkeeping: the represented object is unchanged.  New coefficients
    are Y_(beta+t); the support may leave the orthant union, which is allowed
    here.
    """
    t = MultiIndex(t)
    if t.dim != m.d:
        raise ValueError("shift dimension mismatch")
    from .linalg import Matrix as _M

    new_lambda = tuple(
        lam + t[i] * _M.identity(m.nu) for i, lam in enumerate(m.Lambda)
    )
    new_terms = {(a - t): y for a, y in m.terms.items()}
    return MatrixSeries(new_lambda, new_terms, mu=m.mu, allow_mixed_support=True)


def expand_xLambda(m: MatrixSeries, log_trunc: int) -> List[LogLaurentSeries]:
    """Exact expansion of Y(x) x^Lambda into log-Laurent sectors.

    The commuting tuple is split into joint generalized eigensectors; on each
    sector x^Lambda contributes x^gamma times a terminating exponential of
    the nilpotent parts, so the expansion is exact.  One series per sector is
    returned (distinct sectors have distinct exponent bases and cannot be a
    single series).  ``log_trunc`` must be at least the largest nilpotency
    index minus one; smaller values raise instead of silently truncating.
    """
    sectors = joint_eigensectors(list(m.Lambda))
    n = m.nu
    u_cols: List[Tuple[Fraction, ...]] = []
    for _, v in sectors:
        u_cols.extend(v.columns())
    u = Matrix.from_columns(u_cols)
    u_inv = u.inverse()
    out: List[LogLaurentSeries] = []
    row_offset = 0
    for tag, v in sectors:
        size = v.ncols
        w = Matrix(u_inv.rows[row_offset : row_offset + size])
        row_offset += size
        # restriction of each Lambda_i to the sector, minus its eigenvalue
        nils = []
        for i, lam in enumerate(m.Lambda):
            rest = solve_columns(v, lam * v)
            nil = rest - tag[i] * Matrix.identity(size)
            if nil.power(size):
                raise RuntimeError("sector restriction is not nilpotent")
            nils.append(nil)
        # per-variable exp(N log x) coefficients: N^t / t!
        per_var: List[List[Matrix]] = []
        for nil in nils:
            coeffs = [Matrix.identity(size)]
            power = Matrix.identity(size)
            fact = 1
            t = 1
            while True:
                power = power * nil
                if not power:
                    break
                fact *= t
                coeffs.append(power * Fraction(1, fact))
                t += 1
            if len(coeffs) - 1 > log_trunc:
                raise ValueError(
                    "log_trunc smaller than the nilpotency index of a sector"
                )
            per_var.append(coeffs)
        terms: Dict[Tuple[MultiIndex, MultiIndex], Matrix] = {}
        for alpha, y in m.terms.items():
            for logpow, c_t in _log_products(per_var):
                coeff = y * (v * c_t * w)
                if not coeff:
                    continue
                key = (alpha, MultiIndex(logpow))
                if key in terms:
                    acc = terms[key] + coeff
                    if acc:
                        terms[key] = acc
                    else:
                        del terms[key]
                else:
                    terms[key] = coeff
        out.append(LogLaurentSeries(tag, terms))
    out.sort(key=lambda s: s.gamma)
    return out


def _log_products(per_var: List[List[Matrix]]):
    """Yield (logpow tuple, product matrix) over the finite log expansion."""
    if not per_var:
        yield tuple(), None
        return
    idx = [0] * len(per_var)
    while True:
        prod = per_var[0][idx[0]]
        for i in range(1, len(per_var)):
            prod = prod * per_var[i][idx[i]]
        yield tuple(idx), prod
        k = 0
        while k < len(idx):
            idx[k] += 1
            if idx[k] < len(per_var[k]):
                break
            idx[k] = 0
            k += 1
        else:
            return
