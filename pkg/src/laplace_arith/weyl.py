"""Weyl algebra Q[x_1..x_d, D_1..D_d] with normal ordering, the generalized
Fourier-Laplace automorphism, and the operator action on log-Laurent series.

Operators are stored normal-ordered (all x's left of all D's).  Products and
the automorphism reduce to the per-variable rewriting

    D^b x^c = sum_t  t! binom(b, t) binom(c, t) x^(c-t) D^(b-t),

the closed form of iterating D x = x D + 1.  The automorphism substitutes

    x_i |-> -(1/tau_i) D_i,     D_i |-> tau_i x_i,

then renormal-orders; tau = (1, ..., 1) is the classical transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import MultiIndex, as_rational
from .series import LogLaurentSeries, derive, monomial_mul

TermKey = Tuple[MultiIndex, MultiIndex]  # (x exponents, D exponents)


class TruncationOverflow(Exception):
    """An operator action produced terms outside the caller's window."""

    def __init__(self, dropped: List[tuple]):
        self.dropped = dropped
        super().__init__(
            f"{len(dropped)} result terms escape the truncation window: "
            f"{sorted(dropped)[:5]}"
        )


class WeylOperator:
    """Finite Q-linear combination of normal-ordered monomials x^a D^b."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Dict[Tuple[Sequence[int], Sequence[int]], object] = None):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.d = d
        clean: Dict[TermKey, Fraction] = {}
        for (xe, de), c in (terms or {}).items():
            xm, dm = MultiIndex(xe), MultiIndex(de)
            if xm.dim != d or dm.dim != d:
                raise ValueError("exponent dimension mismatch")
            if not (xm.is_nonnegative() and dm.is_nonnegative()):
                raise ValueError("exponents must be nonnegative")
            v = as_rational(c)
            if v:
                clean[(xm, dm)] = clean.get((xm, dm), Fraction(0)) + v
        self.terms = {k: v for k, v in clean.items() if v}

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "WeylOperator":
        return cls(d, {})

    @classmethod
    def one(cls, d: int) -> "WeylOperator":
        z = MultiIndex.zero(d)
        return cls(d, {(z, z): 1})

    @classmethod
    def x(cls, d: int, i: int, power: int = 1) -> "WeylOperator":
        e = [0] * d
        e[i] = power
        return cls(d, {(tuple(e), tuple([0] * d)): 1})

    @classmethod
    def dx(cls, d: int, i: int, power: int = 1) -> "WeylOperator":
        e = [0] * d
        e[i] = power
        return cls(d, {(tuple([0] * d), tuple(e)): 1})

    @classmethod
    def constant(cls, d: int, c) -> "WeylOperator":
        z = MultiIndex.zero(d)
        return cls(d, {(z, z): as_rational(c)})

    # -- vector space --------------------------------------------------

    def __add__(self, other: "WeylOperator") -> "WeylOperator":
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return WeylOperator(self.d, terms)

    def __sub__(self, other: "WeylOperator") -> "WeylOperator":
        return self + other.scale(-1)

    def __neg__(self) -> "WeylOperator":
        return self.scale(-1)

    def scale(self, c) -> "WeylOperator":
        c = as_rational(c)
        return WeylOperator(self.d, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "WeylOperator") -> "WeylOperator":
        return weyl_mul(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeylOperator)
            and self.d == other.d
            and self.terms == other.terms
        )

    __hash__ = None

    def _check(self, other: "WeylOperator") -> None:
        if self.d != other.d:
            raise ValueError("operator dimensions differ")

    def is_zero(self) -> bool:
        return not self.terms

    def total_order(self) -> int:
        """max |a| + |b| over stored monomials; bound for window margins."""
        if not self.terms:
            return 0
        return max(a.order + b.order for a, b in self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "WeylOperator(0)"
        bits = []
        for (a, b), c in sorted(self.terms.items()):
            factors = [str(c)]
            for i, e in enumerate(a):
                if e:
                    factors.append(f"x{i+1}" + (f"^{e}" if e > 1 else ""))
            for i, e in enumerate(b):
                if e:
                    factors.append(f"Dx{i+1}" + (f"^{e}" if e > 1 else ""))
            bits.append("*".join(factors))
        return "WeylOperator(" + " + ".join(bits) + ")"


def _reorder_d_x(b: MultiIndex, c: MultiIndex) -> Dict[TermKey, Fraction]:
    """Normal-order D^b x^c; returns {(x exp, D exp): coefficient}."""
    d = b.dim
    out: Dict[TermKey, Fraction] = {}

    def rec(i: int, xacc: List[int], dacc: List[int], coeff: Fraction):
        if i == d:
            key = (MultiIndex(xacc), MultiIndex(dacc))
            out[key] = out.get(key, Fraction(0)) + coeff
            return
        bi, ci = b[i], c[i]
        for t in range(min(bi, ci) + 1):
            f = coeff * math.factorial(t) * math.comb(bi, t) * math.comb(ci, t)
            rec(i + 1, xacc + [ci - t], dacc + [bi - t], f)

    rec(0, [], [], Fraction(1))
    return out


def weyl_mul(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    """Associative product with normal-ordering rewriting; exact."""
    a._check(b)
    terms: Dict[TermKey, Fraction] = {}
    for (xa, da), ca in a.terms.items():
        for (xb, db), cb in b.terms.items():
            # x^xa D^da x^xb D^db: reorder the middle D^da x^xb
            for (xm, dm), cm in _reorder_d_x(da, xb).items():
                key = (xa + xm, dm + db)
                val = terms.get(key, Fraction(0)) + ca * cb * cm
                terms[key] = val
    return WeylOperator(a.d, terms)


def fourier_laplace(op: WeylOperator, tau: Optional[Sequence] = None) -> WeylOperator:
    """Apply the generator substitution x -> -(1/tau) D, D -> tau x and
    renormal-order.  A ring automorphism for every nonzero tau."""
    taus = _check_tau(op.d, tau)
    terms: Dict[TermKey, Fraction] = {}
    for (a, b), c in op.terms.items():
        scalar = c
        for i in range(op.d):
            scalar *= (-1) ** a[i] * taus[i] ** (b[i] - a[i])
        # image monomial is D^a x^b (up to the scalar); normal-order it
        for (xm, dm), cm in _reorder_d_x(a, b).items():
            key = (xm, dm)
            terms[key] = terms.get(key, Fraction(0)) + scalar * cm
    return WeylOperator(op.d, terms)


def _check_tau(d: int, tau: Optional[Sequence]) -> Tuple[Fraction, ...]:
    if tau is None:
        return tuple(Fraction(1) for _ in range(d))
    if isinstance(tau, (int, str, Fraction)):
        tau = [tau] * d
    taus = tuple(as_rational(t) for t in tau)
    if len(taus) != d:
        raise ValueError("tau length must equal the dimension")
    if any(t == 0 for t in taus):
        raise ValueError("tau entries must be nonzero")
    return taus


def apply_operator(
    op: WeylOperator,
    s: LogLaurentSeries,
    window: Optional[int] = None,
) -> LogLaurentSeries:
    """Exact action of op on a finite series via derive and monomial_mul.

    When ``window`` is given, any result term with some |alpha_i| > window
    raises :class:`TruncationOverflow` (listing the escapees) rather than
    being dropped silently.
    """
    if op.d != s.d:
        raise ValueError("operator/series dimension mismatch")
    out = LogLaurentSeries(s.gamma, {})
    for (a, b), c in op.terms.items():
        part = s
        for i in range(s.d):
            for _ in range(b[i]):
                part = derive(part, i)
        part = monomial_mul(part, a)
        out = out + part.scale(c)
    if window is not None:
        dropped = [
            (tuple(alpha), tuple(j))
            for (alpha, j) in out.terms
            if any(abs(e) > window for e in alpha)
        ]
        if dropped:
            raise TruncationOverflow(dropped)
    return out


@dataclass
class DualityReport:
    """Outcome of a transform-duality verification."""

    passed: bool
    source_window: int
    image_window: int
    source_residual_support: List[tuple] = field(default_factory=list)
    image_residual_support: List[tuple] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "source_window": self.source_window,
            "image_window": self.image_window,
            "source_residual_support": [list(t) for t in self.source_residual_support],
            "image_residual_support": [list(t) for t in self.image_residual_support],
        }


def duality_check(
    op: WeylOperator,
    s: LogLaurentSeries,
    tau: Optional[Sequence] = None,
    window: Optional[int] = None,
) -> DualityReport:
    """Check that op annihilates s (within the window) and that the
    Fourier-Laplace image of op annihilates the standard transform of s
    within the shrunken window.

    The standard transform carries no tau parameter, so tau other than
    all-ones is rejected here; use :func:`duality_check_formal` for the
    tau-twisted statement on matrix series.
    """
    from .standard import laplace_series

    taus = _check_tau(op.d, tau)
    if any(t != 1 for t in taus):
        raise ValueError("the standard transform is dual to tau = 1 only")
    if window is None:
        window = s.support_radius()
    margin = op.total_order()
    inner = window - margin
    res_in = apply_operator(op, s).restrict(inner)
    image = laplace_series(s)
    fop = fourier_laplace(op, taus)
    res_out = apply_operator(fop, image).restrict(inner)
    return DualityReport(
        passed=res_in.is_zero() and res_out.is_zero(),
        source_window=inner,
        image_window=inner,
        source_residual_support=[tuple(a) for a, _ in res_in.terms],
        image_residual_support=[tuple(a) for a, _ in res_out.terms],
    )


def duality_check_formal(
    op: WeylOperator,
    m,
    tau: Optional[Sequence] = None,
    window: Optional[int] = None,
    log_trunc: Optional[int] = None,
) -> DualityReport:
    """Formal-transform duality: if the entries of Y x^Lambda solve op, the
    entries of the tau-transform solve the tau-twisted Fourier image of op.

    Both sides are expanded into log-Laurent sectors and checked within the
    shrunken window.
    """
    from .formal import formal_transform
    from .series import expand_xLambda

    taus = _check_tau(op.d, tau)
    if log_trunc is None:
        log_trunc = m.nu
    if window is None:
        window = max(
            (max(abs(e) for e in a) for a in m.terms), default=0
        )
    margin = op.total_order()
    inner = window - margin
    src_res: List[tuple] = []
    for sector in expand_xLambda(m, log_trunc):
        r = apply_operator(op, sector).restrict(inner)
        src_res.extend(tuple(a) for a, _ in r.terms)
    image = formal_transform(m, taus)
    fop = fourier_laplace(op, taus)
    img_res: List[tuple] = []
    for sector in expand_xLambda(image, log_trunc):
        r = apply_operator(fop, sector).restrict(inner)
        img_res.extend(tuple(a) for a, _ in r.terms)
    return DualityReport(
        passed=not src_res and not img_res,
        source_window=inner,
        image_window=inner,
        source_residual_support=src_res,
        image_residual_support=img_res,
    )


# -- infix operator parsing -------------------------------------------------


def parse_operator(text: str, d: Optional[int] = None) -> WeylOperator:
    """Parse "x1*Dx1^2 + (3/2)*Dx1 - 1" into a WeylOperator.

    Tokens: ``xI``, ``DxI``, rational literals ``a`` / ``a/b``, ``+ - * ^``
    and parentheses.  The dimension defaults to the largest variable index
    mentioned (at least 1).
    """
    tokens = _lex(text)
    if d is None:
        d = max(
            (tok[1] for tok in tokens if tok[0] in ("x", "Dx")), default=1
        )
    parser = _Parser(tokens, d)
    op = parser.expression()
    parser.expect_end()
    return op


def _lex(text: str) -> List[tuple]:
    out: List[tuple] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("Dx", i):
            j = i + 2
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 2:
                raise ValueError(f"missing variable index at {i}")
            out.append(("Dx", int(text[i + 2 : j])))
            i = j
        elif ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ValueError(f"missing variable index at {i}")
            out.append(("x", int(text[i + 1 : j])))
            i = j
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "/":
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise ValueError(f"missing denominator at {j}")
                out.append(("num", Fraction(int(text[i:j]), int(text[j + 1 : k]))))
                i = k
            else:
                out.append(("num", Fraction(int(text[i:j]))))
                i = j
        elif ch in "+-*^()":
            out.append((ch, None))
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} at position {i}")
    return out


class _Parser:
    def __init__(self, tokens: List[tuple], d: int):
        self.tokens = tokens
        self.pos = 0
        self.d = d

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_end(self):
        if self.pos != len(self.tokens):
            raise ValueError(f"trailing input at token {self.pos}")

    def expression(self) -> WeylOperator:
        kind, _ = self.peek()
        negate = False
        if kind in ("+", "-"):
            self.next()
            negate = kind == "-"
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, _ = self.peek()
            if kind == "+":
                self.next()
                acc = acc + self.term()
            elif kind == "-":
                self.next()
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> WeylOperator:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.next()
            acc = acc * self.factor()
        return acc

    def factor(self) -> WeylOperator:
        base = self.atom()
        if self.peek()[0] == "^":
            self.next()
            kind, val = self.next()
            if kind != "num" or val.denominator != 1 or val < 0:
                raise ValueError("exponent must be a nonnegative integer")
            out = WeylOperator.one(self.d)
            for _ in range(int(val)):
                out = out * base
            return out
        return base

    def atom(self) -> WeylOperator:
        kind, val = self.next()
        if kind == "num":
            return WeylOperator.constant(self.d, val)
        if kind == "x":
            if not 1 <= val <= self.d:
                raise ValueError(f"variable x{val} out of range")
            return WeylOperator.x(self.d, val - 1)
        if kind == "Dx":
            if not 1 <= val <= self.d:
                raise ValueError(f"variable Dx{val} out of range")
            return WeylOperator.dx(self.d, val - 1)
        if kind == "(":
            inner = self.expression()
            if self.next()[0] != ")":
                raise ValueError("missing closing parenthesis")
            return inner
        raise ValueError(f"unexpected token {kind!r}")
