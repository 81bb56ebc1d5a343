"""Exact rational arithmetic primitives: multi-indices, Pochhammer symbols,
p-adic valuations and least-common-denominator utilities.

The scalar type everywhere is :class:`fractions.Fraction` (arbitrary precision,
always reduced, positive denominator), re-exported as ``Rational``.  The
Pochhammer symbol follows the convention used throughout this library:
``poch(g, 0) == g`` and ``poch(g, n) == g*(g+1)*...*(g+n-1)`` for ``n >= 1``,
so ``poch(g, 0) == poch(g, 1)``.  The standard empty-product convention is
available internally as :func:`rising` but is not part of the public surface.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

INFINITY = math.inf  # valuation of zero


def as_rational(x) -> Fraction:
    """Coerce ints, strings like "a/b" and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Ordering(Enum):
    """Outcome of the componentwise partial order on multi-indices."""

    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


class MultiIndex(tuple):
    """Fixed-length integer vector; the exponent bookkeeping type.

    Supports the componentwise partial order (``a <= b`` iff every entry is
    ``<=``; strict ``<`` additionally requires strictness in some slot),
    addition/subtraction, ``|a| = sum(a)`` and ``a! = prod(a_i!)``.
    """

    def __new__(cls, entries: Iterable[int]):
        t = super().__new__(cls, (int(e) for e in entries))
        if len(t) < 1:
            raise ValueError("multi-index must have length >= 1")
        return t

    @classmethod
    def zero(cls, d: int) -> "MultiIndex":
        return cls([0] * d)

    @classmethod
    def unit(cls, d: int, i: int) -> "MultiIndex":
        e = [0] * d
        e[i] = 1
        return cls(e)

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def order(self) -> int:
        """|a|, the sum of the entries."""
        return sum(self)

    def factorial(self) -> int:
        if any(e < 0 for e in self):
            raise ValueError("factorial of a negative entry")
        out = 1
        for e in self:
            out *= math.factorial(e)
        return out

    def __add__(self, other) -> "MultiIndex":
        self._check_len(other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other) -> "MultiIndex":
        self._check_len(other)
        return MultiIndex(a - b for a, b in zip(self, other))

    def __neg__(self) -> "MultiIndex":
        return MultiIndex(-a for a in self)

    def is_nonnegative(self) -> bool:
        return all(e >= 0 for e in self)

    def is_nonpositive(self) -> bool:
        return all(e <= 0 for e in self)

    def _check_len(self, other: Sequence[int]) -> None:
        if len(self) != len(other):
            raise ValueError(
                f"dimension mismatch: {len(self)} vs {len(other)}"
            )

    def compare(self, other: "MultiIndex") -> Ordering:
        self._check_len(other)
        le = all(a <= b for a, b in zip(self, other))
        ge = all(a >= b for a, b in zip(self, other))
        if le and ge:
            return Ordering.EQUAL
        if le:
            return Ordering.LESS
        if ge:
            return Ordering.GREATER
        return Ordering.INCOMPARABLE

    def leq(self, other: "MultiIndex") -> bool:
        self._check_len(other)
        return all(a <= b for a, b in zip(self, other))


def multiindex_order(a: MultiIndex, b: MultiIndex) -> Ordering:
    """Componentwise partial order; LESS means <= everywhere and < somewhere."""
    return MultiIndex(a).compare(MultiIndex(b))


def pochhammer(gamma, n: int) -> Fraction:
    """(g)_n with (g)_0 = g and (g)_n = g(g+1)...(g+n-1) for n >= 1.

    Note the nonstandard base case, under which (g)_0 == (g)_1.
    """
    g = as_rational(gamma)
    if n < 0:
        raise ValueError("pochhammer index must be nonnegative")
    if n == 0:
        return g
    out = Fraction(1)
    for m in range(n):
        out *= g + m
    return out


def rising(gamma, n: int) -> Fraction:
    """Standard rising factorial: empty product 1 at n = 0. Internal helper."""
    g = as_rational(gamma)
    if n < 0:
        raise ValueError("rising-factorial index must be nonnegative")
    out = Fraction(1)
    for m in range(n):
        out *= g + m
    return out


def multi_pochhammer(gamma: Sequence, alpha: Sequence[int]) -> Fraction:
    """(g)_a = prod_i (g_i)_{a_i}; at a = 0 this is prod_i g_i."""
    if len(gamma) != len(alpha):
        raise ValueError("gamma and alpha must have equal length")
    if any(a < 0 for a in alpha):
        raise ValueError("alpha entries must be nonnegative")
    out = Fraction(1)
    for g, a in zip(gamma, alpha):
        out *= pochhammer(g, a)
    return out


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PadicContext:
    """A prime p with the normalization |p|_v = p^{-1}.

    The benchmark pi_v = p^{-1/(p-1)} is never realized as a real number;
    all comparisons happen in valuation space where it is exactly 1/(p-1).
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def pi_v_valuation(self) -> Fraction:
        return Fraction(1, self.p - 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, PadicContext) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PadicContext", self.p))

    def __repr__(self) -> str:
        return f"PadicContext(p={self.p})"

    def valuation_int(self, n: int) -> int:
        if n == 0:
            raise ValueError("valuation of zero integer")
        n = abs(n)
        v = 0
        while n % self.p == 0:
            v += 1
            n //= self.p
        return v


def val_p(x, ctx: PadicContext) -> Union[int, float]:
    """Exact p-adic valuation; +inf for zero. |x|_v = p^(-val_p(x))."""
    q = as_rational(x)
    if q == 0:
        return INFINITY
    return ctx.valuation_int(q.numerator) - ctx.valuation_int(q.denominator)


def lcd(xs: Iterable) -> int:
    """Least common multiple of the reduced denominators; errors on []."""
    xs = [as_rational(x) for x in xs]
    if not xs:
        raise ValueError("lcd of an empty list")
    return math.lcm(*(x.denominator for x in xs))
