"""Commutative coefficient ring Q[G_1, ..., G_K] for transform coefficients.

The generator ``G_j`` at base exponent ``g`` stands for the normalized
derivative value ``D^j Gamma(g+1) / Gamma(g+1)``; generators are treated as
algebraically independent and are never evaluated numerically.  Tensor
products across variables are realized by tagging each generator with its
variable index, so a single class covers the one-variable ring and the
d-variable one.

Differentiating ``Gamma(z+1) = z Gamma(z)`` m times gives
``D^m Gamma(z+1) = z D^m Gamma(z) + m D^(m-1) Gamma(z)`` and hence, after
normalization, the exact basepoint shift

    G_m(g+1) = G_m(g) + (m / (g+1)) G_{m-1}(g),

which drives :func:`gamma_shift` (an isomorphism between the rings at two
basepoints, preserving the represented value) and the closed forms

    rho(k, j) = (-1)^j binom(k, j) G_{k-j},

the coefficient of (log x)^j in the transform of x^g (log x)^k once the
global Gamma(g+1) x^(-g-1) factor is removed.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Sequence, Tuple, Union

from .core import as_rational

DEFAULT_MAX_ORDER = 8

# monomial: sorted tuple of ((var, order), exponent) with order >= 1, exp >= 1
Monomial = Tuple[Tuple[Tuple[int, int], int], ...]
ONE_MONOMIAL: Monomial = tuple()


def _check_base(base: Sequence) -> Tuple[Fraction, ...]:
    vals = tuple(as_rational(g) for g in base)
    for g in vals:
        if g.denominator == 1:
            raise ValueError(f"base exponent {g} is an integer")
    return vals


class GammaPoly:
    """Element of the ring Q[G_{var,order}] at a fixed tuple of basepoints."""

    __slots__ = ("base", "max_order", "terms")

    def __init__(
        self,
        base: Union[Sequence, Fraction, int, str],
        terms: Dict[Monomial, Fraction] = None,
        max_order: int = DEFAULT_MAX_ORDER,
    ):
        if isinstance(base, (Fraction, int, str)):
            base = (base,)
        self.base = _check_base(base)
        self.max_order = max_order
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            c = as_rational(coeff)
            if not c:
                continue
            for (var, order), exp in mono:
                if not (0 <= var < len(self.base)):
                    raise ValueError(f"generator variable {var} out of range")
                if not (1 <= order <= max_order):
                    raise ValueError(
                        f"generator order {order} outside 1..{max_order}"
                    )
                if exp < 1:
                    raise ValueError("monomial exponents must be >= 1")
            clean[tuple(sorted(mono))] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def _raw(cls, base, terms, max_order) -> "GammaPoly":
        """Internal: skip validation for terms already in canonical form."""
        out = object.__new__(cls)
        out.base = base
        out.max_order = max_order
        out.terms = terms
        return out

    @classmethod
    def zero(cls, base, max_order: int = DEFAULT_MAX_ORDER) -> "GammaPoly":
        return cls(base, {}, max_order)

    @classmethod
    def one(cls, base, max_order: int = DEFAULT_MAX_ORDER) -> "GammaPoly":
        return cls(base, {ONE_MONOMIAL: Fraction(1)}, max_order)

    @classmethod
    def constant(cls, base, c, max_order: int = DEFAULT_MAX_ORDER) -> "GammaPoly":
        return cls(base, {ONE_MONOMIAL: as_rational(c)}, max_order)

    @classmethod
    def generator(
        cls, base, order: int, var: int = 0, max_order: int = DEFAULT_MAX_ORDER
    ) -> "GammaPoly":
        """G_{var,order}; order 0 is the ring unit."""
        if order == 0:
            return cls.one(base, max_order)
        return cls(base, {(((var, order), 1),): Fraction(1)}, max_order)

    # -- ring structure ----------------------------------------------------

    def _compat(self, other: "GammaPoly") -> int:
        if self.base != other.base:
            raise ValueError("GammaPoly basepoints differ")
        return max(self.max_order, other.max_order)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, GammaPoly):
            return self.base == other.base and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == GammaPoly.constant(self.base, other, self.max_order)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.base, tuple(sorted(self.terms.items()))))

    def __add__(self, other) -> "GammaPoly":
        other = self._coerce(other)
        k = self._compat(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            v = terms.get(mono)
            v = c if v is None else v + c
            if v:
                terms[mono] = v
            elif mono in terms:
                del terms[mono]
        return GammaPoly._raw(self.base, terms, k)

    def __sub__(self, other) -> "GammaPoly":
        return self + (-self._coerce(other))

    def __neg__(self) -> "GammaPoly":
        return GammaPoly._raw(
            self.base, {m: -c for m, c in self.terms.items()}, self.max_order
        )

    def __mul__(self, other) -> "GammaPoly":
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            if not c:
                return GammaPoly._raw(self.base, {}, self.max_order)
            return GammaPoly._raw(
                self.base,
                {m: c * v for m, v in self.terms.items()},
                self.max_order,
            )
        other = self._coerce(other)
        k = self._compat(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _merge_monomials(m1, m2)
                v = out.get(mono)
                v = c1 * c2 if v is None else v + c1 * c2
                out[mono] = v
        return GammaPoly._raw(
            self.base, {m: c for m, c in out.items() if c}, k
        )

    __rmul__ = __mul__

    def _coerce(self, other) -> "GammaPoly":
        if isinstance(other, GammaPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return GammaPoly.constant(self.base, other, self.max_order)
        raise TypeError(f"cannot combine GammaPoly with {type(other)!r}")

    # -- queries -----------------------------------------------------------

    def is_constant(self) -> bool:
        return all(m == ONE_MONOMIAL for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get(ONE_MONOMIAL, Fraction(0))

    def coordinates(self) -> Dict[Monomial, Fraction]:
        """Coefficients in the monomial basis (copy)."""
        return dict(self.terms)

    def embed(self, var: int, base: Sequence) -> "GammaPoly":
        """Re-tag a one-variable element as living on slot ``var`` of the
        d-variable ring at basepoints ``base``."""
        if len(self.base) != 1:
            raise ValueError("embed expects a one-variable element")
        newbase = _check_base(base)
        if newbase[var] != self.base[0]:
            raise ValueError("basepoint mismatch at the target slot")
        terms = {
            tuple(sorted(((var, order), e) for (_, order), e in mono)): c
            for mono, c in self.terms.items()
        }
        return GammaPoly._raw(newbase, terms, self.max_order)

    def __repr__(self) -> str:
        if not self.terms:
            return "GammaPoly(0)"
        bits = []
        for mono, c in sorted(self.terms.items()):
            gens = "*".join(
                f"G[{var},{order}]" + (f"^{e}" if e > 1 else "")
                for (var, order), e in mono
            )
            bits.append(f"{c}" + (f"*{gens}" if gens else ""))
        return "GammaPoly(" + " + ".join(bits) + f" @ {self.base})"


def _merge_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    acc: Dict[Tuple[int, int], int] = {}
    for key, e in m1:
        acc[key] = acc.get(key, 0) + e
    for key, e in m2:
        acc[key] = acc.get(key, 0) + e
    return tuple(sorted(acc.items()))


def shifted_generator(
    base,
    order: int,
    offset: int,
    var: int = 0,
    max_order: int = DEFAULT_MAX_ORDER,
) -> GammaPoly:
    """G_order evaluated at basepoint ``base[var] + offset``, expanded in the
    generators at ``base``.  Exact for any integer offset since no basepoint
    along the path is an integer."""
    if isinstance(base, (Fraction, int, str)):
        base = (base,)
    base = _check_base(base)
    if order > max_order:
        raise ValueError("generator order exceeds max_order")
    g = base[var]
    # table[m] = expansion of G_m(g + t) at the current step t
    table = [
        GammaPoly.generator(base, m, var, max_order) for m in range(order + 1)
    ]
    if offset >= 0:
        for t in range(offset):
            step = [table[0]]
            for m in range(1, order + 1):
                step.append(
                    table[m] + Fraction(m, 1) / (g + t + 1) * table[m - 1]
                )
            table = step
    else:
        for s in range(-offset):
            step = [table[0]]
            for m in range(1, order + 1):
                step.append(table[m] - Fraction(m, 1) / (g - s) * step[m - 1])
            table = step
    return table[order]


def gamma_shift(p: GammaPoly, steps: int, var: int = 0) -> GammaPoly:
    """Move the basepoint of slot ``var`` by ``steps``, preserving the value.

    The result lives at the shifted basepoint; each generator of ``p`` is
    rewritten there via the functional-equation expansion, so shifts compose
    additively and ``gamma_shift(gamma_shift(p, n), -n) == p``.
    """
    newbase = list(p.base)
    newbase[var] = newbase[var] + steps
    newbase = _check_base(newbase)
    out = GammaPoly.zero(newbase, p.max_order)
    cache: Dict[int, GammaPoly] = {}
    for mono, coeff in p.terms.items():
        term = GammaPoly.constant(newbase, coeff, p.max_order)
        for (v, order), exp in mono:
            if v == var:
                if order not in cache:
                    cache[order] = shifted_generator(
                        newbase, order, -steps, var, p.max_order
                    )
                factor = cache[order]
            else:
                factor = GammaPoly.generator(newbase, order, v, p.max_order)
            for _ in range(exp):
                term = term * factor
        out = out + term
    return out


def rho_closed_form(
    k: int,
    j: int,
    base,
    var: int = 0,
    max_order: int = None,
) -> GammaPoly:
    """rho(k, j) = (-1)^j binom(k, j) G_{k-j} at the given basepoint.

    This is the coefficient of (log x)^j in the transform of x^g (log x)^k
    divided by Gamma(g+1) x^(-g-1); in particular rho(k, k) = (-1)^k.
    """
    if j < 0 or j > k:
        raise ValueError("need 0 <= j <= k")
    if max_order is None:
        max_order = max(k, 1, DEFAULT_MAX_ORDER)
    sign = -1 if j % 2 else 1
    coeff = Fraction(sign * math.comb(k, j))
    gen = GammaPoly.generator(base, k - j, var, max_order)
    return coeff * gen


def rho_row(k: int, base, var: int = 0, max_order: int = None) -> Tuple[GammaPoly, ...]:
    """The full closed-form row (rho(k, 0), ..., rho(k, k))."""
    return tuple(rho_closed_form(k, j, base, var, max_order) for j in range(k + 1))
