"""Formal Laplace transform on matrix series Y(x) x^Lambda.

The coefficient matrices C(n) = C_{Lambda,tau}(n) are defined by C(0) = I and
the cocycle tau C(n) = (Lambda + n I) C(n-1), valid for every integer n; for
n >= 1 this unfolds to tau^(-n) (Lambda+nI)...(Lambda+I) and for n = -m to
tau^m (Lambda)^(-1) (Lambda-I)^(-1) ... (Lambda-(m-1)I)^(-1).  The factor
list in the negative branch steps downward by I; that reading is the one
under which the inversion identity

    C_Lambda(n) C_{-Lambda}(-n-1) = (-1)^(n+1) tau Lambda^(-1)

and the double-transform identity hold exactly, and both are enforced by the
test suite.  Non-integral rational eigenvalues guarantee every factor is
invertible.

The transform itself sends Y(x) x^Lambda (coefficients Y_alpha) to
Z(x) x^(-Lambda-1) with Z_beta = Y_{-beta} prod_i C_{Lambda_i,tau_i}(-beta_i);
it is free of transcendental constants, and for 1x1 Lambda = (g), tau = 1 it
matches the standard transform exactly after the Gamma factor is removed.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict, List, Tuple

from .core import MultiIndex, as_rational, rising
from .linalg import Matrix
from .series import MatrixSeries, shift_lambda_basis
from .standard import term_prefactor


class CoeffMatrixFn:
    """Cached C_{Lambda,tau}: Z -> GL_nu(Q), built by the cocycle.

    Positive and negative branches extend independently and monotonically;
    extension is serialized by a lock, lookups of cached values are plain
    list reads.
    """

    def __init__(self, Lambda: Matrix, tau):
        self.Lambda = Lambda
        self.tau = as_rational(tau)
        if self.tau == 0:
            raise ValueError("tau must be nonzero")
        self.nu = Lambda.nrows
        self.eigenvalues = Lambda.rational_eigenvalues()
        for ev, _ in self.eigenvalues:
            if ev.denominator == 1:
                raise ValueError(f"integral eigenvalue {ev}")
        self._pos: List[Matrix] = [Matrix.identity(self.nu)]
        self._neg: List[Matrix] = [Matrix.identity(self.nu)]
        self._lock = threading.Lock()

    def at(self, n: int) -> Matrix:
        if n >= 0:
            if n >= len(self._pos):
                with self._lock:
                    ident = Matrix.identity(self.nu)
                    while len(self._pos) <= n:
                        m = len(self._pos)
                        nxt = (
                            (self.Lambda + m * ident)
                            * self._pos[m - 1]
                            * (1 / self.tau)
                        )
                        self._pos.append(nxt)
            return self._pos[n]
        m = -n
        if m >= len(self._neg):
            with self._lock:
                ident = Matrix.identity(self.nu)
                while len(self._neg) <= m:
                    j = len(self._neg)
                    # C(-j) = tau (Lambda - (j-1) I)^(-1) C(-(j-1))
                    factor = (self.Lambda - (j - 1) * ident).inverse()
                    self._neg.append(self.tau * (factor * self._neg[j - 1]))
        return self._neg[m]

    def det_at(self, n: int) -> Fraction:
        """det C(n) = tau^(-n nu) prod_j ((g_j+1)_n)^(nu_j) for n >= 0, and
        the reciprocal pattern for n < 0 (standard rising factorials)."""
        out = self.tau ** (-n * self.nu)
        for ev, mult in self.eigenvalues:
            if n >= 0:
                out *= rising(ev + 1, n) ** mult
            else:
                prod = Fraction(1)
                for t in range(-n):
                    prod *= ev - t
                out *= Fraction(1) / prod**mult
        return out


_C_CACHE: Dict[Tuple[Matrix, Fraction], CoeffMatrixFn] = {}
_C_CACHE_LOCK = threading.Lock()


def coeff_matrix_fn(Lambda: Matrix, tau) -> CoeffMatrixFn:
    key = (Lambda, as_rational(tau))
    with _C_CACHE_LOCK:
        fn = _C_CACHE.get(key)
        if fn is None:
            fn = CoeffMatrixFn(Lambda, tau)
            _C_CACHE[key] = fn
    return fn


def c_matrix(Lambda: Matrix, tau, n: int) -> Matrix:
    """C_{Lambda,tau}(n), exact."""
    return coeff_matrix_fn(Lambda, tau).at(n)


def check_invC(Lambda: Matrix, tau, n: int) -> bool:
    """Exact verdict on C_Lambda(n) C_{-Lambda}(-n-1) = (-1)^(n+1) tau/Lambda."""
    tau = as_rational(tau)
    lhs = c_matrix(Lambda, tau, n) * c_matrix(-Lambda, tau, -n - 1)
    sign = -1 if n % 2 == 0 else 1
    rhs = (sign * tau) * Lambda.inverse()
    return lhs == rhs


def _check_taus(d: int, tau) -> Tuple[Fraction, ...]:
    if isinstance(tau, (int, str, Fraction)):
        tau = [tau] * d
    taus = tuple(as_rational(t) for t in tau)
    if len(taus) != d:
        raise ValueError("tau length must match the number of variables")
    if any(t == 0 for t in taus):
        raise ValueError("tau entries must be nonzero")
    return taus


def formal_transform(m: MatrixSeries, tau) -> MatrixSeries:
    """Laplace transform of Y(x) x^Lambda with respect to (Lambda, tau).

    Output: Lambda' = (-Lambda_i - I) and coefficients
    Z_beta = Y_{-beta} prod_i C_{Lambda_i,tau_i}(-beta_i).
    """
    taus = _check_taus(m.d, tau)
    fns = [coeff_matrix_fn(lam, t) for lam, t in zip(m.Lambda, taus)]
    ident = Matrix.identity(m.nu)
    new_lambda = tuple(-lam - ident for lam in m.Lambda)
    new_terms: Dict[MultiIndex, Matrix] = {}
    for alpha, y in m.terms.items():
        beta = -alpha
        z = y
        for i, fn in enumerate(fns):
            z = z * fn.at(-beta[i])
        new_terms[beta] = z
    return MatrixSeries(new_lambda, new_terms, mu=m.mu, allow_mixed_support=True)


def double_transform_check(m: MatrixSeries, tau) -> bool:
    """Exact verdict on the double-transform identity

        L_{-Lambda}(L_Lambda(Y x^Lambda))
            = (-1)^d prod(tau) Y(-x) prod(Lambda_i^(-1)) x^Lambda.

    The inner image Z(x) x^(-Lambda-1) is rewritten as (Z(x) x^(-1)) x^(-Lambda)
    before the outer transform; the rewrite may shift the support off the
    orthants, which the series type permits for this bookkeeping.
    """
    taus = _check_taus(m.d, tau)
    ones = MultiIndex([1] * m.d)
    first = formal_transform(m, taus)
    rebased = shift_lambda_basis(first, ones)  # Lambda'' = -Lambda
    second = formal_transform(rebased, taus)
    final = shift_lambda_basis(second, ones)  # back to x^Lambda
    scale = Fraction(1)
    for t in taus:
        scale *= t
    if m.d % 2:
        scale = -scale
    inv_prod = Matrix.identity(m.nu)
    for lam in m.Lambda:
        inv_prod = inv_prod * lam.inverse()
    expected_terms = {
        a: (scale * ((y if a.order % 2 == 0 else -y) * inv_prod))
        for a, y in m.terms.items()
    }
    expected = MatrixSeries(
        m.Lambda, expected_terms, mu=m.mu, allow_mixed_support=True
    )
    return final == expected


def cross_check_standard(gamma, n: int, k: int = 0, tau=1) -> bool:
    """Bridge between the transforms for nu = 1, tau = 1, k = 0.

    The standard transform of x^(gamma+n), with Gamma(gamma) factored out,
    carries the scalar prefactor stored by the standard module; the formal
    transform carries C_{(gamma),1}(n).  They differ exactly by the factor
    gamma = Gamma(gamma+1)/Gamma(gamma).
    """
    if k != 0:
        raise ValueError("the bridge is stated for the log-free case k = 0")
    g = as_rational(gamma)
    if g.denominator == 1:
        raise ValueError("gamma must be non-integral")
    tau = as_rational(tau)
    if tau != 1:
        raise ValueError("the standard transform corresponds to tau = 1")
    standard_coeff = term_prefactor((g,), (n,))
    formal_coeff = c_matrix(Matrix([[g]]), tau, n).rows[0][0]
    return standard_coeff == g * formal_coeff


def cross_check_standard_range(gamma, window: int) -> bool:
    return all(cross_check_standard(gamma, n) for n in range(-window, window + 1))


def cocycle_check(Lambda: Matrix, tau, n: int) -> bool:
    """tau C(n) == (Lambda + n I) C(n-1), any integer n."""
    tau = as_rational(tau)
    lhs = tau * c_matrix(Lambda, tau, n)
    rhs = (Lambda + n * Matrix.identity(Lambda.nrows)) * c_matrix(
        Lambda, tau, n - 1
    )
    return lhs == rhs
