"""Standard Laplace transform of logarithmic series.

One variable: the transform of x^g (log x)^k is

    Gamma(g+1) x^(-g-1) sum_{j<=k} rho(k, j; g) (log x)^j,

with the closed forms rho(k, j; g) = (-1)^j binom(k, j) G_{k-j}(g) living in
the Gamma-derivative ring.  Everything downstream stores outputs with the
global Gamma(g) = prod Gamma(g_i) factor removed: the scalar part of a
transformed term is a pure Pochhammer expression and the log-polynomial part
has GammaPoly coefficients.

Sign convention.  Differentiating the closed forms under the commutation
rule D(L(h)) = L(-x h) forces the basepoint recurrence

    rho(k, j-1; g+1) = rho(k, j-1; g) - (j/(g+1)) rho(k, j; g),

which is the negative of the recurrence as usually displayed alongside the
closed forms; the companion change-of-basis coefficients r then satisfy
r_{g +- n, j-1}^{(k, j-1)} = 1 instead of (-1)^n, with the interior signs
adjusted to match (see RTable).  The choice here (epsilon = +1 in the
parametrization rho(...; g+1) = eps*(rho(j-1) - (j/(g+1)) rho(j))) is pinned
by the oracle tests against gamma_shift of the closed forms and by the
commutation suite; the alternative global sign fails both.

Multi variables: the transform acts termwise, multiplying the per-variable
pieces; no Cauchy product is involved anywhere.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import MultiIndex, as_rational, pochhammer, rising
from .gammaring import DEFAULT_MAX_ORDER, GammaPoly, gamma_shift, rho_row
from .series import LogLaurentSeries


def _check_noninteger(g: Fraction) -> Fraction:
    g = as_rational(g)
    if g.denominator == 1:
        raise ValueError(f"exponent {g} is an integer; transform undefined")
    return g


def rho_recurrence_step(
    row: Sequence[GammaPoly], gamma_current: Fraction
) -> Tuple[GammaPoly, ...]:
    """One upward basepoint step of a rho-row: the row at g+1 expressed in
    the same generators as the input row at g = gamma_current.

    new[j] = old[j] - ((j+1)/(g+1)) old[j+1]; the top entry is unchanged.
    """
    g = _check_noninteger(gamma_current)
    k = len(row) - 1
    out = []
    for j in range(k + 1):
        v = row[j]
        if j < k:
            v = v - Fraction(j + 1, 1) / (g + 1) * row[j + 1]
        out.append(v)
    return tuple(out)


def _rho_step_down(
    row: Sequence[GammaPoly], gamma_current: Fraction
) -> Tuple[GammaPoly, ...]:
    """Inverse step: the row at g-1 from the row at g = gamma_current.

    Solving the upward relation gives down[k] = old[k] and
    down[j] = old[j] + ((j+1)/g) down[j+1].
    """
    g = _check_noninteger(gamma_current)
    k = len(row) - 1
    out: List[GammaPoly] = [None] * (k + 1)
    out[k] = row[k]
    for j in range(k - 1, -1, -1):
        out[j] = row[j] + Fraction(j + 1, 1) / g * out[j + 1]
    return tuple(out)


class RhoTable:
    """Rows rho(k, .; g+n) for signed shifts n, expressed at base g.

    Rows are built by the recurrence; row(0) is the closed-form row.  The
    closed form at any shift is recovered independently through gamma_shift,
    which the test suite uses as the oracle for the recurrence signs.
    """

    def __init__(self, k: int, gamma, max_order: Optional[int] = None):
        self.k = k
        self.gamma = _check_noninteger(gamma)
        self.max_order = max_order or max(k, DEFAULT_MAX_ORDER)
        base_row = rho_row(k, self.gamma, max_order=self.max_order)
        self._rows: Dict[int, Tuple[GammaPoly, ...]] = {0: base_row}
        self._hi = 0
        self._lo = 0
        self._lock = threading.Lock()

    def row(self, n: int) -> Tuple[GammaPoly, ...]:
        if self._lo <= n <= self._hi:
            return self._rows[n]
        with self._lock:
            while self._hi < n:
                cur = self._rows[self._hi]
                self._rows[self._hi + 1] = rho_recurrence_step(
                    cur, self.gamma + self._hi
                )
                self._hi += 1
            while self._lo > n:
                cur = self._rows[self._lo]
                self._rows[self._lo - 1] = _rho_step_down(
                    cur, self.gamma + self._lo
                )
                self._lo -= 1
        return self._rows[n]

    def value(self, n: int, j: int) -> GammaPoly:
        return self.row(n)[j]

    def closed_form_row(self, n: int) -> Tuple[GammaPoly, ...]:
        """Oracle row: closed forms at basepoint g+n rebased down to g."""
        shifted = rho_row(k=self.k, base=self.gamma + n, max_order=self.max_order)
        return tuple(gamma_shift(p, -n) for p in shifted)


class RTable:
    """Change-of-basis coefficients r_{g +- n, j}^{(k, l)} in Q.

    rho(k, j; g +- n) = sum_{l=j}^{k} rho(k, l; g) r[+-n, j, l]; entries are
    triangular (zero for l < j), the diagonal in l = j is identically 1, the
    l = k column at j = k is 1 for every shift, and the shift-0 rows are the
    Kronecker rows.  Built by the corrected recurrences

        r[+(n+1), j-1, l] = -j * sum_{i=0..n} r[+i, j, l] / (g+i+1)
        r[-(n+1), j-1, l] = +j * sum_{i=1..n+1} r[-i, j, l] / (g-i+1)

    for l >= j, with r[+-n, j-1, j-1] = 1.  Extension in n is incremental and
    memoized; each new shift costs O(k^2) updates of running sums.
    """

    def __init__(self, k: int, gamma):
        self.k = k
        self.gamma = _check_noninteger(gamma)
        # _values[(sign, j, l)][n]: r at signed shift sign*n; shift 0 rows
        # are Kronecker in both branches.
        self._values: Dict[Tuple[int, int, int], List[Fraction]] = {}
        # running sums: plus[(j, l)] = sum_{i=0}^{built} r[+i, j, l]/(g+i+1),
        # minus[(j, l)] = sum_{i=1}^{built} r[-i, j, l]/(g-i+1)
        self._plus_sums: Dict[Tuple[int, int], Fraction] = {}
        self._minus_sums: Dict[Tuple[int, int], Fraction] = {}
        self._built = 0
        self._lock = threading.Lock()
        g = self.gamma
        for j in range(k + 1):
            for l in range(j, k + 1):
                delta = Fraction(1 if l == j else 0)
                self._values[(1, j, l)] = [delta]
                self._values[(-1, j, l)] = [delta]
                self._plus_sums[(j, l)] = delta / (g + 1)
                self._minus_sums[(j, l)] = Fraction(0)

    def ensure(self, n_max: int) -> None:
        with self._lock:
            while self._built < n_max:
                n = self._built + 1
                g = self.gamma
                # plus branch: r[+n, j, l] needs sums over shifts < n only
                for j in range(self.k, -1, -1):
                    for l in range(j, self.k + 1):
                        if l == j:
                            val = Fraction(1)
                        else:
                            val = -(j + 1) * self._plus_sums[(j + 1, l)]
                        self._values[(1, j, l)].append(val)
                for j in range(self.k + 1):
                    for l in range(j, self.k + 1):
                        self._plus_sums[(j, l)] += self._values[(1, j, l)][n] / (
                            g + n + 1
                        )
                # minus branch: r[-n, j-1, .] needs the shift-n entries of
                # row j, so fill and fold into the sums top-down in j
                for j in range(self.k, -1, -1):
                    for l in range(j, self.k + 1):
                        if l == j:
                            val = Fraction(1)
                        else:
                            val = (j + 1) * self._minus_sums[(j + 1, l)]
                        self._values[(-1, j, l)].append(val)
                    for l in range(j, self.k + 1):
                        self._minus_sums[(j, l)] += self._values[(-1, j, l)][
                            n
                        ] / (g - n + 1)
                self._built = n

    def value(self, n: int, j: int, l: int) -> Fraction:
        """r at signed shift n; zero for l < j by triangularity."""
        if not (0 <= j <= self.k and 0 <= l <= self.k):
            raise ValueError("indices out of range")
        if l < j:
            return Fraction(0)
        self.ensure(abs(n))
        sign = 1 if n >= 0 else -1
        return self._values[(sign, j, l)][abs(n)]


def build_r_table(k: int, gamma, n_max: int) -> RTable:
    """Construct and pre-extend an RTable for |n| <= n_max."""
    t = RTable(k, gamma)
    t.ensure(n_max)
    return t


_RHO_CACHE: Dict[Tuple[int, Fraction], RhoTable] = {}
_RHO_CACHE_LOCK = threading.Lock()


def rho_table(k: int, gamma) -> RhoTable:
    """Shared memoized RhoTable per (k, gamma)."""
    key = (k, as_rational(gamma))
    with _RHO_CACHE_LOCK:
        tab = _RHO_CACHE.get(key)
        if tab is None:
            tab = RhoTable(k, gamma)
            _RHO_CACHE[key] = tab
    return tab


def term_prefactor(gamma: Sequence[Fraction], shift: Sequence[int]) -> Fraction:
    """Scalar multiplier of a transformed term, with Gamma(g) removed.

    Per variable: shift n >= 0 contributes (g)_{n+1} (so g itself at n = 0);
    shift -m contributes (-1)^m g / ((-g)(-g+1)...(-g+m-1)), the empty
    product being 1.  Never zero for non-integral g.
    """
    out = Fraction(1)
    for g, n in zip(gamma, shift):
        g = as_rational(g)
        if n >= 0:
            out *= pochhammer(g, n + 1)
        else:
            m = -n
            sign = -1 if m % 2 else 1
            out *= sign * g / rising(-g, m)
    return out


_TERM_CACHE: Dict[tuple, LogLaurentSeries] = {}
_TERM_CACHE_LOCK = threading.Lock()


def laplace_term(
    gamma: Sequence,
    k: Sequence[int],
    shift: Sequence[int],
    max_order: Optional[int] = None,
) -> LogLaurentSeries:
    """Transform of x^(gamma+shift) (log x)^k, with Gamma(gamma) factored out.

    The output exponent base is -gamma-1 and the single support point is
    -shift; coefficients live in the d-variable Gamma ring at base gamma.
    The top log term (logpow == k) has coefficient (-1)^|k| prefactor.
    Results are memoized; callers never mutate series in place, so sharing
    is safe.
    """
    key = (tuple(as_rational(g) for g in gamma), tuple(k), tuple(shift))
    cached = _TERM_CACHE.get(key)
    if cached is not None:
        return cached
    out = _laplace_term_uncached(gamma, k, shift, max_order)
    with _TERM_CACHE_LOCK:
        _TERM_CACHE[key] = out
    return out


def _laplace_term_uncached(
    gamma: Sequence,
    k: Sequence[int],
    shift: Sequence[int],
    max_order: Optional[int] = None,
) -> LogLaurentSeries:
    gams = tuple(_check_noninteger(g) for g in gamma)
    d = len(gams)
    kk = MultiIndex(k)
    sh = MultiIndex(shift)
    if kk.dim != d or sh.dim != d:
        raise ValueError("dimension mismatch")
    if any(e < 0 for e in kk):
        raise ValueError("log powers must be nonnegative")
    if max_order is None:
        max_order = max(max(kk), 1, DEFAULT_MAX_ORDER)
    pref = term_prefactor(gams, sh)
    out_gamma = tuple(-g - 1 for g in gams)
    per_var: List[List[GammaPoly]] = [
        [p.embed(i, gams) for p in rho_table(kk[i], gams[i]).row(sh[i])]
        for i in range(d)
    ]
    # tensor the per-variable rows into the d-variable ring
    terms: Dict[Tuple[MultiIndex, MultiIndex], GammaPoly] = {}
    support = -sh
    for logpow in _box(kk):
        coeff = GammaPoly.constant(gams, pref, max_order)
        for i in range(d):
            coeff = coeff * per_var[i][logpow[i]]
        if coeff:
            terms[(support, MultiIndex(logpow))] = coeff
    return LogLaurentSeries(out_gamma, terms)


def _box(k: MultiIndex):
    """All logpow tuples 0 <= j <= k componentwise."""
    idx = [0] * len(k)
    while True:
        yield tuple(idx)
        i = 0
        while i < len(idx):
            idx[i] += 1
            if idx[i] <= k[i]:
                break
            idx[i] = 0
            i += 1
        else:
            return


def laplace_series(
    s: LogLaurentSeries, max_order: Optional[int] = None
) -> LogLaurentSeries:
    """Termwise standard transform of a finite series f(x) h_{gamma,k}.

    Input coefficients may be rational or already GammaPoly (at the same
    base); the output exponent base is -gamma-1 and the support is negated,
    so orthant-pure inputs map to the opposite orthant.  The finite-support
    action is defined for every integral shift, including the mixed-sign
    supports produced by derivations.
    """
    gams = tuple(_check_noninteger(g) for g in s.gamma)
    if max_order is None:
        max_order = max(s.max_logpow(), 1, DEFAULT_MAX_ORDER)
    out_gamma = tuple(-g - 1 for g in gams)
    out = LogLaurentSeries(out_gamma, {})
    for (alpha, logpow), c in s.terms.items():
        piece = laplace_term(gams, logpow, alpha, max_order)
        if isinstance(c, GammaPoly):
            piece = LogLaurentSeries(
                piece.gamma, {key: c * v for key, v in piece.terms.items()}
            )
        else:
            piece = piece.scale(c)
        out = out + piece
    return out


def injectivity_certificate(s: LogLaurentSeries) -> dict:
    """Witness that the transform of a nonzero series is nonzero.

    Filtering by the log multi-exponent: a term with log power k only
    produces image log powers <= k, and at a maximal k the image coefficient
    at support -alpha is (-1)^|k| prefactor(alpha) times the source
    coefficient, with a never-vanishing Pochhammer prefactor.  The
    certificate lists those diagonal image coefficients.
    """
    gams = tuple(_check_noninteger(g) for g in s.gamma)
    classes = {j for _, j in s.terms}
    maximal = [
        j
        for j in classes
        if not any(j2 != j and j.leq(j2) for j2 in classes)
    ]
    diagonal = []
    nonzero = False
    for kstar in maximal:
        sign = -1 if kstar.order % 2 else 1
        for (alpha, j), c in s.terms.items():
            if j != kstar:
                continue
            pref = term_prefactor(gams, alpha) * sign
            assert pref != 0
            entry = {
                "alpha": list(alpha),
                "logpow": list(j),
                "prefactor": str(pref),
                "source_nonzero": bool(c),
            }
            diagonal.append(entry)
            nonzero = nonzero or bool(c)
    return {
        "maximal_log_classes": [list(j) for j in maximal],
        "diagonal": diagonal,
        "nonzero": nonzero,
    }
