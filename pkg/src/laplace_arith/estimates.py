"""Exact p-adic growth certificates for the transform coefficients.

All asymptotic statements are rendered at desk scale in valuation space,
where the benchmark p^(-1/(p-1)) is exactly the slope 1/(p-1):

* Pochhammer valuation profiles: val((g)_{n+1})/n -> 1/(p-1) for g in Z_p\\Z.
* C-matrix norm profiles: the valuation of the max-norm of C(+-n) has slope
  +-(1/(p-1) - val(tau)), bracketed at every n by constructive envelopes
  assembled from the exact Jordan data (the existential constants of the
  underlying inequalities are replaced by computed valuation offsets).
* Matrix norm inequalities for inverses and products, checked exactly.
* Coefficient growth of the formal transform along support rays.
* Least-common-denominator growth of Pochhammer ratios.

Limit assertions use the tolerance c*log(n)/n (default c = 8) with a
rational upper bound on the logarithm; growth-class assertions use exact
rational least-squares fits with a slope-convergence criterion (back-half
slope within 1/10 of the front-half slope).  Logarithms of sizes are taken
in double precision and then carried exactly; the 2^-30 guard absorbs the
float error by orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .core import INFINITY, MultiIndex, PadicContext, as_rational, pochhammer, val_p
from .linalg import Matrix, jordan_form
from .formal import formal_transform
from .series import MatrixSeries

DEFAULT_TOLERANCE_C = 8
_GUARD = Fraction(1, 2**30)


def log_upper(x) -> Fraction:
    """Rational upper bound on ln(x) for rational x >= 1."""
    x = as_rational(x)
    if x < 1:
        raise ValueError("log bounds implemented for x >= 1 only")
    v = math.log(x.numerator) - math.log(x.denominator)
    return Fraction(v) * (1 + _GUARD) + _GUARD


def log_lower(x) -> Fraction:
    """Rational lower bound on ln(x) for rational x >= 1."""
    x = as_rational(x)
    if x < 1:
        raise ValueError("log bounds implemented for x >= 1 only")
    v = math.log(x.numerator) - math.log(x.denominator)
    return max(Fraction(0), Fraction(v) * (1 - _GUARD) - _GUARD)


def log_tolerance(n: int, c: int = DEFAULT_TOLERANCE_C) -> Fraction:
    """c * log(n) / n as an exact rational upper bound."""
    if n < 2:
        raise ValueError("tolerance needs n >= 2")
    return Fraction(c) * log_upper(n) / n


@dataclass
class ValuationSeries:
    """Sampled exact valuations w_n of a sequence, with limit bookkeeping."""

    label: str
    p: int
    samples: List[Tuple[int, Fraction]]
    target: Optional[Fraction] = None
    tolerance_c: int = DEFAULT_TOLERANCE_C

    def slope_at(self, n: int) -> Fraction:
        for m, w in self.samples:
            if m == n:
                return Fraction(w) / n
        raise KeyError(f"no sample at n = {n}")

    def final_slope(self) -> Fraction:
        n, w = self.samples[-1]
        return Fraction(w) / n

    def limit_check(self, target=None, c: Optional[int] = None) -> bool:
        """|w_n/n - target| <= c log(n)/n at the largest sampled n."""
        t = as_rational(target if target is not None else self.target)
        cc = c if c is not None else self.tolerance_c
        n, _ = self.samples[-1]
        return abs(self.final_slope() - t) <= log_tolerance(n, cc)

    def as_report(self) -> dict:
        return {
            "sequence": self.label,
            "p": self.p,
            "samples": [[n, str(w)] for n, w in self.samples],
            "target": None if self.target is None else str(self.target),
            "final_slope": str(self.final_slope()),
            "passed": self.limit_check() if self.target is not None else None,
        }


def matrix_vnorm(m: Matrix, ctx: PadicContext) -> Union[int, float]:
    """Valuation-space norm: min over entries of val_p (so the max of the
    entry absolute values is p^(-result)); +inf for the zero matrix."""
    best: Union[int, float] = INFINITY
    for row in m.rows:
        for e in row:
            if e:
                v = val_p(e, ctx)
                if v < best:
                    best = v
    return best


def pochhammer_valuation_profile(
    gamma, n_max: int, ctx: PadicContext, label: Optional[str] = None
) -> ValuationSeries:
    """w_n = val_p((g)_{n+1}) for n <= n_max; slope target 1/(p-1).

    Requires g in Z_p (val >= 0) and g not an integer.
    """
    g = as_rational(gamma)
    if g.denominator == 1:
        raise ValueError("gamma must be non-integral")
    if val_p(g, ctx) < 0:
        raise ValueError(
            f"gamma = {g} is not a p-adic integer for p = {ctx.p}"
        )
    samples = []
    acc = val_p(g, ctx)  # val of (g)_1 = g
    for n in range(1, n_max + 1):
        acc += val_p(g + n, ctx)
        samples.append((n, Fraction(acc)))
    return ValuationSeries(
        label or f"pochhammer_valuation(gamma={g})",
        ctx.p,
        samples,
        target=ctx.pi_v_valuation,
    )


@dataclass
class MatrixNormContext:
    """Exact Jordan data of Lambda plus the valuation offsets that turn the
    existential envelope constants into computed ones."""

    Lambda: Matrix
    eigenvalues: List[Tuple[Fraction, int]]
    u: Matrix
    u_inv: Matrix
    conj_offset: Fraction  # minval(U) + minval(U^-1) <= 0

    @classmethod
    def build(cls, Lambda: Matrix, ctx: PadicContext) -> "MatrixNormContext":
        eigs = Lambda.rational_eigenvalues()
        for ev, _ in eigs:
            if ev.denominator == 1:
                raise ValueError(f"integral eigenvalue {ev}")
            if val_p(ev, ctx) < 0:
                raise ValueError(
                    f"eigenvalue {ev} is not a p-adic integer for p = {ctx.p}"
                )
        u, _ = jordan_form(Lambda)
        return cls(
            Lambda,
            eigs,
            u,
            u.inverse(),
            Fraction(matrix_vnorm(u, ctx) + matrix_vnorm(u.inverse(), ctx)),
        )


@dataclass
class EnvelopeReport:
    """Norm profile with per-sample constructive envelope verdicts."""

    series: ValuationSeries
    envelopes_hold: bool
    failures: List[int] = field(default_factory=list)

    def as_report(self) -> dict:
        out = self.series.as_report()
        out["envelopes_hold"] = self.envelopes_hold
        out["envelope_failures"] = self.failures
        if out["passed"] is not None:
            out["passed"] = out["passed"] and self.envelopes_hold
        return out


# Long C-matrix products are tracked as integer matrices with the common
# denominator and tau factored out: no gcd normalization ever runs, and the
# factored scalars re-enter the valuations as exact corrections.


def _int_scaled(lam: Matrix) -> Tuple[List[List[int]], int]:
    q = 1
    for row in lam.rows:
        for e in row:
            q = q * e.denominator // math.gcd(q, e.denominator)
    a = [[int(e * q) for e in row] for row in lam.rows]
    return a, q


def _int_mul(a: List[List[int]], b: List[List[int]]) -> List[List[int]]:
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _int_det(a: List[List[int]]) -> int:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = 0
    for j in range(n):
        if not a[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        total += (-1) ** j * a[0][j] * _int_det(minor)
    return total


def _int_adjugate(a: List[List[int]]) -> List[List[int]]:
    n = len(a)
    if n == 1:
        return [[1]]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [a[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            out[j][i] = (-1) ** (i + j) * _int_det(minor)
    return out


def _int_minval(a: List[List[int]], ctx: PadicContext) -> int:
    best = None
    for row in a:
        for e in row:
            if e:
                v = ctx.valuation_int(e)
                if best is None or v < best:
                    best = v
    if best is None:
        raise ValueError("zero matrix in norm profile")
    return best


def c_norm_profile(
    Lambda: Matrix,
    tau,
    direction: str,
    n_max: int,
    ctx: PadicContext,
) -> EnvelopeReport:
    """Valuation of the max-norm of C(+-n) for n <= n_max, with exact
    envelope checks at every n.

    Plus direction: the slope tends to 1/(p-1) - val(tau), and for every n

        min_j D_j(n) - (nu-1) maxval_j(n) + off <= w_n <= min_j D_j(n) - off

    where D_j(n) = val(tau^-n (g_j+1)_n), maxval_j(n) = max_{l<=n} val(g_j+l)
    (the valuation content of the polynomial factor n^(nu-1)), and off is the
    conjugation offset of the Jordan basis.  Minus direction: the slope tends
    to val(tau) - 1/(p-1); the envelope comes from the exact identity
    C(-n) = (-1)^(n+1) tau Lambda^(-1) C_{-Lambda}(n-1)^(-1) combined with
    the norm inequalities for inverses, using the plus-direction envelope of
    -Lambda and the closed-form determinant.
    """
    if direction not in ("+", "-"):
        raise ValueError("direction is '+' or '-'")
    tau = as_rational(tau)
    vtau = val_p(tau, ctx)
    nu = Lambda.nrows
    if direction == "+":
        nc = MatrixNormContext.build(Lambda, ctx)
        target = ctx.pi_v_valuation - vtau
        a, q = _int_scaled(Lambda)
        vq = ctx.valuation_int(q)
        prod = [[int(i == j) for j in range(nu)] for i in range(nu)]
        samples, failures = [], []
        # val(ev + l) >= 0 for p-adic-integer data, so maxvals start at 0
        maxvals = {ev: Fraction(0) for ev, _ in nc.eigenvalues}
        dvals = {ev: Fraction(0) for ev, _ in nc.eigenvalues}
        for n in range(1, n_max + 1):
            step = [
                [a[i][j] + (n * q if i == j else 0) for j in range(nu)]
                for i in range(nu)
            ]
            prod = _int_mul(step, prod)
            w = Fraction(_int_minval(prod, ctx) - n * (vq + vtau))
            for ev, _ in nc.eigenvalues:
                dvals[ev] += val_p(ev + n, ctx)
                maxvals[ev] = max(maxvals[ev], Fraction(val_p(ev + n, ctx)))
            lo = min(
                dvals[ev] - n * vtau - (mult - 1) * maxvals[ev]
                for ev, mult in nc.eigenvalues
            ) + nc.conj_offset
            hi = min(dvals[ev] - n * vtau for ev, _ in nc.eigenvalues) - nc.conj_offset
            if not (lo <= w <= hi):
                failures.append(n)
            samples.append((n, w))
        series = ValuationSeries(
            f"C_norm_plus(nu={nu})", ctx.p, samples, target=target
        )
        return EnvelopeReport(series, not failures, failures)
    # minus direction: C(-n) = (tau q)^n prod_t adj(A - t q I) / prod_t det(...)
    neg = -Lambda
    nc_neg = MatrixNormContext.build(neg, ctx)
    vlam_inv = Fraction(matrix_vnorm(Lambda.inverse(), ctx))
    target = vtau - ctx.pi_v_valuation
    a, q = _int_scaled(Lambda)
    vq = ctx.valuation_int(q)
    prod = [[int(i == j) for j in range(nu)] for i in range(nu)]
    den_val = 0
    samples, failures = [], []
    maxvals = {ev: Fraction(0) for ev, _ in nc_neg.eigenvalues}
    dvals = {ev: Fraction(0) for ev, _ in nc_neg.eigenvalues}
    for n in range(1, n_max + 1):
        t = n - 1
        step = [
            [a[i][j] - (t * q if i == j else 0) for j in range(nu)]
            for i in range(nu)
        ]
        prod = _int_mul(_int_adjugate(step), prod)
        den_val += ctx.valuation_int(_int_det(step))
        w = Fraction(_int_minval(prod, ctx) - den_val + n * (vtau + vq))
        m = n - 1  # envelope data for C_{-Lambda}(n-1)
        if m >= 1:
            for ev, _ in nc_neg.eigenvalues:
                dvals[ev] += val_p(ev + m, ctx)
                maxvals[ev] = max(maxvals[ev], Fraction(val_p(ev + m, ctx)))
        if m == 0:
            b_lo = Fraction(0)
        else:
            b_lo = min(
                dvals[ev] - m * vtau - (mult - 1) * maxvals[ev]
                for ev, mult in nc_neg.eigenvalues
            ) + nc_neg.conj_offset
        # det C_{-Lambda}(m) valuation from the closed form, incrementally
        det_val = sum(
            mult * dvals[ev] for ev, mult in nc_neg.eigenvalues
        ) - m * nu * vtau
        y = vtau + vlam_inv
        lo = y + (nu - 1) * b_lo - det_val
        hi = y - (nu - 1) ** 2 * b_lo + (nu - 2) * det_val
        if not (lo <= w <= hi):
            failures.append(n)
        samples.append((n, w))
    series = ValuationSeries(
        f"C_norm_minus(nu={nu})", ctx.p, samples, target=target
    )
    return EnvelopeReport(series, not failures, failures)


def norm_inequality_check(y: Matrix, z: Matrix, ctx: PadicContext) -> dict:
    """Exact valuation-space verdicts on the inverse and product norm bounds.

    With a = minval(Y), b = minval(Y^-1), D = val(det Y):
        (nu-1) a - D <= b <= -a.
    With y = minval(Y), z = minval(Z), q = minval(YZ), E = val(det Z):
        y + z <= q <= y + E + (1-nu) z.
    """
    nu = y.nrows
    dy = y.det()
    dz = z.det()
    if not dy or not dz:
        raise ValueError("inputs must be invertible")
    a = Fraction(matrix_vnorm(y, ctx))
    b = Fraction(matrix_vnorm(y.inverse(), ctx))
    dval = Fraction(val_p(dy, ctx))
    inv_ok = (nu - 1) * a - dval <= b <= -a
    yv = a
    zv = Fraction(matrix_vnorm(z, ctx))
    q = Fraction(matrix_vnorm(y * z, ctx))
    ez = Fraction(val_p(dz, ctx))
    prod_ok = yv + zv <= q <= yv + ez + (1 - nu) * zv
    return {
        "p": ctx.p,
        "nu": nu,
        "inverse_bounds_hold": inv_ok,
        "product_bounds_hold": prod_ok,
        "passed": inv_ok and prod_ok,
        "minval_Y": str(a),
        "minval_Y_inv": str(b),
        "minval_Z": str(zv),
        "minval_YZ": str(q),
    }


def _ray_directions(support: Sequence[MultiIndex]) -> List[MultiIndex]:
    dirs = {}
    for a in support:
        if all(e == 0 for e in a):
            continue
        g = math.gcd(*(abs(e) for e in a))
        key = MultiIndex(e // g for e in a)
        dirs[key] = True
    return list(dirs)


def z_coefficient_growth(
    m: MatrixSeries, tau, ctx: PadicContext, tolerance_c: int = DEFAULT_TOLERANCE_C
) -> dict:
    """Coefficient growth of the formal transform along support rays.

    For a shared tau, the transform output Z satisfies, in valuation space,

        (w_Z(beta) - w_Y(-beta)) / |beta| >= val(tau) - 1/(p-1) - tol

    along rays into the positive orthant (negative C-branch) and the same
    with 1/(p-1) - val(tau) along rays into the negative orthant; both are
    checked at the outermost sampled point of every ray present.
    """
    tau = as_rational(tau)
    for lam in m.Lambda:
        MatrixNormContext.build(lam, ctx)  # validates the hypotheses
    z = formal_transform(m, [tau] * m.d)
    vtau = val_p(tau, ctx)
    rays = []
    passed = True
    for u in _ray_directions(list(z.terms)):
        # collect the multiples of u that actually appear
        ts = []
        t = 1
        while True:
            key = MultiIndex(t * e for e in u)
            if key not in z.terms:
                break
            ts.append(t)
            t += 1
        if not ts or ts[-1] * sum(abs(e) for e in u) < 2:
            continue
        t = ts[-1]
        beta = MultiIndex(t * e for e in u)
        order = sum(abs(e) for e in beta)
        wz = matrix_vnorm(z.terms[beta], ctx)
        y_coeff = m.terms.get(-beta)
        if y_coeff is None:
            continue
        wy = matrix_vnorm(y_coeff, ctx)
        if wz == INFINITY or wy == INFINITY:
            continue
        if MultiIndex(beta).is_nonnegative():
            bound = vtau - ctx.pi_v_valuation
        else:
            bound = ctx.pi_v_valuation - vtau
        tol = log_tolerance(order, tolerance_c)
        ok = Fraction(wz - wy, order) >= bound - tol
        passed = passed and ok
        rays.append(
            {
                "direction": list(u),
                "order": order,
                "slope": str(Fraction(wz - wy, order)),
                "bound": str(bound),
                "tolerance": str(tol),
                "passed": ok,
            }
        )
    return {
        "sequence": "z_coefficient_growth",
        "p": ctx.p,
        "tau": str(tau),
        "rays": rays,
        "passed": passed,
    }


# -- archimedean growth fits -------------------------------------------------


def fit_slope(samples: Sequence[Tuple[int, Fraction]]) -> Tuple[Fraction, Fraction]:
    """Exact least-squares line y = slope*n + intercept."""
    k = len(samples)
    if k < 2:
        raise ValueError("need at least two samples to fit")
    sx = sum(Fraction(n) for n, _ in samples)
    sy = sum(y for _, y in samples)
    sxx = sum(Fraction(n) ** 2 for n, _ in samples)
    sxy = sum(Fraction(n) * y for n, y in samples)
    denom = k * sxx - sx * sx
    slope = (k * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / k
    return slope, intercept


@dataclass
class GrowthFit:
    """Two-window slope fit certifying at-most-geometric growth.

    Geometric growth means log-quantity ~ slope * n: the fitted slope has
    converged, so the back-half slope exceeds the front-half slope by at
    most 1/10.  Factorial-type growth keeps the slope drifting by ~log 2
    per doubling and fails.
    """

    slope: Fraction
    front_slope: Fraction
    passed: bool
    samples: int

    def as_dict(self) -> dict:
        return {
            "slope": str(self.slope),
            "front_slope": str(self.front_slope),
            "samples": self.samples,
            "passed": self.passed,
        }


SLOPE_DRIFT_LIMIT = Fraction(1, 10)


def geometric_growth_fit(samples: Sequence[Tuple[int, Fraction]]) -> GrowthFit:
    samples = sorted(samples)
    n_max = samples[-1][0]
    back = [s for s in samples if s[0] >= n_max / 2]
    front = [s for s in samples if n_max / 4 <= s[0] < n_max / 2]
    if len(back) < 2 or len(front) < 2:
        slope, _ = fit_slope(samples)
        return GrowthFit(slope, slope, True, len(samples))
    slope, _ = fit_slope(back)
    fslope, _ = fit_slope(front)
    return GrowthFit(slope, fslope, slope <= fslope + SLOPE_DRIFT_LIMIT, len(samples))


def log_size(x: Fraction) -> Fraction:
    """Exactified double-precision ln|x| for nonzero rational x."""
    x = abs(as_rational(x))
    if x == 0:
        raise ValueError("log of zero")
    return Fraction(math.log(x.numerator) - math.log(x.denominator))


def lcd_growth_check(
    a_params: Sequence, b_params: Sequence, n_max: int
) -> dict:
    """Least-common-denominator growth of prod (a_i)_n / prod (b_j)_n.

    The lcd over n <= N, divided by N!^max(0, d'-d) (d = #a, d' = #b; the
    factorial correction only helps when denominator parameters outnumber
    numerator ones), must grow at most geometrically.  Parameters must avoid
    the nonpositive integers.
    """
    a = [as_rational(x) for x in a_params]
    b = [as_rational(x) for x in b_params]
    for x in a + b:
        if x.denominator == 1 and x <= 0:
            raise ValueError(f"parameter {x} is a nonpositive integer")
    excess = max(0, len(b) - len(a))
    samples = []
    current_lcd = 1
    factorial = 1
    for n in range(0, n_max + 1):
        ratio_n = pochhammer_ratio(a, b, n)
        current_lcd = math.lcm(current_lcd, ratio_n.denominator)
        if n >= 1:
            factorial *= n
        if n >= 2:
            rem = Fraction(current_lcd, factorial**excess)
            samples.append((n, log_size(rem) if rem != 0 else Fraction(0)))
    fit = geometric_growth_fit(samples)
    return {
        "sequence": "lcd_growth",
        "a": [str(x) for x in a],
        "b": [str(x) for x in b],
        "n_max": n_max,
        "factorial_excess": excess,
        "fit": fit.as_dict(),
        "passed": fit.passed,
    }


def pochhammer_ratio(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> Fraction:
    num = Fraction(1)
    for x in a:
        num *= pochhammer(x, n)
    den = Fraction(1)
    for x in b:
        den *= pochhammer(x, n)
    return num / den
