"""Arithmetic Gevrey certification and the transform's order shift.

A truncated series is certified at order s when the normalized coefficients
a_alpha / (alpha!)^s have at-most-geometric sizes and denominators:

* sizes: log max_{|alpha| = N} |a_alpha| - s log(alpha!) fitted against N,
* denominators: log lcd{ a_alpha / (alpha!)^s : |alpha| <= N } against N,

both with the two-window slope-convergence criterion of the estimates
module.  For fractional s = p/q the denominator data uses the exact q-th
powers a_alpha^q / (alpha!)^p, whose growth class is q times the original.

The transform sends a certified order-s element supported in x to one
certified at s+1 in 1/x and conversely down to s-1; the image coefficients
carry Gamma-symbol coordinates which are certified one coordinate series at
a time (the symbols are independent formal coordinates, so the complex
tensor factor never mixes them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import MultiIndex, as_rational
from .estimates import GrowthFit, geometric_growth_fit, log_size
from .series import LogLaurentSeries
from .standard import laplace_series
from .weyl import WeylOperator, apply_operator


@dataclass
class GevreyCertificate:
    s: Fraction
    size_slope: Fraction
    denom_slope: Fraction
    window: int
    passed: bool
    size_fit: dict = field(default_factory=dict)
    denom_fit: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "s": str(self.s),
            "size_slope": str(self.size_slope),
            "denom_slope": str(self.denom_slope),
            "window": self.window,
            "passed": self.passed,
            "size_fit": self.size_fit,
            "denom_fit": self.denom_fit,
        }


class CertificationError(ValueError):
    """A precondition certificate failed; carries the diagnostics."""

    def __init__(self, message: str, certificate: GevreyCertificate):
        super().__init__(message)
        self.certificate = certificate


def certify_gevrey(
    coeffs: Dict[Sequence[int], Fraction], s, window: Optional[int] = None
) -> GevreyCertificate:
    """Certify a coefficient family at arithmetic Gevrey order s."""
    s = as_rational(s)
    data = {
        MultiIndex(a): as_rational(c) for a, c in coeffs.items() if as_rational(c)
    }
    if not data:
        raise ValueError("cannot certify an empty coefficient family")
    for a in data:
        if any(e < 0 for e in a):
            raise ValueError("coefficient indices must be nonnegative")
    if window is None:
        window = max(a.order for a in data)
    by_order: Dict[int, List[Tuple[MultiIndex, Fraction]]] = {}
    for a, c in data.items():
        if a.order <= window:
            by_order.setdefault(a.order, []).append((a, c))
    size_samples = []
    for n_ord in sorted(by_order):
        if n_ord < 1:
            continue
        y = max(
            log_size(c) - s * log_size(Fraction(a.factorial()))
            for a, c in by_order[n_ord]
        )
        size_samples.append((n_ord, y))
    denom_samples = []
    q = s.denominator
    p = s.numerator
    current = 1
    for n_ord in sorted(by_order):
        for a, c in by_order[n_ord]:
            normalized = c**q / Fraction(a.factorial()) ** p
            current = math.lcm(current, normalized.denominator)
        if n_ord >= 1:
            denom_samples.append(
                (n_ord, log_size(Fraction(current)) if current > 1 else Fraction(0))
            )
    size_fit = _fit_or_flat(size_samples)
    denom_fit = _fit_or_flat(denom_samples)
    # fractional s certifies through the q-th powers; report per-unit slopes
    denom_slope = denom_fit.slope / q
    return GevreyCertificate(
        s=s,
        size_slope=size_fit.slope,
        denom_slope=denom_slope,
        window=window,
        passed=size_fit.passed and denom_fit.passed,
        size_fit=size_fit.as_dict(),
        denom_fit=denom_fit.as_dict(),
    )


def _fit_or_flat(samples: List[Tuple[int, Fraction]]) -> GrowthFit:
    if len(samples) < 2:
        return GrowthFit(Fraction(0), Fraction(0), True, len(samples))
    return geometric_growth_fit(samples)


@dataclass
class NgaSummand:
    """One f * h_{gamma,k} piece: coefficients of f, exponent base, log
    powers, and the completion direction ('+' keeps x, '-' means f(1/x))."""

    coeffs: Dict[Sequence[int], Fraction]
    gamma: Tuple[Fraction, ...]
    k: MultiIndex
    direction: str = "+"

    def __post_init__(self):
        self.gamma = tuple(as_rational(g) for g in self.gamma)
        for g in self.gamma:
            if g.denominator == 1:
                raise ValueError(f"exponent {g} must be non-integral")
        self.k = MultiIndex(self.k)
        if self.direction not in ("+", "-"):
            raise ValueError("direction must be '+' or '-'")
        self.coeffs = {
            MultiIndex(a): as_rational(c) for a, c in self.coeffs.items()
        }
        for a in self.coeffs:
            if any(e < 0 for e in a):
                raise ValueError("summand coefficients are indexed by N^d")

    def to_series(self) -> LogLaurentSeries:
        sign = 1 if self.direction == "+" else -1
        return LogLaurentSeries(
            self.gamma,
            {
                (MultiIndex(sign * e for e in a), self.k): c
                for a, c in self.coeffs.items()
            },
        )


@dataclass
class NgaElement:
    summands: List[NgaSummand]

    def is_zero(self) -> bool:
        return all(not any(s.coeffs.values()) for s in self.summands)


def transform_order_shift(e: NgaElement, s, window: int) -> dict:
    """Transform every summand and certify the order shift s -> s+-1.

    Each summand must certify at order s first (CertificationError carries
    the failing certificate otherwise).  The transform image is split into
    coordinate series over (log power, Gamma-symbol monomial) and every
    coordinate is certified at s+1 for x-direction summands, s-1 for
    1/x-direction ones.
    """
    s = as_rational(s)
    report = {"s": str(s), "summands": [], "passed": True}
    for summand in e.summands:
        if not summand.coeffs:
            report["summands"].append({"empty": True, "passed": True})
            continue
        source = certify_gevrey(summand.coeffs, s, window)
        if not source.passed:
            raise CertificationError(
                f"source series fails certification at order {s}", source
            )
        target_order = s + 1 if summand.direction == "+" else s - 1
        image = laplace_series(summand.to_series())
        coords: Dict[Tuple[MultiIndex, tuple], Dict[MultiIndex, Fraction]] = {}
        for (alpha, logpow), poly in image.terms.items():
            index = MultiIndex(abs(a) for a in alpha)
            for mono, c in poly.coordinates().items():
                coords.setdefault((logpow, mono), {})[index] = c
        entries = []
        ok = True
        for (logpow, mono), series in sorted(coords.items()):
            cert = certify_gevrey(series, target_order, window)
            ok = ok and cert.passed
            entries.append(
                {
                    "logpow": list(logpow),
                    "monomial": [list(key) + [exp] for key, exp in mono],
                    "certificate": cert.as_dict(),
                }
            )
        report["summands"].append(
            {
                "direction": summand.direction,
                "source": source.as_dict(),
                "image_order": str(target_order),
                "coordinates": entries,
                "passed": ok,
            }
        )
        report["passed"] = report["passed"] and ok
    return report


def holonomicity_probe(
    f_coeffs: Dict[Sequence[int], Fraction],
    ops: Sequence[WeylOperator],
    window: int,
) -> dict:
    """Residuals of candidate annihilating operators on a truncated series.

    Gathers evidence only: a nonzero residual is reported, never raised, and
    a zero residual inside the shrunken window decides nothing about the
    holonomicity of the underlying function.
    """
    if not ops:
        raise ValueError("no operators supplied")
    d = ops[0].d
    series = LogLaurentSeries(
        tuple(Fraction(0) for _ in range(d)),
        {(a, tuple([0] * d)): c for a, c in f_coeffs.items()},
    )
    results = []
    for op in ops:
        if op.d != d:
            raise ValueError("operator dimensions differ")
        inner = window - op.total_order()
        residual = apply_operator(op, series).restrict(inner)
        results.append(
            {
                "operator": repr(op),
                "window": inner,
                "residual_support": sorted(
                    [list(a) for a, _ in residual.terms]
                ),
                "annihilates_within_window": residual.is_zero(),
            }
        )
    return {
        "window": window,
        "operators": results,
        "all_annihilate": all(r["annihilates_within_window"] for r in results),
    }
