"""HTTP service exposing the transform and verification operations.

The service is a stateless wrapper: payloads use the exact-rational JSON
schemas of :mod:`laplace_arith.schemas` (rationals as strings, never
floats), every computation is delegated to the library, and memoized
transform tables persist across requests in the worker process.  Input
errors (malformed payloads, violated preconditions such as integral
exponents) come back as HTTP 400 with the violated condition named;
verification failures are ordinary 200 responses with ``passed: false``.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from . import schemas
from .core import PadicContext, as_rational
from .estimates import (
    c_norm_profile,
    lcd_growth_check,
    pochhammer_valuation_profile,
    z_coefficient_growth,
)
from .formal import formal_transform
from .gevrey import (
    CertificationError,
    NgaElement,
    NgaSummand,
    certify_gevrey,
    transform_order_shift,
)
from .standard import laplace_series
from .suites import SUITES, run_suite
from .weyl import fourier_laplace, parse_operator

app = FastAPI(
    title="laplace-arith",
    description=(
        "Exact Laplace transforms of multivariate logarithmic series, the "
        "Fourier-Laplace automorphism of the Weyl algebra, and p-adic "
        "growth certificates."
    ),
    version="0.1.0",
)


class SeriesRequest(BaseModel):
    series: Dict[str, Any] = Field(description="log-Laurent series document")


class SeriesResponse(BaseModel):
    series: Dict[str, Any]


class FormalRequest(BaseModel):
    matrix_series: Dict[str, Any]
    tau: Union[str, List[str]] = "1"


class FormalResponse(BaseModel):
    matrix_series: Dict[str, Any]


class OperatorRequest(BaseModel):
    operator: Union[Dict[str, Any], str] = Field(
        description="operator document or infix string like 'x1*Dx1^2 - 1'"
    )
    tau: Optional[Union[str, List[str]]] = None


class OperatorResponse(BaseModel):
    operator: Dict[str, Any]


class VerifyRequest(BaseModel):
    suite: str = "all"
    seed: int = 7
    options: Dict[str, Any] = Field(default_factory=dict)


class ReportResponse(BaseModel):
    model_config = ConfigDict(extra="allow")

    passed: bool


class PadicRequest(BaseModel):
    profile: str = Field(description="pochhammer | c-norm | z-growth | lcd")
    p: Optional[int] = None
    n: int = 200
    gamma: Optional[str] = None
    tau: str = "1"
    direction: str = "+"
    lambda_matrix: Optional[Dict[str, Any]] = None
    matrix_series: Optional[Dict[str, Any]] = None
    a: Optional[List[str]] = None
    b: Optional[List[str]] = None


class GevreyRequest(BaseModel):
    coeffs: List[Dict[str, Any]] = Field(
        description="[{alpha: [..], coeff: 'a/b'}, ...]"
    )
    s: str
    window: Optional[int] = None
    transform: bool = False
    gamma: Optional[List[str]] = None
    k: Optional[List[int]] = None
    direction: str = "+"


class CertifyResponse(BaseModel):
    model_config = ConfigDict(extra="allow")

    passed: bool


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "suites": sorted(SUITES)}


@app.post("/transform/standard", response_model=SeriesResponse)
def transform_standard(req: SeriesRequest) -> SeriesResponse:
    try:
        s = schemas.parse_series(req.series)
        out = laplace_series(s)
    except (ValueError, KeyError, TypeError) as exc:
        raise _bad_request(exc)
    return SeriesResponse(series=schemas.dump_series(out))


@app.post("/transform/formal", response_model=FormalResponse)
def transform_formal(req: FormalRequest) -> FormalResponse:
    try:
        m = schemas.parse_matrix_series(req.matrix_series)
        taus = _parse_tau(req.tau, m.d)
        out = formal_transform(m, taus)
    except (ValueError, KeyError, TypeError) as exc:
        raise _bad_request(exc)
    return FormalResponse(matrix_series=schemas.dump_matrix_series(out))


@app.post("/fourier-laplace", response_model=OperatorResponse)
def fourier_laplace_endpoint(req: OperatorRequest) -> OperatorResponse:
    try:
        if isinstance(req.operator, str):
            op = parse_operator(req.operator)
        else:
            op = schemas.parse_operator_json(req.operator)
        taus = _parse_tau(req.tau, op.d) if req.tau is not None else None
        out = fourier_laplace(op, taus)
    except (ValueError, KeyError, TypeError) as exc:
        raise _bad_request(exc)
    return OperatorResponse(operator=schemas.dump_operator(out))


@app.post("/verify", response_model=ReportResponse)
def verify(req: VerifyRequest) -> ReportResponse:
    try:
        report = run_suite(req.suite, seed=req.seed, **req.options)
    except (KeyError, TypeError, ValueError) as exc:
        raise _bad_request(exc)
    return ReportResponse(**report)


@app.post("/estimate/padic", response_model=ReportResponse)
def estimate_padic(req: PadicRequest) -> ReportResponse:
    try:
        report = _run_padic(req)
    except (ValueError, KeyError, TypeError) as exc:
        raise _bad_request(exc)
    return ReportResponse(**report)


def _run_padic(req: PadicRequest) -> dict:
    if req.profile == "pochhammer":
        if req.gamma is None or req.p is None:
            raise ValueError("pochhammer profile needs gamma and p")
        prof = pochhammer_valuation_profile(
            as_rational(req.gamma), req.n, PadicContext(req.p)
        )
        out = prof.as_report()
        out["passed"] = prof.limit_check()
        return out
    if req.profile == "c-norm":
        if req.lambda_matrix is None or req.p is None:
            raise ValueError("c-norm profile needs lambda_matrix and p")
        lam = schemas.parse_matrix(req.lambda_matrix)
        rep = c_norm_profile(
            lam, as_rational(req.tau), req.direction, req.n, PadicContext(req.p)
        )
        return rep.as_report()
    if req.profile == "z-growth":
        if req.matrix_series is None or req.p is None:
            raise ValueError("z-growth profile needs matrix_series and p")
        m = schemas.parse_matrix_series(req.matrix_series)
        return z_coefficient_growth(m, as_rational(req.tau), PadicContext(req.p))
    if req.profile == "lcd":
        if req.a is None or req.b is None:
            raise ValueError("lcd profile needs parameter lists a and b")
        return lcd_growth_check(
            [as_rational(x) for x in req.a],
            [as_rational(x) for x in req.b],
            req.n,
        )
    raise ValueError(
        f"unknown profile {req.profile!r}; "
        "expected pochhammer, c-norm, z-growth or lcd"
    )


@app.post("/certify/gevrey", response_model=CertifyResponse)
def certify(req: GevreyRequest) -> CertifyResponse:
    try:
        coeffs = {
            tuple(int(e) for e in entry["alpha"]): as_rational(entry["coeff"])
            for entry in req.coeffs
        }
        s = as_rational(req.s)
        if not req.transform:
            cert = certify_gevrey(coeffs, s, req.window)
            return CertifyResponse(**cert.as_dict())
        if req.gamma is None or req.k is None:
            raise ValueError("transform certification needs gamma and k")
        window = req.window or max(
            (sum(abs(e) for e in a) for a in coeffs), default=0
        )
        summand = NgaSummand(
            coeffs,
            tuple(as_rational(g) for g in req.gamma),
            tuple(req.k),
            req.direction,
        )
        report = transform_order_shift(NgaElement([summand]), s, window)
        return CertifyResponse(**report)
    except CertificationError as exc:
        raise HTTPException(
            status_code=400,
            detail={
                "message": str(exc),
                "certificate": exc.certificate.as_dict(),
            },
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise _bad_request(exc)


def _parse_tau(tau: Union[str, List[str]], d: int):
    if isinstance(tau, str):
        parts = tau.split(",") if "," in tau else [tau] * d
    else:
        parts = list(tau)
    if len(parts) != d:
        raise ValueError(f"tau needs {d} entries, got {len(parts)}")
    return [as_rational(t) for t in parts]
