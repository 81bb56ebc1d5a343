"""Command-line client for the transform service.

Every verb builds a request and sends it through the HTTP interface: against
an in-process application instance by default, or against a running server
when --server is given, so the CLI and the service share one code path.

Exit status: 0 success / verification passed; 1 a verification, estimate or
certification check failed (the report names a minimal counterexample);
2 input error (malformed JSON, unknown files, violated preconditions).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Optional

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2


class ClientError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _client(server: Optional[str]):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code in (400, 422):
        raise ClientError(
            f"input rejected: {json.dumps(resp.json().get('detail'), default=str)}",
            EXIT_INPUT_ERROR,
        )
    if resp.status_code != 200:
        raise ClientError(
            f"service error {resp.status_code}: {resp.text}", EXIT_INPUT_ERROR
        )
    return resp.json()


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ClientError(f"no such file: {path}", EXIT_INPUT_ERROR)
    except json.JSONDecodeError as exc:
        raise ClientError(
            f"malformed JSON in {path} at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}",
            EXIT_INPUT_ERROR,
        )


def _write_json(path: Optional[str], payload: dict) -> None:
    text = json.dumps(payload, indent=2, default=str)
    if path is None:
        print(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report_exit(report: dict) -> int:
    if report.get("passed") is False:
        ce = report.get("counterexample")
        if ce:
            print(f"FAILED: {json.dumps(ce, default=str)}", file=sys.stderr)
        else:
            failing = [
                s.get("suite") or s.get("case") or "?"
                for s in report.get("suites", report.get("cases", []))
                if isinstance(s, dict) and not s.get("passed", True)
            ]
            print(
                "FAILED" + (f" in: {', '.join(failing)}" if failing else ""),
                file=sys.stderr,
            )
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def cmd_transform_standard(args, client) -> int:
    payload = {"series": _read_json(args.input)}
    out = _post(client, "/transform/standard", payload)
    _write_json(args.out, out["series"])
    return EXIT_OK


def cmd_transform_formal(args, client) -> int:
    payload = {"matrix_series": _read_json(args.input), "tau": args.tau}
    out = _post(client, "/transform/formal", payload)
    _write_json(args.out, out["matrix_series"])
    return EXIT_OK


def cmd_fourier_laplace(args, client) -> int:
    if args.op is not None:
        operator = args.op
    elif args.input is not None:
        operator = _read_json(args.input)
    else:
        raise ClientError("need --input or --op", EXIT_INPUT_ERROR)
    payload = {"operator": operator}
    if args.tau is not None:
        payload["tau"] = args.tau
    out = _post(client, "/fourier-laplace", payload)
    _write_json(args.out, out["operator"])
    return EXIT_OK


def cmd_verify(args, client) -> int:
    options = json.loads(args.options) if args.options else {}
    if args.d is not None:
        options.setdefault("d_max", args.d)
    payload = {"suite": args.suite, "seed": args.seed, "options": options}
    report = _post(client, "/verify", payload)
    if args.out:
        _write_json(args.out, report)
    for sub in report.get("suites", [report]):
        status = "pass" if sub.get("passed") else "FAIL"
        print(f"{sub.get('suite', args.suite):>14}: {status}")
    return _report_exit(report)


def cmd_estimate_padic(args, client) -> int:
    payload = {
        "profile": args.profile,
        "n": args.n,
        "tau": args.tau,
        "direction": args.direction,
    }
    if args.p is not None:
        payload["p"] = args.p
    if args.gamma is not None:
        payload["gamma"] = args.gamma
    if args.lambda_matrix is not None:
        payload["lambda_matrix"] = _read_json(args.lambda_matrix)
    if args.input is not None:
        payload["matrix_series"] = _read_json(args.input)
    if args.a is not None:
        payload["a"] = args.a.split(",")
    if args.b is not None:
        payload["b"] = args.b.split(",") if args.b else []
    elif args.a is not None:
        payload["b"] = []
    report = _post(client, "/estimate/padic", payload)
    _write_json(args.out, report)
    if args.csv:
        _write_csv(args.csv, report)
    return _report_exit(report)


def _write_csv(path: str, report: dict) -> None:
    """Samples as n,valuation rows; exact rational strings, no floats."""
    samples = report.get("samples")
    if not samples:
        raise ClientError("report carries no samples for CSV export",
                          EXIT_INPUT_ERROR)
    lines = ["n,valuation"] + [f"{n},{w}" for n, w in samples]
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_certify_gevrey(args, client) -> int:
    doc = _read_json(args.input)
    coeffs = doc["coeffs"] if isinstance(doc, dict) else doc
    payload = {
        "coeffs": coeffs,
        "s": args.s,
        "transform": args.transform,
        "direction": args.direction,
    }
    if args.window is not None:
        payload["window"] = args.window
    if args.gamma is not None:
        payload["gamma"] = args.gamma.split(",")
    if args.k is not None:
        payload["k"] = [int(e) for e in args.k.split(",")]
    report = _post(client, "/certify/gevrey", payload)
    _write_json(args.out, report)
    return _report_exit(report)


def cmd_serve(args, _client) -> int:
    import uvicorn

    uvicorn.run("laplace_arith.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laplace",
        description="Exact Laplace transforms, duality checks and p-adic "
        "growth certificates.",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service (default: run in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "transform-standard", aliases=["standard"],
        help="standard transform of a log-Laurent series",
    )
    p.add_argument("--input", required=True, help="series JSON file")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(fn=cmd_transform_standard)

    p = sub.add_parser(
        "transform-formal", aliases=["formal"],
        help="formal transform of a matrix series",
    )
    p.add_argument("--input", required=True, help="matrix series JSON file")
    p.add_argument("--tau", default="1", help="tau values, comma separated")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_transform_formal)

    p = sub.add_parser(
        "fourier-laplace", help="Fourier-Laplace image of a Weyl operator"
    )
    p.add_argument("--input", default=None, help="operator JSON file")
    p.add_argument(
        "--op", default=None, help="infix operator, e.g. 'x1*Dx1^2 + (3/2)*Dx1 - 1'"
    )
    p.add_argument("--tau", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_fourier_laplace)

    p = sub.add_parser("verify", help="run identity/estimate suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument(
        "--d", type=int, default=None, help="cap the number of variables"
    )
    p.add_argument(
        "--options", default=None, help="suite options as a JSON object"
    )
    p.add_argument("--out", default=None, help="write the full report here")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("estimate-padic", help="p-adic growth profiles")
    p.add_argument(
        "--profile", required=True, help="pochhammer | c-norm | z-growth | lcd"
    )
    p.add_argument("--gamma", default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--tau", default="1")
    p.add_argument("--direction", default="+", choices=["+", "-"])
    p.add_argument("--lambda-matrix", dest="lambda_matrix", default=None,
                   help="matrix JSON file for c-norm")
    p.add_argument("--input", default=None, help="matrix series file for z-growth")
    p.add_argument("--a", default=None, help="numerator parameters, comma separated")
    p.add_argument("--b", default=None, help="denominator parameters, comma separated")
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None, help="also write samples as CSV")
    p.set_defaults(fn=cmd_estimate_padic)

    p = sub.add_parser("certify-gevrey", help="arithmetic Gevrey certificates")
    p.add_argument("--input", required=True, help="coefficients JSON file")
    p.add_argument("--s", required=True, help="Gevrey order, e.g. -1")
    p.add_argument("--window", type=int, default=None)
    p.add_argument(
        "--transform", action="store_true",
        help="certify the transform image at the shifted order",
    )
    p.add_argument("--gamma", default=None, help="exponents, comma separated")
    p.add_argument("--k", default=None, help="log powers, comma separated")
    p.add_argument("--direction", default="+", choices=["+", "-"])
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_certify_gevrey)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "serve":
            return cmd_serve(args, None)
        with _client(args.server) as client:
            return args.fn(args, client)
    except ClientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
