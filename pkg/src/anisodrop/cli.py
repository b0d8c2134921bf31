"""Command-line front end: a thin client of the HTTP service.

By default requests run against an in-process instance of the app (no
network, fully deterministic); ``--server URL`` targets a running instance
instead.  Exit codes: 0 success, 1 numeric failure (a partial report with an
``error`` field is still written), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .dropsolve import sweep_rows_to_csv


def _load_json(parser, path, flag):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        parser.error(f"{flag}: file not found: {path}")
    except json.JSONDecodeError as exc:
        parser.error(f"{flag}: malformed JSON in {path}: {exc}")


def _parse_gammas(parser, text):
    """Gamma list grammar: 'start:stop:Nlog' for log spacing, or an explicit
    comma-separated list."""
    try:
        if text.endswith("log"):
            start_s, stop_s, count_s = text[:-3].split(":")
            start, stop, count = float(start_s), float(stop_s), int(count_s)
            if start <= 0 or stop <= 0 or count < 2:
                raise ValueError
            return list(np.logspace(np.log10(start), np.log10(stop), count))
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        parser.error(f"--gammas: cannot parse {text!r} (use 'start:stop:Nlog' or a comma list)")


def _check_range(parser, name, value, lo=None, hi=None, lo_open=True, hi_open=True):
    if value is None:
        return None
    bad = False
    if lo is not None:
        bad = bad or (value <= lo if lo_open else value < lo)
    if hi is not None:
        bad = bad or (value >= hi if hi_open else value > hi)
    if bad:
        parser.error(f"{name}: value {value} out of range")
    return value


def _client(server):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=3600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # starlette deprecation chatter on import
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _emit(payload, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")


def _post(args, endpoint, body, render):
    """Send one request; on computation failure write a partial report with
    the error field and exit 1."""
    with _client(args.server) as client:
        resp = client.post(endpoint, json=body)
    if resp.status_code != 200:
        try:
            detail = resp.json()
        except ValueError:
            detail = {"error": "HTTPError", "detail": resp.text}
        _emit(json.dumps(detail, indent=2) + "\n", args.out)
        return 1
    _emit(render(resp.json()), args.out)
    return 0


def _json_render(data):
    return json.dumps(data, indent=2) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="anisodrop",
        description="Anisotropic liquid-drop energies: Wulff shapes, Riesz terms, gamma sweeps.",
    )
    parser.add_argument("--server", default=None,
                        help="URL of a running service (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, out=True):
        if out:
            p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=None,
                       help="default: csv when --out ends in .csv, else json")

    p_wulff = sub.add_parser("wulff", help="Wulff shape of a tension as polygon JSON")
    p_wulff.add_argument("--tension", required=True)
    p_wulff.add_argument("--directions", type=int, default=720)
    add_common(p_wulff)

    p_energy = sub.add_parser("energy", help="perimeter, Riesz term and total energy of a shape")
    p_energy.add_argument("--tension", required=True)
    p_energy.add_argument("--alpha", type=float, required=True)
    p_energy.add_argument("--gamma", type=float, default=0.0)
    p_energy.add_argument("--shape", default=None, help="polygon JSON (default: Wulff shape)")
    p_energy.add_argument("--directions", type=int, default=720)
    p_energy.add_argument("--quad-tol", type=float, default=1e-7)
    p_energy.add_argument("--mc-samples", type=int, default=None,
                          help="also run the seeded Monte Carlo cross-check")
    p_energy.add_argument("--seed", type=int, default=0)
    add_common(p_energy)

    p_coeffs = sub.add_parser("coeffs", help="stretch-variation coefficients mu1, mu2, mu3")
    p_coeffs.add_argument("--tension", required=True)
    p_coeffs.add_argument("--alpha", type=float, required=True)
    p_coeffs.add_argument("--a0", type=float, required=True)
    p_coeffs.add_argument("--base", default="square",
                          help="family base: square | disk | octagon | polygon JSON path")
    p_coeffs.add_argument("--quad-tol", type=float, default=1e-10)
    add_common(p_coeffs)

    p_sweep = sub.add_parser("sweep", help="gamma sweep: minimizers, deficits, fitted slopes")
    p_sweep.add_argument("--tension", required=True)
    p_sweep.add_argument("--alpha", type=float, required=True)
    p_sweep.add_argument("--a0", type=float, required=True)
    p_sweep.add_argument("--gammas", required=True,
                         help="'start:stop:Nlog' or comma-separated list")
    p_sweep.add_argument("--base", default="square")
    p_sweep.add_argument("--bracket", default=None, help="'lo:hi' (default 0.5 a0 : 2 a0)")
    p_sweep.add_argument("--tol-a", type=float, default=1e-8)
    p_sweep.add_argument("--quad-tol", type=float, default=1e-11)
    p_sweep.add_argument("--seed", type=int, default=0)
    add_common(p_sweep)

    p_lemma = sub.add_parser("lemma", help="graph-distance inequality check on a named pair")
    p_lemma.add_argument("--case", choices=("circles", "dilation", "bump"), required=True)
    p_lemma.add_argument("--t", type=float, default=0.01)
    p_lemma.add_argument("--eps", type=float, default=0.001)
    p_lemma.add_argument("--delta", type=float, default=0.1)
    add_common(p_lemma)

    p_el = sub.add_parser("el", help="Euler-Lagrange residual on a smooth Wulff boundary")
    p_el.add_argument("--tension", required=True)
    p_el.add_argument("--alpha", type=float, required=True)
    p_el.add_argument("--gamma", type=float, default=0.0)
    p_el.add_argument("--nodes", type=int, default=1024)
    p_el.add_argument("--include-nodes", action="store_true")
    add_common(p_el)

    p_verify = sub.add_parser("verify", help="run the acceptance suite")
    p_verify.add_argument("--criteria", default=None, help="comma list, e.g. '1,2,7'")
    add_common(p_verify)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def _base_args(parser, args):
    if args.base in ("square", "disk", "octagon"):
        return {"base": args.base}
    return {"base_polygon": _load_json(parser, args.base, "--base")}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "format", None) is None and args.command != "serve":
        out = getattr(args, "out", None)
        args.format = "csv" if out and out.endswith(".csv") else "json"

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.command == "wulff":
        tension = _load_json(parser, args.tension, "--tension")
        _check_range(parser, "--directions", args.directions, lo=3, lo_open=False)
        return _post(args, "/wulff", {"tension": tension, "n_directions": args.directions},
                     _json_render)

    if args.command == "energy":
        tension = _load_json(parser, args.tension, "--tension")
        _check_range(parser, "--alpha", args.alpha, lo=0.0, hi=2.0)
        _check_range(parser, "--gamma", args.gamma, lo=0.0, lo_open=False)
        _check_range(parser, "--quad-tol", args.quad_tol, lo=0.0)
        if args.mc_samples is not None:
            _check_range(parser, "--mc-samples", args.mc_samples, lo=10_000, lo_open=False)
        body = {
            "tension": tension, "alpha": args.alpha, "gamma": args.gamma,
            "n_directions": args.directions, "quad_tol": args.quad_tol,
            "mc_samples": args.mc_samples, "seed": args.seed,
        }
        if args.shape:
            body["shape"] = _load_json(parser, args.shape, "--shape")
        return _post(args, "/energy", body, _json_render)

    if args.command == "coeffs":
        tension = _load_json(parser, args.tension, "--tension")
        _check_range(parser, "--alpha", args.alpha, lo=0.0, hi=2.0)
        _check_range(parser, "--a0", args.a0, lo=0.0)
        body = {"tension": tension, "alpha": args.alpha, "a0": args.a0,
                "quad_tol": args.quad_tol, **_base_args(parser, args)}
        return _post(args, "/coeffs", body, _json_render)

    if args.command == "sweep":
        tension = _load_json(parser, args.tension, "--tension")
        _check_range(parser, "--alpha", args.alpha, lo=0.0, hi=2.0)
        _check_range(parser, "--a0", args.a0, lo=0.0)
        gammas = _parse_gammas(parser, args.gammas)
        if any(g <= 0 for g in gammas):
            parser.error("--gammas: all values must be positive")
        body = {"tension": tension, "alpha": args.alpha, "a0": args.a0,
                "gammas": gammas, "tol_a": args.tol_a, "quad_tol": args.quad_tol,
                **_base_args(parser, args)}
        if args.bracket:
            try:
                lo, hi = (float(x) for x in args.bracket.split(":"))
            except ValueError:
                parser.error(f"--bracket: cannot parse {args.bracket!r} (use 'lo:hi')")
            body["bracket"] = (lo, hi)

        def render(data):
            if args.format == "csv":
                return sweep_rows_to_csv(data["rows"])
            return _json_render(data)

        return _post(args, "/sweep", body, render)

    if args.command == "lemma":
        body = {"case": args.case, "t": args.t, "eps": args.eps, "delta": args.delta}
        return _post(args, "/lemma", body, _json_render)

    if args.command == "el":
        tension = _load_json(parser, args.tension, "--tension")
        _check_range(parser, "--alpha", args.alpha, lo=0.0, hi=2.0)
        _check_range(parser, "--gamma", args.gamma, lo=0.0, lo_open=False)
        body = {"tension": tension, "alpha": args.alpha, "gamma": args.gamma,
                "n_nodes": args.nodes, "include_nodes": args.include_nodes}
        return _post(args, "/el", body, _json_render)

    if args.command == "verify":
        criteria = None
        if args.criteria:
            try:
                criteria = [int(tok) for tok in args.criteria.split(",") if tok]
            except ValueError:
                parser.error(f"--criteria: cannot parse {args.criteria!r}")
        with _client(args.server) as client:
            resp = client.post("/verify", json={"criteria": criteria})
        if resp.status_code != 200:
            _emit(json.dumps(resp.json(), indent=2) + "\n", args.out)
            return 1
        data = resp.json()
        lines = []
        for r in data["results"]:
            tag = "PASS" if r["passed"] else "FAIL"
            lines.append(f"[{tag}] criterion {r['index']:2d} {r['name']}: {r['details']}")
        _emit("\n".join(lines) + "\n", args.out)
        return 0 if data["all_passed"] else 1

    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
