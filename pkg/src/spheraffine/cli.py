"""Command-line front end.

Exit codes: 0 success or symmetry pass, 1 symmetry fail, 2 usage, spec or
evaluation error. Output is deterministic: fixed key order, floats in
shortest round-trip form, zero components omitted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections.abc import Callable

import numpy as np

from . import tensors as tz
from .components import ComponentArray, Point
from .cosmo import default_box
from .errors import ExprSyntaxError, GeometryError
from .geomspec import GeometrySpec
from .orbits import find_circular_orbits, trajectory_csv, validate_orbit
from .symmetry import DEFAULT_SAMPLE_SIZE, DEFAULT_TOL, check_symmetry, default_sample

TENSORS = ("torsion", "nonmetricity", "contortion", "disformation", "levi-civita", "curvature")
EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# points

def _range(text: str) -> list[float]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return [lo] if n == 1 else [float(x) for x in np.linspace(lo, hi, n)]
    except ValueError:
        pass
    raise UsageError(f"bad range {text!r}; use VALUE or START:STOP:COUNT")


def parse_grid(text: str) -> list[Point]:
    """"t=0; r=1:10:4; theta=0.3:2.8:4; phi=0" -> points in t, r, theta, phi order."""
    axes = {"t": [0.0], "phi": [0.0]}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        name, sep, val = item.partition("=")
        name = name.strip()
        if not sep or name not in ("t", "r", "theta", "phi"):
            raise UsageError(f"bad grid item {item!r}")
        axes[name] = _range(val.strip())
    missing = [n for n in ("r", "theta") if n not in axes]
    if missing:
        raise UsageError(f"grid needs {' and '.join(missing)}")
    return [Point(t, r, th, ph) for t in axes["t"] for r in axes["r"]
            for th in axes["theta"] for ph in axes["phi"]]


def parse_point(text: str) -> Point:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad point {text!r}") from None
    if len(vals) == 3:
        vals.append(0.0)
    if len(vals) != 4:
        raise UsageError(f"a point is t,r,theta[,phi], got {text!r}")
    return Point(*vals)


def _points(args, required: bool = True) -> list[Point]:
    pts = [parse_point(s) for s in args.point or []]
    if args.grid:
        pts += parse_grid(args.grid)
    if required and not pts:
        raise UsageError("give --point or --grid")
    return pts


def _point_json(p: Point) -> dict:
    return {"t": p.t, "r": p.r, "theta": p.theta, "phi": p.phi}


# ---------------------------------------------------------------------------
# output

def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, (np.floating, np.integer)):
        return _clean(obj.item())
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj, lines: bool = False) -> str:
    obj = _clean(obj)
    if lines:
        return "".join(json.dumps(o, allow_nan=False) + "\n" for o in obj)
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in _clean(row)])
    return buf.getvalue()


def _component_rows(records: list[dict]) -> list[list]:
    rows = []
    for i, rec in enumerate(records):
        p = rec["point"]
        for q, comps in rec.items():
            if q == "point" or not isinstance(comps, dict):
                continue
            for idx, val in comps.items():
                if isinstance(val, dict):
                    continue
                rows.append([i, p["t"], p["r"], p["theta"], p["phi"], q, idx, val])
    return rows


COMPONENT_HEADER = ["point", "t", "r", "theta", "phi", "quantity", "index", "value"]


# ---------------------------------------------------------------------------
# subcommands

def cmd_eval(args, spec: GeometrySpec) -> tuple[int, str]:
    records = []
    for p in _points(args):
        rec = {"point": _point_json(p), "g": spec.metric_components(p).to_json(),
               "Gamma": spec.connection_components(p).to_json()}
        th = spec.tetrad(p)
        if th is not None:
            rec["tetrad"] = th.to_json()
        w = spec.spin_connection(p)
        if w is not None:
            rec["spin"] = w.to_json()
        records.append(rec)
    if args.format == "csv":
        return EXIT_OK, _csv(COMPONENT_HEADER, _component_rows(records))
    return EXIT_OK, dumps({"kind": spec.kind, "points": records})


def _closed_form(name: str, spec: GeometrySpec, p: Point) -> ComponentArray | None:
    m, c = spec.metric_params, spec.connection_params
    if name == "torsion":
        return tz.torsion(c, p)
    if name == "curvature":
        return tz.curvature_explicit(c, p)
    if m is None:
        return None
    if name == "nonmetricity":
        return tz.nonmetricity(m, c, p)
    if name == "levi-civita":
        return tz.levi_civita(m, p)
    tq = spec.tq_params()
    return tz.contortion(m, tq, p) if name == "contortion" else tz.disformation(m, tq, p)


def _definition(name: str, spec: GeometrySpec, p: Point) -> ComponentArray:
    d3 = ("down", "down", "down")
    G = spec.connection(p)
    if name == "torsion":
        return ComponentArray(tz.torsion_from_connection(G), ("up", "down", "down"))
    if name == "curvature":
        return tz.curvature_generic(spec.connection, p)
    g = spec.metric(p)
    dg = tz.fd_derivative(spec.metric, p)
    if name == "levi-civita":
        return ComponentArray(tz.christoffel_lowered(dg), d3)
    Q = tz.nonmetricity_from_connection(g, dg, G)
    if name == "nonmetricity":
        return ComponentArray(Q, d3)
    if name == "contortion":
        return ComponentArray(tz.contortion_from_torsion(g, tz.torsion_from_connection(G)), d3)
    return ComponentArray(tz.disformation_from_nonmetricity(Q), d3)


def cmd_tensors(args, spec: GeometrySpec) -> tuple[int, str]:
    names = args.tensor or list(TENSORS)
    records = []
    for p in _points(args):
        rec = {"point": _point_json(p)}
        for name in names:
            block = {}
            closed = _closed_form(name, spec, p) if args.oracle in ("closed", "both") else None
            if args.oracle in ("closed", "both"):
                block["closed"] = None if closed is None else closed.to_json()
            definition = _definition(name, spec, p) if args.oracle in ("definition", "both") or closed is None else None
            if definition is not None:
                block["definition"] = definition.to_json()
            arrays = [a for a in (closed, definition) if a is not None]
            block["max_abs"] = max(a.max_abs() for a in arrays)
            if closed is not None and definition is not None:
                block["max_discrepancy"] = float(np.max(np.abs(closed.data - definition.data)))
            rec[name] = block
        records.append(rec)
    if args.format == "csv":
        rows = []
        for i, rec in enumerate(records):
            p = rec["point"]
            for name in names:
                for route in ("closed", "definition"):
                    for idx, val in (rec[name].get(route) or {}).items():
                        rows.append([i, p["t"], p["r"], p["theta"], p["phi"], f"{name}:{route}", idx, val])
        return EXIT_OK, _csv(COMPONENT_HEADER, rows)
    return EXIT_OK, dumps({"kind": spec.kind, "points": records})


def _sample(args, spec: GeometrySpec) -> list[Point]:
    pts = _points(args, required=False)
    if pts:
        return pts
    box = default_box(spec.cosmo_k) if spec.cosmo_k is not None else None
    return default_sample(args.samples, box)


def _verdict_output(args, verdict) -> tuple[int, str]:
    code = EXIT_OK if verdict.passed else EXIT_FAIL
    if not verdict.passed and verdict.violated:
        print(f"violated constraints: {', '.join(verdict.violated)}", file=sys.stderr)
    if args.format == "csv":
        rows = [[g.generator, g.metric_residual, g.metric_component,
                 g.connection_residual, g.connection_component] for g in verdict.generators]
        return code, _csv(["generator", "metric_residual", "metric_component",
                           "connection_residual", "connection_component"], rows)
    return code, dumps(verdict.to_json())


def cmd_check(args, spec: GeometrySpec) -> tuple[int, str]:
    group = args.group.upper()
    if group == "COSMO" and spec.cosmo_k is None:
        raise UsageError("--group cosmo needs a spec of kind 'cosmo'")
    tol = DEFAULT_TOL if args.tol is None else args.tol
    return _verdict_output(args, check_symmetry(spec, group, _sample(args, spec), tol))


def cmd_orbits(args, spec: GeometrySpec) -> tuple[int, str]:
    lo_hi = args.r_range.split(":")
    try:
        r_range = (float(lo_hi[0]), float(lo_hi[1]))
    except (ValueError, IndexError):
        raise UsageError(f"bad --r-range {args.r_range!r}; use START:STOP") from None
    kwargs = {} if args.tol is None else {"tol": args.tol}
    sols = find_circular_orbits(spec, r_range, args.grid, **kwargs)
    out = []
    for i, sol in enumerate(sols):
        rec = sol.to_json()
        if args.validate:
            val = validate_orbit(spec, sol, args.validate)
            rec["validation"] = val.to_json()
            if args.trajectory and i == args.trajectory_index:
                with open(args.trajectory, "w", encoding="utf-8") as fh:
                    fh.write(trajectory_csv(val.trajectory))
        out.append(rec)
    if args.format == "csv":
        header = ["R", "Theta", "Omega", "N", "family", "res1", "res2", "res3", "res4"]
        if args.validate:
            header += ["r_drift", "theta_drift"]
        rows = []
        for rec in out:
            row = [rec["R"], rec["Theta"], rec["Omega"], rec["N"], rec["family"], *rec["residuals"]]
            if args.validate:
                row += [rec["validation"]["r_drift"], rec["validation"]["theta_drift"]]
            rows.append(row)
        return EXIT_OK, _csv(header, rows)
    return EXIT_OK, dumps(out, lines=True)


def cmd_cosmo(args, spec: GeometrySpec) -> tuple[int, str]:
    if spec.kind != "cosmo":
        raise UsageError("the cosmo subcommand needs a spec of kind 'cosmo'")
    records = []
    for p in _points(args, required=False):
        direct = spec.direct_connection(p)
        records.append({
            "point": _point_json(p),
            "g": spec.metric_components(p).to_json(),
            "Gamma": direct.to_json(),
            "c_form_discrepancy": float(np.max(np.abs(direct.data - spec.connection(p)))),
        })
    tol = DEFAULT_TOL if args.tol is None else args.tol
    group = "COSMO+O3" if args.o3 else "COSMO"
    verdict = check_symmetry(spec, group, default_sample(args.samples, default_box(spec.cosmo_k)), tol)
    code = EXIT_OK if verdict.passed else EXIT_FAIL
    if args.format == "csv":
        return code, _csv(COMPONENT_HEADER, _component_rows(records))
    return code, dumps({"points": records, "verdict": verdict.to_json()})


COMMANDS: dict[str, Callable] = {
    "eval": cmd_eval, "tensors": cmd_tensors, "check": cmd_check,
    "orbits": cmd_orbits, "cosmo": cmd_cosmo,
}


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="geometry spec JSON file")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tol", type=float, help="tolerance override")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    pts = argparse.ArgumentParser(add_help=False)
    pts.add_argument("--point", action="append", help="t,r,theta[,phi]; repeatable")
    pts.add_argument("--grid", help='e.g. "t=0; r=1:10:4; theta=0.3:2.8:4; phi=0"')

    ap = argparse.ArgumentParser(prog="spheraffine", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common, pts], help="metric, connection, tetrad, spin connection")
    t = sub.add_parser("tensors", parents=[common, pts], help="torsion, nonmetricity, curvature ...")
    t.add_argument("--tensor", action="append", choices=TENSORS)
    t.add_argument("--oracle", choices=("closed", "definition", "both"), default="closed")
    c = sub.add_parser("check", parents=[common, pts], help="symmetry verdict")
    c.add_argument("--group", choices=("so3", "o3", "cosmo", "SO3", "O3", "COSMO"), default="so3")
    c.add_argument("--samples", type=int, default=DEFAULT_SAMPLE_SIZE)
    o = sub.add_parser("orbits", parents=[common], help="circular autoparallel orbits")
    o.add_argument("--r-range", default="3:20")
    o.add_argument("--grid", type=int, default=64)
    o.add_argument("--validate", type=int, default=0, metavar="STEPS")
    o.add_argument("--trajectory", help="CSV file for one validated trajectory")
    o.add_argument("--trajectory-index", type=int, default=0)
    k = sub.add_parser("cosmo", parents=[common, pts], help="cosmological geometry and its verdict")
    k.add_argument("--o3", action="store_true", help="also require reflection symmetry")
    k.add_argument("--samples", type=int, default=DEFAULT_SAMPLE_SIZE)
    return ap


def _describe(exc: Exception) -> str:
    if isinstance(exc, ExprSyntaxError):
        where = getattr(exc, "field", None)
        return f"{where}: syntax error {exc}" if where else f"syntax error {exc}"
    return str(exc)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = GeometrySpec.load(args.spec)
        code, text = COMMANDS[args.command](args, spec)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (GeometryError, UsageError, OSError, ArithmeticError, ValueError) as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return EXIT_ERROR
    return code


if __name__ == "__main__":
    sys.exit(main())
