"""Command-line surface: identity checks, windings, index pairings, lattice
indices, Falk pairings, and parameter sweeps.

Exit codes: 0 success, 2 symbol-singular (or inconclusive truncation),
3 invalid input, 4 identity-residual breach.  Reports are JSON, grids are
CSV; every command is deterministic for a fixed configuration and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .cantor import Cylinder, ProductMeasure
from .index import map_ordered, s_index_exact, s_index_montecarlo
from .onedim import InconclusiveTruncationError, build_line, fredholm_index
from .symbol import (SymbolLoop, SymbolSingularError, falk_cylinder_pairing,
                     falk_pairing, loop_min, poles, solve_w0,
                     winding_quadrature, winding_residues)
from .treeop import IDENTITY_NAMES, build_bundle, check_identities
from .walk import ValidationError, parse_line_walk, parse_walk

EXIT_OK = 0
EXIT_SINGULAR = 2
EXIT_INVALID = 3
EXIT_RESIDUAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None


def _write_out(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_measure(spec: str) -> ProductMeasure:
    if spec == "uniform":
        return ProductMeasure.uniform()
    if spec.startswith("bernoulli:"):
        try:
            theta = float(spec.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad measure {spec!r}") from None
        return ProductMeasure.bernoulli(theta)
    raise ValidationError(f"unknown measure {spec!r} (use uniform or bernoulli:THETA)")


def _parse_grid(text: str) -> list[float]:
    """Comma list '0,0.25,0.5' or range 'start:stop:step' (stop inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"bad grid {text!r} (use start:stop:step)")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise ValidationError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(max(count, 0))]
    if not text.strip():
        return []
    return [float(x) for x in text.split(",")]


def cmd_check(args) -> int:
    w = parse_walk(_read_text(args.walk))
    bundle = build_bundle(w, args.depth)
    residuals = check_identities(bundle)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["identity", "residual", "threshold", "status"])
    worst_over = False
    for name in IDENTITY_NAMES:
        value = residuals[name]
        ok = value < args.tol
        worst_over = worst_over or not ok
        writer.writerow([name, repr(value), repr(args.tol), "pass" if ok else "fail"])
    _write_out(buf.getvalue(), args.out)
    return EXIT_RESIDUAL if worst_over else EXIT_OK


def _loop_from_args(args) -> SymbolLoop:
    a = args.a
    if abs(a) >= 1:
        raise ValidationError(f"|a| must be below 1, got {a}")
    b = math.sqrt(1.0 - a * a) * complex(math.cos(args.b_phase), math.sin(args.b_phase))
    if args.q_re is None and args.q_im is None:
        q = complex(math.sqrt(max(1.0 - args.p ** 2, 0.0)), 0.0)
    else:
        q = complex(args.q_re or 0.0, args.q_im or 0.0)
    try:
        return SymbolLoop(a=a, b=b, p=args.p, q=q)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def cmd_winding(args) -> int:
    s = _loop_from_args(args)
    min_abs, witness = loop_min(s, args.samples)
    doc: dict = {
        "a": s.a, "p": s.p,
        "q": {"re": s.q.real, "im": s.q.imag},
        "min_abs_loop": min_abs,
    }
    singular = abs(s.a) == abs(s.p)
    if singular:
        doc["status"] = "singular"
        doc["witness"] = {"re": witness.real, "im": witness.imag}
        if s.a != 0 and s.q != 0:
            w0 = solve_w0(s)
            doc["w0"] = {"re": w0.real, "im": w0.imag, "abs": abs(w0)}
    else:
        doc["status"] = "ok"
        doc["winding_quadrature"] = winding_quadrature(s, args.samples)
        doc["winding_residues"] = winding_residues(s)
        if s.q != 0:
            data = poles(s)
            doc["poles"] = {
                "alpha": {"re": data.alpha.real, "im": data.alpha.imag, "abs": abs(data.alpha)},
                "beta": {"re": data.beta.real, "im": data.beta.imag, "abs": abs(data.beta)},
            }
    _write_out(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_SINGULAR if singular else EXIT_OK


def cmd_index(args) -> int:
    w = parse_walk(_read_text(args.walk))
    measure = _parse_measure(args.measure)
    workers = max(args.workers, 1)
    if args.mode == "exact":
        report = s_index_exact(w, measure, workers=workers)
    else:
        report = s_index_montecarlo(w, measure, samples=args.samples,
                                    seed=args.seed, workers=workers)
    _write_out(report.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_onedim(args) -> int:
    spec = parse_line_walk(_read_text(args.walk))
    try:
        bundle = build_line(spec, args.halfwidth)
        result = fredholm_index(bundle, tol=args.tol)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    _write_out(json.dumps(result.to_json(), sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_falk(args) -> int:
    if args.cylinder is not None:
        measure = _parse_measure(args.measure)
        value = falk_cylinder_pairing(Cylinder(args.cylinder), measure, args.trunc)
        doc = {"cylinder": args.cylinder, "measure": args.measure,
               "trunc": args.trunc, "pairing": value}
    else:
        if args.f_value is None:
            raise ValidationError("need either --f-value or --cylinder")
        value = falk_pairing(args.f_value, args.trunc)
        doc = {"f": args.f_value, "trunc": args.trunc, "pairing": value}
    _write_out(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    p_grid = _parse_grid(args.p_grid)
    a_grid = _parse_grid(args.a_grid)
    points = [(p, a) for p in p_grid for a in a_grid]
    for _, a in points:
        if abs(a) >= 1:
            raise ValidationError(f"grid value |a| = {abs(a)} not below 1")

    def row(point):
        p, a = point
        q = math.sqrt(max(1.0 - p * p, 0.0))
        s = SymbolLoop(a=a, b=math.sqrt(1.0 - a * a), p=p, q=q)
        min_abs, _ = loop_min(s, args.samples)
        # grid arithmetic can land within float noise of the singular locus
        # |a| = |p|; such rows are flagged, never emitted as data
        if abs(abs(a) - abs(p)) < 1e-9:
            return [repr(p), repr(a), "", "", repr(min_abs), "singular"]
        return [repr(p), repr(a), winding_residues(s),
                repr(winding_quadrature(s, args.samples)), repr(min_abs), "ok"]

    rows = map_ordered(row, points, max(args.workers, 1))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["p", "a", "winding_residues", "winding_quadrature",
                     "min_abs_loop", "status"])
    writer.writerows(rows)
    _write_out(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="chiralwalk",
                     description="Chirality-operator index experiments on trees and lines.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="identity residual table (CSV)")
    p_check.add_argument("--walk", required=True, help="tree walk JSON file")
    p_check.add_argument("--depth", type=int, default=8)
    p_check.add_argument("--tol", type=float, default=1e-10)
    p_check.add_argument("--out")
    p_check.set_defaults(func=cmd_check)

    p_wind = sub.add_parser("winding", help="winding of one boundary loop (JSON)")
    p_wind.add_argument("--a", type=float, required=True)
    p_wind.add_argument("--p", type=float, default=0.0)
    p_wind.add_argument("--q-re", type=float, default=None)
    p_wind.add_argument("--q-im", type=float, default=None)
    p_wind.add_argument("--b-phase", type=float, default=0.0)
    p_wind.add_argument("--samples", type=int, default=4096)
    p_wind.add_argument("--out")
    p_wind.set_defaults(func=cmd_winding)

    p_index = sub.add_parser("index", help="measure-paired index report (JSON)")
    p_index.add_argument("--walk", required=True)
    p_index.add_argument("--measure", default="uniform")
    p_index.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p_index.add_argument("--samples", type=int, default=4000)
    p_index.add_argument("--seed", type=int, default=0)
    p_index.add_argument("--workers", type=int, default=1,
                         help="threads for the per-cell windings; never changes values")
    p_index.add_argument("--out")
    p_index.set_defaults(func=cmd_index)

    p_line = sub.add_parser("onedim", help="lattice Fredholm index (JSON)")
    p_line.add_argument("--walk", required=True, help="line walk JSON file")
    p_line.add_argument("--halfwidth", type=int, default=300)
    p_line.add_argument("--tol", type=float, default=1e-8)
    p_line.add_argument("--out")
    p_line.set_defaults(func=cmd_onedim)

    p_falk = sub.add_parser("falk", help="Falk trace pairing (JSON)")
    p_falk.add_argument("--f-value", type=int, choices=[0, 1], default=None)
    p_falk.add_argument("--cylinder", default=None, help="aggregate over this cylinder prefix")
    p_falk.add_argument("--measure", default="uniform")
    p_falk.add_argument("--trunc", type=int, default=200)
    p_falk.add_argument("--out")
    p_falk.set_defaults(func=cmd_falk)

    p_sweep = sub.add_parser("sweep", help="winding phase diagram over (p, a) (CSV)")
    p_sweep.add_argument("--p-grid", default="0,0.25,0.5,0.75")
    p_sweep.add_argument("--a-grid", default="-0.95:0.95:0.05")
    p_sweep.add_argument("--samples", type=int, default=4096)
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="threads over grid points; rows are always "
                              "emitted in canonical order")
    p_sweep.add_argument("--out")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SymbolSingularError as exc:
        cell = f" (cell {exc.cell!r})" if exc.cell else ""
        print(f"symbol singular: {exc}{cell}", file=sys.stderr)
        return EXIT_SINGULAR
    except InconclusiveTruncationError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
