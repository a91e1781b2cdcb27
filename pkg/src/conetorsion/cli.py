"""Command line driver: torsion reports, verification suites, spectrum dumps.

Exit codes: 0 success, 1 configuration or I/O error, 2 an audit or
verification check failed beyond its tolerance.  JSON payloads carry all
numbers as full-precision decimal strings and are byte-reproducible for a
fixed configuration (sorted keys, fixed reduction orders, no timestamps).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import spectrum, torsion, verify
from .precision import PrecisionError
from .spectrum import MalformedSpectrumFile, UnsupportedManifoldError

DEFAULT_PRECISION_ENV = "CONETORSION_PRECISION"


def _default_precision() -> int:
    raw = os.environ.get(DEFAULT_PRECISION_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise PrecisionError(f"bad {DEFAULT_PRECISION_ENV}={raw!r}")
    return 50


def parse_base(spec: str) -> spectrum.BaseManifold:
    """sphere:<n>[:rank] | torus:<n>[:rank[:scale]]"""
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind == "sphere":
            n = int(parts[1])
            rank = int(parts[2]) if len(parts) > 2 else 1
            return spectrum.sphere(n, rank)
        if kind == "torus":
            n = int(parts[1])
            rank = int(parts[2]) if len(parts) > 2 else 1
            scale = Fraction(parts[3]) if len(parts) > 3 else Fraction(1)
            return spectrum.torus(n, rank, scale)
    except (IndexError, ValueError) as exc:
        raise UnsupportedManifoldError(f"cannot parse base {spec!r}: {exc}") from exc
    raise UnsupportedManifoldError(f"unknown base family {kind!r} (use sphere:<n> or torus:<n>)")


def _load_base(args) -> spectrum.BaseManifold:
    if getattr(args, "spectrum_file", None):
        return spectrum.read_spectrum_file(args.spectrum_file)
    if getattr(args, "base", None):
        return parse_base(args.base)
    raise UnsupportedManifoldError("one of --base or --spectrum-file is required")


def _emit(payload: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload)
            if not payload.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")


def _breakdown_table(report: dict) -> str:
    rows = [("base", report["base"]), ("n", report["n"]), ("rank", report["rank"]),
            ("precision", report["precision"]), ("approximate", report["approximate"])]
    for key, val in report["breakdown"].items():
        rows.append((key, val if val is not None else "(unavailable)"))
    for key, val in report["audits"].items():
        rows.append((f"audit:{key}", val if val is not None else "(unavailable)"))
    width = max(len(str(k)) for k, _ in rows)
    return "\n".join(f"{str(k).ljust(width)}  {v}" for k, v in rows)


def cmd_torsion(args) -> int:
    M = _load_base(args)
    eps_list = tuple(Fraction(e) for e in args.eps.split(",")) if args.eps else (
        Fraction(1, 2), Fraction(1, 4))
    for e in eps_list:
        if not 0 < e < 1:
            raise UnsupportedManifoldError(f"eps must lie in (0,1), got {e}")
    report = torsion.torsion_report(M, args.precision, eps_list)
    if args.format == "json":
        _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    else:
        _emit(_breakdown_table(report), args.out)
    gap = report["audits"].get("headline_gap")
    if gap is not None and abs(float(gap)) > 1e-6:
        return 2
    cancel = report["audits"].get("eps_cancel")
    if cancel is not None and abs(float(cancel)) > 1e-10:
        return 2
    return 0


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    lines = []
    all_passed = True
    for name in names:
        fn = verify.SUITES[name]
        kwargs = {}
        if name == "dm" and args.rmax:
            kwargs["rmax"] = args.rmax
        if name == "detratio":
            kwargs["grid"] = args.grid
        res = fn(**kwargs)
        all_passed = all_passed and res["passed"]
        lines.append(json.dumps(res, sort_keys=True))
    _emit("\n".join(lines), args.out)
    return 0 if all_passed else 2


def cmd_spectrum(args) -> int:
    M = _load_base(args)
    text = spectrum.spectrum_text(M, Fraction(args.cutoff))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conetorsion",
        description="Analytic torsion of even-dimensional cones: reports and verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", help="sphere:<n>[:rank] or torus:<n>[:rank[:scale]]")
    common.add_argument("--spectrum-file", help="path to a spectrum file")
    common.add_argument("--precision", type=int, default=_default_precision(),
                        help="working precision in decimal digits (>= 20)")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default="json")

    p_t = sub.add_parser("torsion", parents=[common], help="full torsion breakdown report")
    p_t.add_argument("--eps", help="comma-separated truncation radii for the audits, e.g. 1/2,1/4")
    p_t.set_defaults(fn=cmd_torsion)

    p_v = sub.add_parser("verify", parents=[common], help="run verification suites")
    p_v.add_argument("--suite", default="all", choices=sorted(verify.SUITES) + ["all"])
    p_v.add_argument("--rmax", type=int, default=9)
    p_v.add_argument("--grid", default="small", choices=sorted(verify.DETRATIO_GRID))
    p_v.set_defaults(fn=cmd_verify)

    p_s = sub.add_parser("spectrum", parents=[common], help="dump a base spectrum file")
    p_s.add_argument("--cutoff", required=True, help="inclusive cutoff in nu")
    p_s.set_defaults(fn=cmd_spectrum)
    return ap


def main(argv=None) -> int:
    try:
        ap = build_parser()
    except PrecisionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    args = ap.parse_args(argv)
    if args.precision < 20:
        sys.stderr.write("error: precision must be at least 20 digits\n")
        return 1
    try:
        return args.fn(args)
    except (UnsupportedManifoldError, MalformedSpectrumFile, PrecisionError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
