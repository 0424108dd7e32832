"""Command-line front end: apply operators, emit spectral curves, verify, tabulate norms.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__, cesaro, spectra, verify
from .cesaro import Kind, OperatorSpec
from .errors import CesaroLabError, ConvergenceError, ParameterError, UnsupportedFunction
from .funcspace import (Constant, Domain, Exponential, Gaussian, LinComb, MittagLefflerFn,
                        PowerKernel, ShiftedPower, SobolevParams, default_grid, from_json, parse_grid)

__all__ = ["main", "build_parser", "parse_fn", "EXIT_OK", "EXIT_FAIL", "EXIT_INPUT", "EXIT_CONVERGENCE"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONVERGENCE = 0, 1, 2, 3
OUTDIR_ENV = "CESAROLAB_OUTDIR"

_OPS = {"cesaro": Kind.CESARO, "cesaro-dual": Kind.CESARO_DUAL}


class InputError(Exception):
    """Invalid command-line input; maps to exit code 2."""


def _num(text: str) -> complex | float:
    try:
        v = complex(text.replace("i", "j")) if ("j" in text or "i" in text) else float(text)
    except ValueError:
        raise InputError(f"not a number: {text!r}") from None
    return v


def _atom(text: str, domain: Domain):
    name, *vals = text.strip().split(":")
    nums = [_num(v) for v in vals]
    try:
        if name == "exp" and len(nums) == 1:
            return Exponential(nums[0])
        if name == "powerkernel" and len(nums) == 1:
            return PowerKernel(nums[0])
        if name == "shiftedpower" and len(nums) == 2:
            return ShiftedPower(nums[0], nums[1])
        if name == "ml" and len(nums) == 2:
            return MittagLefflerFn(nums[0], nums[1])
        if name == "gauss" and len(nums) in (1, 2):
            return Gaussian(*nums)
        if name == "const" and len(nums) == 1:
            return Constant(nums[0], domain)
    except TypeError as exc:
        raise InputError(f"bad parameters in {text!r}: {exc}") from None
    raise InputError(f"unknown function descriptor {text!r}")


_COEF = re.compile(r"^\s*([-+0-9.eEij()]+)\s*\*\s*(.+)$")


def parse_fn(text: str, domain: Domain | None = None):
    """Parse ``exp:1``, ``shiftedpower:1:2``, ``2*gauss:1+0.5*gauss:2`` and the like."""
    if not text or not text.strip():
        raise InputError("empty function descriptor")
    dom = Domain(domain) if domain is not None else None
    parts = [p for p in re.split(r"(?<![eE:])\+", text) if p.strip()]
    terms = []
    for part in parts:
        m = _COEF.match(part)
        coef, body = (_num(m.group(1).strip("()")), m.group(2)) if m else (1.0, part)
        terms.append((coef, _atom(body, dom or Domain.HALF_LINE)))
    if len(terms) == 1 and terms[0][0] == 1.0:
        f = terms[0][1]
    else:
        f = LinComb(tuple(terms))
    if dom is not None and f.domain is not dom:
        raise InputError(f"function lives on the {f.domain.value}, not the {dom.value}")
    return f


# ---------------------------------------------------------------------------
# option handling


def _common(p: argparse.ArgumentParser, fn: bool = False):
    p.add_argument("--op", choices=sorted(_OPS), help="operator (default cesaro)")
    p.add_argument("--beta", type=float, help="order beta > 0 (default 1)")
    p.add_argument("--p", type=float, help="Lebesgue exponent (default 2)")
    p.add_argument("--config", help="JSON file with option values or a serialized function")
    if fn:
        p.add_argument("--fn", help="function descriptor, e.g. exp:1 or 2*gauss:1+gauss:2")
        p.add_argument("--domain", choices=[d.value for d in Domain], help="domain of the function")


def _output(p: argparse.ArgumentParser):
    p.add_argument("--out", help=f"output file (default: stdout, or ${OUTDIR_ENV}/<command>.<format>)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cesarolab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("apply", help="evaluate C_beta f or C*_beta f on a grid")
    _common(a, fn=True)
    g = a.add_mutually_exclusive_group()
    g.add_argument("--grid", help="log:a:b:n, lin:a:b:n or a comma list")
    g.add_argument("--at", help="evaluation point(s), comma separated")
    _output(a)

    s = sub.add_parser("spectrum", help="sample the spectral curve")
    _common(s)
    s.add_argument("--range", dest="range_", metavar="A:B", help="parameter range (default -40:40)")
    s.add_argument("--n", type=int, help="number of samples (default 1601)")
    s.add_argument("--circle-check", action="store_true", help="report the deviation from the beta = 1 circle")
    _output(s)

    v = sub.add_parser("verify", help="run the invariant suites")
    v.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    v.add_argument("--json", dest="json_out", help="write the JSON report here")
    v.add_argument("--check", action="append", help="run only the named check (repeatable)")

    n = sub.add_parser("norm", help="closed-form operator norms")
    n.add_argument("--op", choices=sorted(_OPS))
    n.add_argument("--beta", help="order(s), comma separated (default 1)")
    n.add_argument("--p", help="exponent(s), comma separated (default 2)")
    n.add_argument("--config", help="JSON file with option values")
    n.add_argument("--empirical", action="store_true", help="also report the best test-family ratio")
    n.add_argument("--json", dest="json_out", help="write the table as JSON here")
    return ap


_DEFAULTS = {"op": "cesaro", "beta": 1.0, "p": 2.0, "format": "csv", "n": 1601, "range_": "-40:40"}


def _apply_config(args) -> None:
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config!r}: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("config must be a JSON object")
        if "tag" in data:
            data = {"fn": data}
        for key, val in data.items():
            attr = {"range": "range_", "circle_check": "circle_check"}.get(key, key)
            if not hasattr(args, attr):
                raise InputError(f"unknown config key {key!r}")
            if getattr(args, attr) in (None, False):
                setattr(args, attr, val)
    for key, val in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, val)


def _spec(args) -> OperatorSpec:
    dom = Domain(getattr(args, "domain", None) or Domain.HALF_LINE)
    return OperatorSpec(_OPS[args.op], float(args.beta), dom, float(args.p))


def _function(args):
    fn = args.fn
    if fn is None:
        raise InputError("a function is required (--fn or --config)")
    dom = Domain(args.domain) if args.domain else None
    if isinstance(fn, dict):
        f = from_json(fn)
    else:
        f = parse_fn(fn, dom)
    if args.domain is None:
        args.domain = f.domain.value
    return f


def _destination(args, command: str):
    if args.out:
        return Path(args.out)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir:
        Path(outdir).mkdir(parents=True, exist_ok=True)
        return Path(outdir) / f"{command}.{args.format}"
    return None


def _emit(text: str, dest) -> None:
    if dest is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(dest).write_text(text if text.endswith("\n") else text + "\n")


def _rows_csv(t, vals) -> str:
    """Same layout as GridFn.to_csv, but for any number of (possibly unsorted) points."""
    lines = ["t,re,im"] + [f"{x:.17g},{v.real:.17g},{v.imag:.17g}" for x, v in zip(t, vals)]
    return "\n".join(lines) + "\n"


def _rows_json(t, vals, domain: Domain) -> str:
    return json.dumps({"domain": domain.value, "t": [float(x) for x in t],
                       "re": vals.real.tolist(), "im": vals.imag.tolist()})


# ---------------------------------------------------------------------------
# commands


def cmd_apply(args) -> int:
    f = _function(args)
    spec = _spec(args)
    if args.at is not None:
        t = parse_grid(str(args.at))
    elif args.grid is not None:
        t = parse_grid(str(args.grid))
    else:
        t = default_grid(spec.domain)
    vals = np.asarray(cesaro.apply_operator(spec, f, t), dtype=complex)
    text = _rows_csv(t, vals) if args.format == "csv" else _rows_json(t, vals, spec.domain)
    _emit(text, _destination(args, "apply"))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec = _spec(args)
    try:
        lo, hi = (float(x) for x in str(args.range_).split(":"))
    except ValueError:
        raise InputError(f"--range must be A:B, got {args.range_!r}") from None
    if args.circle_check and spec.beta != 1:
        raise InputError("--circle-check needs beta = 1")
    curve = spectra.spectral_curve(spec, lo, hi, int(args.n))
    text = curve.to_csv() if args.format == "csv" else curve.dumps()
    _emit(text, _destination(args, "spectrum"))
    if args.circle_check:
        c = spectra.circle_center(spec)
        dev = spectra.circle_check(curve)
        print(f"circle: center {c:.17g}, radius {c:.17g}, max deviation {dev:.3e} over {len(curve.params)} samples",
              file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run_suite(args.suite, args.check)
    if not report.checks:
        raise InputError("no checks selected")
    width = max(len(c.name) for c in report.checks)
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        extra = f"  [{c.error}]" if c.error else ""
        print(f"{mark}  {c.name:<{width}}  residual {c.residual:.3e}  tolerance {c.tolerance:.1e}"
              f"  {c.seconds:6.2f}s{extra}")
    npass = sum(c.passed for c in report.checks)
    print(f"{npass}/{len(report.checks)} checks passed")
    if args.json_out:
        Path(args.json_out).write_text(report.dumps() + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _floats(text, default) -> list[float]:
    if text is None:
        return [default]
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse number list {text!r}") from None


_NORM_FAMILY = (Exponential(1.0), ShiftedPower(1.0, 1.0), ShiftedPower(2.0, 2.0), ShiftedPower(0.5, 1.5))


def cmd_norm(args) -> int:
    kind = _OPS[args.op or "cesaro"]
    rows = []
    for b in _floats(args.beta, 1.0):
        for p in _floats(args.p, 2.0):
            spec = OperatorSpec(kind, b, Domain.HALF_LINE, p)
            row = {"op": args.op or "cesaro", "beta": b, "p": p, "norm": spectra.operator_norm(spec)}
            if args.empirical:
                params = SobolevParams(0.0, p)
                cands = list(_NORM_FAMILY) + [spectra.near_extremal(p, 0.01)]
                best = max(spectra.empirical_norm_ratio(spec, f, params) for f in cands)
                row["empirical"] = best
                row["gap"] = row["norm"] - best
            rows.append(row)
    head = f"{'op':<12}{'beta':>8}{'p':>8}{'norm':>14}"
    if args.empirical:
        head += f"{'empirical':>14}{'gap':>12}"
    print(head)
    for r in rows:
        line = f"{r['op']:<12}{r['beta']:>8g}{r['p']:>8g}{r['norm']:>14.10g}"
        if args.empirical:
            line += f"{r['empirical']:>14.10g}{r['gap']:>12.3e}"
        print(line)
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(rows, indent=2) + "\n")
    return EXIT_OK


_COMMANDS = {"apply": cmd_apply, "spectrum": cmd_spectrum, "verify": cmd_verify, "norm": cmd_norm}


_VALUE_OPTS = {"--range", "--at", "--grid", "--fn", "--beta", "--p"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--range -20:20`` into ``--range=-20:20`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv) and re.match(r"^-[0-9.]", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _apply_config(args)
        return _COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (InputError, ParameterError, UnsupportedFunction, CesaroLabError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
