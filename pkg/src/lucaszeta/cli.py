"""Command-line front end: ``lucaszeta eval | poles | verify``.

Results go to stdout as JSON or CSV, diagnostics to stderr.  Exit codes:
0 success, 1 a verify check or a numerical method failed, 2 invalid input,
3 the point is at or too close to a pole.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
import warnings
from typing import Sequence

from . import checks
from .errors import ConvergenceError, DomainError, ParameterError, PoleError
from .hurwitz import geometric_q0_suite, hurwitz_continued, hurwitz_direct, hurwitz_pole_map
from .lucas_core import DEFAULT_CONFIG, PRESETS, EvalConfig, classify_ratio, geomsum_params, validate_params
from .lucas_zeta import Origin, PoleSpec, Region, zeta_continued, zeta_direct, zeta_poles
from .oracle import q0_hurwitz
from .theta import build_expansion, eval_expansion, theta_direct

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_POLE = 0, 1, 2, 3
CSV_HEADER = ["re", "im", "residue_re", "residue_im", "origins", "classification_certainty"]


class UsageError(Exception):
    """Bad flag values; maps to exit code 2."""


def _num(x: float) -> float | None:
    return float(f"{x:.17g}") if math.isfinite(x) else None


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def parse_complex(text: str) -> complex:
    """'RE,IM' or a bare real."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected RE,IM but got {text!r}")


def load_config(path: str | None, u0_one: bool) -> EvalConfig:
    """EvalConfig with overrides from a flat key=value file (# starts a comment)."""
    overrides: dict = {}
    if path:
        fields = {f.name: f.type for f in dataclasses.fields(EvalConfig)}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = (part.strip() for part in line.partition("="))
                if not sep or key not in fields:
                    raise UsageError(f"{path}:{lineno}: unknown or malformed setting {line!r}")
                kind = fields[key]
                if kind in (bool, "bool"):
                    if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                        raise UsageError(f"{path}:{lineno}: {key} needs a boolean")
                    overrides[key] = value.lower() in ("true", "1", "yes")
                else:
                    try:
                        overrides[key] = int(value) if kind in (int, "int") else float(value)
                    except ValueError:
                        raise UsageError(f"{path}:{lineno}: {key} needs a number") from None
    if u0_one:
        overrides["u0_one"] = True
    try:
        return dataclasses.replace(DEFAULT_CONFIG, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def resolve_sequence(args):
    """(params, q0_base): q0_base is set for the Q = 0 geometric preset."""
    if args.preset:
        name, _, arg = args.preset.partition(":")
        if name in PRESETS and not arg:
            return validate_params(*PRESETS[name]), None
        if name in ("geomsum", "q0") and arg:
            try:
                a = float(arg)
            except ValueError:
                raise UsageError(f"bad preset argument {arg!r}") from None
            if not a > 1:
                raise UsageError(f"preset {name} needs a > 1")
            return (geomsum_params(a), None) if name == "geomsum" else (None, a)
        raise UsageError(f"unknown preset {args.preset!r}")
    if args.P is None or args.Q is None:
        raise UsageError("give --preset or both --P and --Q")
    return validate_params(args.P, args.Q), None


def _params_json(params, q0_base) -> dict:
    if q0_base is not None:
        return {"P": None, "Q": 0.0, "a": _num(q0_base), "b": 0.0, "D": None}
    return {k: _num(getattr(params, k)) for k in ("P", "Q", "a", "b", "D")}


def _value(fn: str, method: str, params, q0_base, s, z, t, m, cfg):
    """(value, method used, error estimate, notes)."""
    notes: list[str] = []
    if fn == "theta":
        if t is None:
            raise UsageError("--fn theta needs --t")
        if q0_base is not None:
            raise UsageError("theta is not provided for the q0 preset")
        if method == "continued":
            exp = build_expansion(params, classify_ratio(params, cfg), m, cfg)
            # the expansion is asymptotic; its error is O(t^{2m+1}) with no computed constant
            return complex(eval_expansion(exp, params, t)), "continued", None, [f"m={exp.m}"]
        return complex(theta_direct(params, t, cfg)), "direct", cfg.eps_series, notes
    if s is None:
        raise UsageError(f"--fn {fn} needs --s")
    if method == "auto":
        method = "direct" if s.real >= cfg.sigma_min else "continued"
    if fn == "zeta":
        if q0_base is not None:
            v = geometric_q0_suite(q0_base).zeta(s)
            return v, "closed-form", 0.0, notes
        v = zeta_direct(params, s, cfg) if method == "direct" else zeta_continued(params, s, cfg)
        return v, method, cfg.eps_series * max(1.0, abs(v)), notes
    if z is None:
        raise UsageError("--fn hurwitz needs --z")
    if q0_base is not None:
        try:
            v = complex(q0_hurwitz(q0_base, s, z, dps=20))
        except ZeroDivisionError:
            raise PoleError(f"s={s!r} is a pole of the geometric Hurwitz function") from None
        return v, "continued", 1e-15 * max(1.0, abs(v)), notes
    if method == "direct":
        v = hurwitz_direct(params, s, z, cfg)
        return v, "direct", cfg.eps_series * max(1.0, abs(v)), notes
    rep = hurwitz_continued(params, s, z, m, cfg)
    return rep.value, "continued", rep.quad_error_estimate, [f"m={rep.m_used}", *rep.warnings]


def cmd_eval(args, cfg: EvalConfig) -> int:
    params, q0_base = resolve_sequence(args)
    s = parse_complex(args.s) if args.s else None
    z = parse_complex(args.z) if args.z else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value, method, err, notes = _value(args.fn, args.method, params, q0_base, s, z, args.t, args.m, cfg)
    out = {
        "params": _params_json(params, q0_base),
        "input": {
            "fn": args.fn,
            "s": None if s is None else {"re": _num(s.real), "im": _num(s.imag)},
            "z": None if z is None else {"re": _num(z.real), "im": _num(z.imag)},
            "t": args.t,
            "m": args.m,
            "method": args.method,
            "u0_one": cfg.u0_one,
        },
        "value": {"re": _num(value.real), "im": _num(value.imag)},
        "method": method,
        "error_estimate": None if err is None else _num(err),
        "warnings": [str(w.message) for w in caught] + notes,
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _q0_poles(a: float, fn: str, region: Region, z) -> list[PoleSpec]:
    suite = geometric_q0_suite(a)
    if fn == "hurwitz":
        return suite.pole_map(region, z)
    L = math.log(a)
    out = []
    for k in range(math.floor(region.im_min * L / (2 * math.pi)), math.ceil(region.im_max * L / (2 * math.pi)) + 1):
        loc = complex(0.0, 2 * k * math.pi / L)
        if region.contains(loc):
            out.append(PoleSpec(loc, (Origin(None, 0, k),), complex(1 / L), "exact"))
    return out


def cmd_poles(args, cfg: EvalConfig) -> int:
    params, q0_base = resolve_sequence(args)
    try:
        region = Region(args.re_min, args.re_max, args.im_min, args.im_max)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    z = parse_complex(args.z) if args.z else None
    if args.fn == "hurwitz" and z is None:
        raise UsageError("--fn hurwitz needs --z")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if q0_base is not None:
            poles = _q0_poles(q0_base, args.fn, region, z)
        elif args.fn == "zeta":
            poles = zeta_poles(params, region, cfg)
        else:
            poles = hurwitz_pole_map(params, classify_ratio(params, cfg), region, z, cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    poles = sorted(poles, key=lambda p: (p.location.real, p.location.imag))
    rows = [
        [
            _fmt(p.location.real),
            _fmt(p.location.imag),
            _fmt(p.residue.real),
            _fmt(p.residue.imag),
            ";".join(o.label() for o in p.origins),
            p.certainty,
        ]
        for p in poles
    ]
    if args.format == "json":
        records = [
            {
                "re": _num(p.location.real),
                "im": _num(p.location.imag),
                "residue_re": _num(p.residue.real),
                "residue_im": _num(p.residue.imag),
                "origins": [o.label() for o in p.origins],
                "classification_certainty": p.certainty,
            }
            for p in poles
        ]
        json.dump(records, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)
    return EXIT_OK


def cmd_verify(args, cfg: EvalConfig) -> int:
    results = []
    first_failure = None
    for check in checks.run(args.suite):
        results.append(check)
        mark = "PASS" if check.passed else "FAIL"
        print(f"{mark} [{check.suite}] {check.name}: error {check.error:.3e} (tol {check.tolerance:.0e})", file=sys.stderr)
        if not check.passed and first_failure is None:
            first_failure = check
    json.dump(
        {"suite": args.suite, "passed": first_failure is None, "checks": [c.as_dict() for c in results]},
        sys.stdout,
        indent=2,
    )
    sys.stdout.write("\n")
    if first_failure is not None:
        print(f"first failing check: [{first_failure.suite}] {first_failure.name}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lucaszeta", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", help="fibonacci | pell | jacobsthal | geomsum:A | q0:A")
    common.add_argument("--P", type=float)
    common.add_argument("--Q", type=float)
    common.add_argument("--config", metavar="FILE", help="key=value overrides of the evaluation settings")
    common.add_argument("--u0-one", action="store_true", help="use U_0 = 1 instead of U_0 = 0")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate zeta, hurwitz or theta at one point")
    ev.add_argument("--fn", choices=["zeta", "hurwitz", "theta"], required=True)
    ev.add_argument("--s", metavar="RE,IM")
    ev.add_argument("--z", metavar="RE,IM")
    ev.add_argument("--t", type=float)
    ev.add_argument("--m", type=int)
    ev.add_argument("--method", choices=["direct", "continued", "auto"], default="auto")

    po = sub.add_parser("poles", parents=[common], help="list poles and residues in a box")
    po.add_argument("--fn", choices=["zeta", "hurwitz"], required=True)
    po.add_argument("--re-min", type=float, required=True)
    po.add_argument("--re-max", type=float, required=True)
    po.add_argument("--im-min", type=float, required=True)
    po.add_argument("--im-max", type=float, required=True)
    po.add_argument("--z", metavar="RE,IM")
    po.add_argument("--format", choices=["csv", "json"], default="csv")

    ve = sub.add_parser("verify", parents=[common], help="run reduced-scale verification suites")
    ve.add_argument("--suite", choices=[*checks.SUITES, "all"], default="all")
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--s -1,0`` into ``--s=-1,0``; argparse would read -1,0 as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok.startswith("--") and "=" not in tok and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(list(sys.argv[1:] if argv is None else argv)))
    handlers = {"eval": cmd_eval, "poles": cmd_poles, "verify": cmd_verify}
    try:
        cfg = load_config(args.config, args.u0_one)
        return handlers[args.command](args, cfg)
    except ParameterError as exc:
        print(f"error: parameter condition '{exc.clause}' violated: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PoleError as exc:
        print(f"error: pole: {exc}", file=sys.stderr)
        return EXIT_POLE
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"error: numerical method failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
