"""Command-line entry point.

Exit codes: 0 success, 1 a failed certificate or violated invariant, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from .interval import ComplexInterval, Interval, precision

ENV_PRECISION = "ZEROREPULSION_PRECISION"
DEFAULTS = {"format": "table", "precision": 80, "jobs": 1}


class UsageError(Exception):
    pass


# -- config ------------------------------------------------------------------------

def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; blank lines and ``#`` comments are ignored."""
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _resolve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill unset options from the config file, then the environment, then defaults."""
    config = read_config(args.config) if args.config else {}
    known = {a.dest for a in parser._actions} - {"help", "config", "command"}
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    for action in parser._actions:
        dest = action.dest
        if dest not in config or getattr(args, dest, None) not in (None, [], False):
            continue
        value = config[dest]
        if isinstance(action, argparse._StoreTrueAction):
            setattr(args, dest, value.lower() in ("1", "true", "yes", "on"))
            continue
        try:
            conv = action.type(value) if action.type else value
        except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"config {dest}: {exc}") from exc
        if action.choices is not None and conv not in action.choices:
            raise UsageError(f"config {dest}: invalid choice {value!r}")
        setattr(args, dest, [conv] if isinstance(action, argparse._AppendAction) else conv)
    if args.precision is None and os.environ.get(ENV_PRECISION):
        try:
            args.precision = int(os.environ[ENV_PRECISION])
        except ValueError as exc:
            raise UsageError(f"{ENV_PRECISION} must be an integer") from exc
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.precision < 24:
        raise UsageError("precision must be at least 24 bits")
    if args.jobs < 1:
        raise UsageError("jobs must be positive")
    return args


# -- output ------------------------------------------------------------------------

def _plain(x: Any) -> Any:
    if isinstance(x, (Interval, ComplexInterval)):
        return x.to_dict()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _flatten(d: dict, prefix: str = "") -> dict[str, str]:
    out: dict[str, str] = {}
    for key in sorted(d):
        value = d[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict) and set(value) == {"lo", "hi"}:
            out[name] = f"[{value['lo']}, {value['hi']}]"
        elif isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        elif isinstance(value, list):
            out[name] = json.dumps(value, sort_keys=True)
        elif value is None:
            out[name] = ""
        else:
            out[name] = str(value)
    return out


def emit(report: Any, fmt: str, columns: Sequence[str] | None = None) -> str:
    data = _plain(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    rows = data if isinstance(data, list) else None
    if fmt == "csv":
        buf = io.StringIO()
        if rows is None:
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["key", "value"])
            for k, v in _flatten(data).items():
                writer.writerow([k, v])
        else:
            flat = [_flatten(r) for r in rows]
            header = list(columns) if columns else sorted({k for r in flat for k in r})
            writer = csv.DictWriter(buf, fieldnames=header, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            writer.writerows(flat)
        return buf.getvalue()
    if fmt == "table":
        if rows is None:
            flat = _flatten(data)
            width = max((len(k) for k in flat), default=0)
            return "".join(f"{k.ljust(width)}  {v}\n" for k, v in flat.items())
        flat = [_flatten(r) for r in rows]
        header = list(columns) if columns else sorted({k for r in flat for k in r})
        widths = [max([len(h)] + [len(r.get(h, "")) for r in flat]) for h in header]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for r in flat:
            lines.append("  ".join(r.get(h, "").ljust(w) for h, w in zip(header, widths)).rstrip())
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt}")


# -- argument types ------------------------------------------------------------------

def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(part) for part in text.split(","))


# -- subcommands ---------------------------------------------------------------------

def cmd_bound(args) -> tuple[Any, int, Sequence[str] | None]:
    from .bounds import WindowViolated, from_preset_string

    for name in ("q", "T", "beta1"):
        if getattr(args, name) is None:
            raise UsageError(f"bound needs --{name}")
    try:
        params = from_preset_string(args.preset or "", A=args.A, theta=args.theta, B=args.B, eps=args.eps)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if args.corollary is not None and len(args.corollary) != 4:
        raise UsageError("--corollary takes c1,c2,c3,c4")
    from .bounds import repulsion_bound

    try:
        report = repulsion_bound(args.q, args.T, args.beta1, params, strict=args.strict, corollary=args.corollary)
    except WindowViolated as exc:
        print(f"error: beta1 window violated ({exc.side}): {exc}", file=sys.stderr)
        return None, 1, None
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = report.to_dict()
    out["precision"] = args.precision
    return out, 0 if report.invariants_ok else 1, None


def cmd_verify(args) -> tuple[Any, int, Sequence[str] | None]:
    from .certificates import REGISTRY, verify_all, verify_certificate

    names = args.cert or []
    for n in names:
        if n not in REGISTRY:
            raise UsageError(f"unknown certificate {n!r}")
    if names:
        certs = [verify_certificate(n, args.precision) for n in names]
    else:
        certs = verify_all(args.precision, jobs=args.jobs)
    rows = [c.to_dict(timings=args.timings) for c in certs]
    code = 1 if any(c.verdict == "failed" for c in certs) else 0
    if args.format == "json":
        return rows, code, None
    cols = ["name", "verdict", "enclosure", "sampled", "claim"]
    if args.timings:
        cols.insert(3, "seconds")
    slim = [{k: r[k] for k in cols} for r in rows]
    return slim, code, cols


def cmd_certs_list(args) -> tuple[Any, int, Sequence[str] | None]:
    from .certificates import REGISTRY

    rows = [{"name": e.name, "claim": e.claim, "paper_location": e.location, "sampled": e.sampled} for e in REGISTRY.values()]
    return rows, 0, ["name", "sampled", "claim", "paper_location"]


def _real_character(q: int, index: int):
    from .characters import real_quadratic_characters

    chars = real_quadratic_characters(q)
    if not chars:
        raise UsageError(f"no real nonprincipal character mod {q}")
    if not 0 <= index < len(chars):
        raise UsageError(f"--chi1 must be in 0..{len(chars) - 1} for q = {q}")
    return chars[index]


def cmd_sieve(args) -> tuple[Any, int, Sequence[str] | None]:
    from .multiplicative import ExceptionalContext
    from .sieve import build_weights, check_weights

    if args.q is None or args.q < 3:
        raise UsageError("sieve needs --q >= 3")
    R = args.R if args.R is not None else 200
    chi1 = _real_character(args.q, args.chi1 or 0)
    ctx = ExceptionalContext(args.q, chi1)
    try:
        sys_ = build_weights(ctx, R)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    chk = check_weights(sys_)
    out = {
        "q": args.q,
        "R": R,
        "chi1": list(chi1.exponents),
        "chi1_conductor": chi1.conductor,
        "support_size": len(sys_.theta),
        "V_R": Interval(sys_.VR),
        "theta_1": str(sys_.theta[1]),
        "max_abs_theta": Interval(sys_.max_abs_theta()),
        "theta_one": chk.theta_one,
        "theta_bounded": chk.theta_bounded,
        "G1_principal": Interval(chk.g1),
        "lemma41_rhs": Interval(chk.rhs),
        "inequality": chk.inequality,
        "lemma41_holds": chk.holds,
        "precision": args.precision,
    }
    if args.format == "json":
        out["theta"] = {str(d): str(t) for d, t in sorted(sys_.theta.items())}
    return out, 0 if chk.holds else 1, None


def cmd_detect(args) -> tuple[Any, int, Sequence[str] | None]:
    from .analytic import mollified_sum
    from .bounds import BetaOutOfRange, detector_rhs
    from .characters import EnumerationOverflow, enumerate_characters
    from .multiplicative import ExceptionalContext
    from .sieve import build_weights

    for name in ("q", "rho", "N"):
        if getattr(args, name) is None:
            raise UsageError(f"detect needs --{name}")
    if len(args.rho) != 2:
        raise UsageError("--rho takes RE,IM")
    try:
        chars = enumerate_characters(args.q)
    except EnumerationOverflow as exc:
        raise UsageError(str(exc)) from exc
    index = args.chi or 0
    if not 0 <= index < len(chars):
        raise UsageError(f"--chi must be in 0..{len(chars) - 1}")
    chi = chars[index]
    chi1 = _real_character(args.q, args.chi1 or 0)
    ctx = ExceptionalContext(args.q, chi1)
    R = args.R if args.R is not None else 10
    beta1 = args.beta1 if args.beta1 is not None else Fraction(99, 100)
    rho = ComplexInterval(args.rho[0], args.rho[1])
    try:
        sys_ = build_weights(ctx, R)
        value = mollified_sum(args.N, rho, chi, ctx, sys_)
        rhs = detector_rhs(args.rho[0], beta1, args.N)
    except (ValueError, BetaOutOfRange) as exc:
        raise UsageError(str(exc)) from exc
    mod = abs(value)
    out = {
        "q": args.q,
        "chi": list(chi.exponents),
        "chi1": list(chi1.exponents),
        "rho": {"re": str(args.rho[0]), "im": str(args.rho[1])},
        "N": args.N,
        "R": R,
        "beta1": str(beta1),
        "sum": value,
        "abs_sum": mod,
        "detector_rhs": rhs,
        "within_rhs": bool(mod.hi <= rhs.lo) if rhs.is_finite() else True,
        "precision": args.precision,
    }
    return out, 0, None


def cmd_chars(args) -> tuple[Any, int, Sequence[str] | None]:
    from .characters import EnumerationOverflow, enumerate_characters

    if args.modulus is None or args.modulus < 1:
        raise UsageError("chars needs --modulus >= 1")
    try:
        chars = enumerate_characters(args.modulus)
    except (EnumerationOverflow, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    q = args.modulus
    rows = []
    for i, c in enumerate(chars):
        if args.real_only and not c.is_real():
            continue
        rows.append({
            "index": i,
            "exponents": ",".join(map(str, c.exponents)),
            "order": c.order,
            "conductor": c.conductor,
            "primitive": c.is_primitive(),
            "real": c.is_real(),
            "principal": c.is_principal(),
            "values": " ".join(_value_text(c.angle(n)) for n in range(1, q + 1)),
        })
    return rows, 0, ["index", "exponents", "order", "conductor", "primitive", "real", "principal", "values"]


def _value_text(angle: Fraction | None) -> str:
    """chi(n) as 0, 1, -1 or e(a/b) = exp(2 pi i a/b)."""
    if angle is None:
        return "0"
    if angle == 0:
        return "1"
    if angle == Fraction(1, 2):
        return "-1"
    return f"e({angle})"


COMMANDS = {
    "bound": cmd_bound,
    "verify": cmd_verify,
    "sieve": cmd_sieve,
    "detect": cmd_detect,
    "chars": cmd_chars,
    "certs-list": cmd_certs_list,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table", "csv"], default=None)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits (default 80)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes where supported")
    common.add_argument("--config", default=None, help="flat key = value file; flags override it")

    parser = argparse.ArgumentParser(prog="zerorepulsion", description="Explicit zero repulsion calculator and certificate checker.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="repulsion exponent and auxiliary constants")
    p.add_argument("--q", type=int)
    p.add_argument("--T", type=_fraction)
    p.add_argument("--beta1", type=_fraction)
    p.add_argument("--preset", default=None, help="comma list from convexity, bordignon, weyl, siegel")
    p.add_argument("--A", type=_fraction)
    p.add_argument("--theta", type=_fraction)
    p.add_argument("--B", type=_fraction)
    p.add_argument("--eps", type=_fraction)
    p.add_argument("--corollary", type=_fraction_list, help="c1,c2,c3,c4")
    p.add_argument("--strict", action="store_true", help="exit 1 when beta1 is outside the beta1 window")

    p = sub.add_parser("verify", parents=[common], help="run the certificate suite")
    p.add_argument("--cert", action="append", default=None, help="certificate name (repeatable)")
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds")

    p = sub.add_parser("sieve", parents=[common], help="sieve weights and their invariants")
    p.add_argument("--q", type=int)
    p.add_argument("--chi1", type=int, help="index among real nonprincipal characters mod q")
    p.add_argument("--R", type=_positive_int)

    p = sub.add_parser("detect", parents=[common], help="mollified sum against the detector bound")
    p.add_argument("--q", type=int)
    p.add_argument("--chi", type=int, help="character index as listed by chars")
    p.add_argument("--chi1", type=int, help="index among real nonprincipal characters mod q")
    p.add_argument("--rho", type=_fraction_list, help="RE,IM")
    p.add_argument("--N", type=_positive_int)
    p.add_argument("--R", type=_positive_int)
    p.add_argument("--beta1", type=_fraction)

    p = sub.add_parser("chars", parents=[common], help="list the Dirichlet characters mod q")
    p.add_argument("--modulus", type=int)
    p.add_argument("--real-only", action="store_true", help="list only real characters")

    sub.add_parser("certs-list", parents=[common], help="list registered certificates")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    try:
        args = _resolve(args, sub)
        with precision(args.precision):
            report, code, cols = COMMANDS[args.command](args)
            if report is not None:
                sys.stdout.write(emit(report, args.format, cols))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
