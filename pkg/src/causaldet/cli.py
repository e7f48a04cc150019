"""Command-line entry point: ``causaldet <command> ...``.

Exit codes: 0 success, 1 a checked property failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from . import fileformat, thresholds
from .classical import audit_bound
from .distcore import BellDistribution, ace, causal_from_bell
from .inequalities import InequalitySpec, evaluate_rhs, violation
from .nonsignaling import canonical_ns, ns_max_violation
from .quantum import REFERENCE_OPTIMUM, correlation_from_params, optimize_violation, tight_quantum_distribution

AGREEMENT_TOL = 1e-6
GENERATORS = ("ns-box", "canonical-ns", "tight-quantum", "quantum-optimum", "quantum-params")


@dataclass
class CommandResult:
    exit_code: int
    summary: str
    output_path: Optional[str] = None


class UsageError(Exception):
    pass


def _write(path: Optional[str], text: str) -> Optional[str]:
    if path:
        Path(path).write_text(text)
    return path


def _spec(args) -> InequalitySpec:
    return InequalitySpec.parse(args.inequality, args.m)


def parse_grid(text: str) -> List[float]:
    """``"0:1:0.05"`` (inclusive range) or ``"0.5,1.0"``."""
    if ":" in text:
        try:
            start, stop, step = (float(v) for v in text.split(":"))
        except ValueError:
            raise UsageError(f"bad grid {text!r}; expected start:stop:step") from None
        if step <= 0:
            raise UsageError("grid step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(n)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad list {text!r}; expected comma-separated integers") from None


def cmd_eval(args) -> CommandResult:
    try:
        dist = fileformat.load(args.file, tol=args.tol)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from None
    if isinstance(dist, BellDistribution):
        dist = causal_from_bell(dist, tol=args.tol)
    spec = InequalitySpec.parse(args.inequality, dist.m_settings)
    eta = dist.eta if args.eta is None else args.eta
    rhs = evaluate_rhs(dist, spec, eta)
    a = ace(dist)
    v = violation(dist, spec, eta)
    lines = [f"inequality {spec.label}  eta {eta:g}",
             f"rhs        {rhs:.12g}",
             f"ace        {a:.12g}",
             f"violation  {v:.12g}"]
    out = _write(args.out, json.dumps({"inequality": spec.id.value, "m_settings": spec.m_settings,
                                       "eta": eta, "rhs": rhs, "ace": a, "violation": v}, indent=2) + "\n")
    return CommandResult(0, "\n".join(lines), out)


def cmd_audit(args) -> CommandResult:
    spec = _spec(args)
    report = audit_bound(spec, parse_grid(args.grid), args.samples, args.seed, tol=args.tol,
                         detector_constraint=args.detector_constraint)
    out = _write(args.out, json.dumps(report.to_record(), indent=2) + "\n")
    return CommandResult(0 if report.passed else 1, report.summary(), out)


def cmd_thresholds(args) -> CommandResult:
    ms = parse_int_list(args.m_list) if args.m_list else []
    header = f"{'inequality':<12} {'family':<13} {'closed form':<24} {'percent':>8} {'closed':>12} {'bisected':>12} {'|diff|':>9}"
    lines = [header]
    ok = True
    for rec in thresholds.closed_form_table(ms):
        root = thresholds.threshold_bisect(thresholds.witness_curve(rec.spec, rec.family))
        diff = abs(root - rec.value)
        ok &= diff <= AGREEMENT_TOL
        flag = "" if diff <= AGREEMENT_TOL else "  MISMATCH"
        lines.append(f"{rec.label:<12} {rec.family:<13} {rec.closed_form:<24} {100 * rec.value:>7.2f}%"
                     f" {rec.value:>12.9f} {root:>12.9f} {diff:>9.1e}{flag}")
    lines.append("all thresholds agree" if ok else f"threshold disagreement above {AGREEMENT_TOL:g}")
    text = "\n".join(lines)
    out = _write(args.out, text + "\n")
    return CommandResult(0 if ok else 1, text, out)


def cmd_sweep(args) -> CommandResult:
    spec = _spec(args)
    if args.family not in thresholds.FAMILIES:
        raise UsageError(f"family must be one of {thresholds.FAMILIES}")
    rows = thresholds.sweep(spec, args.family, args.eta_min, args.eta_max, args.steps)
    text = thresholds.sweep_csv(rows, spec, args.family)
    echo = (f"# sweep {spec.label} family={args.family} eta_min={args.eta_min:g}"
            f" eta_max={args.eta_max:g} steps={args.steps}")
    if args.out:
        _write(args.out, text)
        return CommandResult(0, echo + f"\nwrote {len(rows)} rows to {args.out}", args.out)
    print(echo, file=sys.stderr)
    return CommandResult(0, text.rstrip("\n"))


def cmd_optimize(args) -> CommandResult:
    spec = _spec(args)
    params, v = optimize_violation(spec, args.eta, args.restarts, args.seed)
    rec = params.to_record()
    lines = [f"optimize {spec.label} eta={args.eta:g} restarts={args.restarts} seed={args.seed}",
             f"violation {v:.12g}",
             f"alpha {rec['alpha']:.12g}",
             "theta " + " ".join(f"{t:.12g}" for t in rec["theta"]),
             "phi   " + " ".join(f"{p:.12g}" for p in rec["phi"])]
    rec.update(violation=v, inequality=spec.id.value, eta=args.eta, restarts=args.restarts, seed=args.seed)
    out = _write(args.out, json.dumps(rec, indent=2) + "\n")
    return CommandResult(0, "\n".join(lines), out)


def cmd_nsmax(args) -> CommandResult:
    spec = _spec(args)
    bell, t = ns_max_violation(spec, args.eta)
    out = _write(args.out, fileformat.dumps(bell))
    return CommandResult(0, f"nsmax {spec.label} eta={args.eta:g}\nmax violation {t:.12g}", out)


def cmd_gen(args) -> CommandResult:
    name = args.name
    if name == "ns-box":
        text = fileformat.dumps(causal_from_bell(canonical_ns(2)))
    elif name == "canonical-ns":
        text = fileformat.dumps(canonical_ns(args.m))
    elif name == "tight-quantum":
        text = fileformat.dumps(tight_quantum_distribution())
    elif name == "quantum-optimum":
        text = fileformat.dumps(correlation_from_params(REFERENCE_OPTIMUM))
    else:
        text = json.dumps(REFERENCE_OPTIMUM.to_record(), indent=2) + "\n"
    if args.out:
        _write(args.out, text)
        return CommandResult(0, f"wrote {name} to {args.out}", args.out)
    return CommandResult(0, text.rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write machine-readable output here")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="equality tolerance")

    parser = argparse.ArgumentParser(prog="causaldet", description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-9)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a bound on a distribution file")
    p.add_argument("file")
    p.add_argument("inequality")
    p.add_argument("--eta", type=float, default=None, help="constraint level (default: the file's eta)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("audit", parents=[common], help="check a classical bound on all strategies")
    p.add_argument("inequality")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--grid", default="0:1:0.05")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--detector-constraint", action="store_true",
                   help="only audit models whose click mass is eta^2 at every setting")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("thresholds", parents=[common], help="closed-form vs bisected thresholds")
    p.add_argument("--m", dest="m_list", default="", help="comma-separated M values for I_M22 rows")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("sweep", parents=[common], help="violation of a witness versus eta, as CSV")
    p.add_argument("inequality")
    p.add_argument("family", choices=thresholds.FAMILIES)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--eta-min", type=float, default=0.8)
    p.add_argument("--eta-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=21)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", parents=[common], help="maximize a violation over the qubit family")
    p.add_argument("inequality")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--restarts", type=int, default=32)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("nsmax", parents=[common], help="maximal nonsignaling violation by LP")
    p.add_argument("inequality")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--eta", type=float, default=1.0)
    p.set_defaults(func=cmd_nsmax)

    p = sub.add_parser("gen", parents=[common], help="write a canonical distribution")
    p.add_argument("name", choices=GENERATORS)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_gen)
    return parser


def run(argv: Optional[List[str]] = None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        return CommandResult(2, f"error: {exc}")


def main(argv: Optional[List[str]] = None) -> int:
    res = run(argv)
    stream = sys.stdout if res.exit_code != 2 else sys.stderr
    print(res.summary, file=stream)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
