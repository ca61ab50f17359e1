"""Command-line front end.

    pisotlab analyze   --poly "x^3-x^2-x-1"
    pisotlab expand    --poly "x^2-x-1" 1/2
    pisotlab group     --poly "x^2-2x-1" --format json
    pisotlab finitary  --poly "x^3-3x^2+2x-1"
    pisotlab coding    --poly "x^3-x^2-x-1"
    pisotlab recurrent --poly "x^2-x-1" xi0 -n 20

Exit codes: 0 success, 1 internal error, 2 refused input, 3 failed verification.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .coding import (
    DEFAULT_PRECISION,
    coding_report,
    companion_matrix,
    endomorphism_A,
    error_bound,
    verify_factorization,
    verify_semiconjugacy,
)
from .errors import InputRefused, NotFinitary, PisotLabError, VerificationFailure
from .field import element_to_json, format_element, parse_element
from .finitary import finitary_classify
from .lattice import group_structure, xi0
from .matrices import determinant
from .numeration import DEFAULT_STEPS, evaluate_expansion, expand_positive
from .polynomial import PRECISION_CAP, parse_polynomial
from .symbolic import enumerate_group, recurrence_onset, recurrent_sequence

EXIT_OK, EXIT_INTERNAL, EXIT_REFUSED, EXIT_VERIFY = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    poly: str
    precision: int = DEFAULT_PRECISION
    height: int = 10
    ext_height: int = 6
    steps: int = DEFAULT_STEPS
    format: str = "text"

    def __post_init__(self):
        for name in ("precision", "height", "ext_height", "steps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, exact values as strings."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)


def _matrix_text(M) -> str:
    width = max(len(str(x)) for row in M for x in row)
    return "\n".join("  [" + " ".join(str(x).rjust(width) for x in row) + "]" for row in M)


def cmd_analyze(cfg: RunConfig, poly) -> tuple[dict, str]:
    gs = group_structure(poly)
    report = {
        "polynomial": str(poly),
        "k": list(poly.k),
        "certificate": poly.certificate.to_json(),
        **gs.to_json(),
        "group": gs.describe(),
    }
    lines = [
        f"polynomial   {poly}",
        f"beta         {report['certificate']['beta_approx']}  (certified at {poly.certificate.bits} bits)",
        f"max |conj|   {report['certificate']['max_conjugate_modulus']}",
        "M_beta",
        _matrix_text(gs.M_beta),
        f"D            {gs.D}",
        f"xi0          {format_element(gs.xi0)}",
        f"invariants   {list(gs.invariant_factors)}",
        f"group        {gs.describe()}",
        f"exponent d   {gs.d}",
        f"cyclic       {gs.is_cyclic}",
    ]
    return report, "\n".join(lines)


def cmd_expand(cfg: RunConfig, poly, value: str) -> tuple[dict, str]:
    x = parse_element(poly, value)
    e = expand_positive(x, cfg.steps)
    back = evaluate_expansion(e)
    if back != x:
        raise VerificationFailure("expansion does not evaluate back to its input", witness=e.to_json())
    report = {"value": element_to_json(x), "expansion": e.to_json(), "reconstructed": True}
    lines = [
        f"value        {format_element(x)}",
        f"expansion    {e}",
        f"integer      {list(e.int_digits)}",
        f"preperiod    {list(e.frac_pre)}",
        f"period       {list(e.frac_period)}  (length {len(e.frac_period)})",
        "reconstruction exact",
    ]
    return report, "\n".join(lines)


def cmd_group(cfg: RunConfig, poly) -> tuple[dict, str]:
    group = enumerate_group(poly, cfg.ext_height, cfg.height)
    report = {"order": len(group), "classes": group.to_json()}
    lines = [f"{len(group)} classes ({group.structure.describe()})"]
    width = max(c.canonical_tail.period for c in group)
    for c in group:
        tails = ", ".join(sorted(str(t) for t in c.tails))
        lines.append(f"  {c.canonical_tail.padded(width)}  order {c.order:<3} rep {format_element(c.rep)}  tails {{{tails}}}")
    return report, "\n".join(lines)


def cmd_finitary(cfg: RunConfig, poly) -> tuple[dict, str]:
    rep = finitary_classify(poly, cfg.height, cfg.steps)
    lines = [f"{rep.verdict}: {rep.criterion}"]
    if rep.witness is not None:
        lines.append(f"witness {format_element(rep.witness)} = {rep.witness_expansion}")
    if rep.checked:
        lines.append(f"checked {rep.checked} elements up to height {rep.height}")
    return rep.to_json(), "\n".join(lines)


def cmd_coding(cfg: RunConfig, poly) -> tuple[dict, str]:
    try:
        group = enumerate_group(poly, min(cfg.ext_height, 2), cfg.height)
    except NotFinitary:
        group = None
    if group is not None:
        rep = coding_report(poly, group.classes, precision=cfg.precision)
        report = rep.to_json()
    else:
        A = endomorphism_A(poly)
        sc = verify_semiconjugacy(poly, precision=cfg.precision)
        fc = verify_factorization(poly, precision=cfg.precision)
        report = {
            "A": A,
            "detA": determinant(A),
            "kernel_classes": None,
            "semiconjugacy_max_err": error_bound(sc.max_error),
            "factorization_max_err": error_bound(fc.max_error),
        }
    lines = [
        "T (companion)",
        _matrix_text(companion_matrix(poly)),
        "A",
        _matrix_text(report["A"]),
        f"det A        {report['detA']}",
        f"kernel       {report['kernel_classes'] if report['kernel_classes'] is not None else 'skipped (not finitary)'}",
        f"semiconj err <= {report['semiconjugacy_max_err']}",
        f"factor err   <= {report['factorization_max_err']}",
    ]
    return report, "\n".join(lines)


def cmd_recurrent(cfg: RunConfig, poly, xi_text: str, n: int) -> tuple[dict, str]:
    xi = xi0(poly) if xi_text.strip().lower() == "xi0" else parse_element(poly, xi_text)
    T = recurrent_sequence(xi, n)
    onset = recurrence_onset(poly, T)
    report = {"xi": element_to_json(xi), "T": [str(t) for t in T], "onset": onset}
    lines = [f"xi           {format_element(xi)}", "T            " + " ".join(map(str, T)), f"recurrence from n = {onset}"]
    return report, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poly", required=True, help='polynomial, e.g. "x^3-x^2-x-1" or JSON [1,-1,-1,-1]')
    common.add_argument("--precision", type=int, default=None, help="bits (default $PISOTLAB_PRECISION or 128)")
    common.add_argument("--height", type=int, default=10)
    common.add_argument("--ext-height", type=int, default=6)
    common.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="pisotlab", description="Pisot groups and toral codings of Pisot units")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="discriminant, dual basis and group structure")
    p = sub.add_parser("expand", parents=[common], help="greedy beta-expansion of a nonnegative element")
    p.add_argument("value")
    sub.add_parser("group", parents=[common], help="symbolic Pisot group")
    sub.add_parser("finitary", parents=[common], help="finiteness property")
    sub.add_parser("coding", parents=[common], help="toral coding checks")
    p = sub.add_parser("recurrent", parents=[common], help="recurrent sequence of xi")
    p.add_argument("xi", help='element of P_beta, or "xi0"')
    p.add_argument("-n", type=int, default=20)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_REFUSED if exc.code else EXIT_OK
    try:
        precision = args.precision
        if precision is None:
            precision = int(os.environ.get("PISOTLAB_PRECISION") or DEFAULT_PRECISION)
        cfg = RunConfig(args.command, args.poly, precision, args.height, args.ext_height, args.steps, args.format)
        poly = parse_polynomial(cfg.poly, max(PRECISION_CAP, 4 * cfg.precision))
        if cfg.command == "expand":
            report, text = cmd_expand(cfg, poly, args.value)
        elif cfg.command == "recurrent":
            report, text = cmd_recurrent(cfg, poly, args.xi, args.n)
        else:
            report, text = COMMANDS[cfg.command](cfg, poly)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except InputRefused as exc:
        print(f"refused ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except VerificationFailure as exc:
        print(f"verification failed ({type(exc).__name__}): {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return EXIT_VERIFY
    except PisotLabError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # never a traceback on bad input
        print(f"internal error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(dumps(report) if cfg.format == "json" else text)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "group": cmd_group,
    "finitary": cmd_finitary,
    "coding": cmd_coding,
}


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
