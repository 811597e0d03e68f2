"""Command-line front end: one subcommand per experiment.

Every run produces one document (``--format json``) or a short human summary.
Exit codes: 0 PASS, 2 FAIL, 3 DEGENERATE, 4 resource limit, 5 parse error,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from dataclasses import field as dc_field

from . import __version__
from .enumgeo import (
    DegenerateInput,
    PlaneCurve,
    SamplingFailure,
    gamma_dual_length,
    gamma_length,
    general_quartic,
    inflection_flag_scheme,
    inflection_scheme,
    inflection_verdict,
    is_smooth,
    flex_hypotheses,
    random_smooth_curve,
    sample_inflection_curve,
    simple_tangents,
    theta_scheme_quartic,
    theta_verdict,
    verified_bitangents,
)
from .ff import FieldError, parse_field
from .formulas import congruence_sweep, dejonquieres, plucker_counts, theta_counts
from .groebner import DEFAULT_MAX_BASIS, DEFAULT_MAX_PAIRS, Limits, ResourceLimitError
from .poly import ParseError

EXIT_PASS = 0
EXIT_FAIL = 2
EXIT_DEGENERATE = 3
EXIT_RESOURCE = 4
EXIT_PARSE = 5
EXIT_USAGE = 64

VERDICT_CODES = {"PASS": EXIT_PASS, "FAIL": EXIT_FAIL, "DEGENERATE": EXIT_DEGENERATE,
                 "RESOURCE_LIMIT": EXIT_RESOURCE, "PARSE_ERROR": EXIT_PARSE}

ENV_MAX_ATTEMPTS = "CHARPENUM_MAX_ATTEMPTS"
DEFAULT_SEED = 42


class UsageError(Exception):
    pass


class CurveParseError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    field: str | None = None
    degree: int | None = None
    curve_path: str | None = None
    random: bool = False
    seed: int = DEFAULT_SEED
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_basis: int = DEFAULT_MAX_BASIS
    max_attempts: int = int(os.environ.get(ENV_MAX_ATTEMPTS, 500))
    fmt: str = "human"
    out: str | None = None
    options: dict = dc_field(default_factory=dict)

    def validate(self, needs_curve: bool = True):
        if self.max_pairs <= 0 or self.max_basis <= 0 or self.max_attempts <= 0:
            raise UsageError("resource caps must be positive")
        if not needs_curve:
            return
        if bool(self.curve_path) == bool(self.random):
            raise UsageError("give exactly one curve source: --curve FILE or --random")
        if self.random and not self.field:
            raise UsageError("--random needs --field")

    @property
    def limits(self) -> Limits:
        return Limits(max_pairs=self.max_pairs, max_basis=self.max_basis)

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "degree": self.degree,
            "curve_source": "file" if self.curve_path else "random",
            "curve_file": os.path.basename(self.curve_path) if self.curve_path else None,
            "max_pairs": self.max_pairs,
            "max_basis": self.max_basis,
            "max_attempts": self.max_attempts,
            **self.options,
        }


@dataclass
class Outcome:
    verdict: str
    document: dict
    lines: list = dc_field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return VERDICT_CODES[self.verdict]


def _document(config: ExperimentConfig, **body) -> dict:
    doc = {"tool": "charpenum", "version": __version__, "command": config.command,
           "seed": config.seed, "config": config.to_dict()}
    doc.update(body)
    return doc


_SUBFIELD = re.compile(r"^\[(\d+)(?:,0)*\]$")


def _fmt_point(coords) -> str:
    # elements of the prime field print as plain integers
    return "[" + ",".join(_SUBFIELD.sub(r"\1", c) for c in coords) + "]"


# -- curves ------------------------------------------------------------------------------


def load_curve(config: ExperimentConfig) -> PlaneCurve:
    """Read the curve file; a missing field header falls back to ``--field``."""
    try:
        with open(config.curve_path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CurveParseError(f"cannot read curve file: {exc}") from exc
    try:
        try:
            C = PlaneCurve.from_text(text)
        except (FieldError, ValueError):
            if not config.field:
                raise
            body = " ".join(ln.split("#", 1)[0] for ln in text.splitlines())
            C = PlaneCurve.parse(config.field, body)
    except (ParseError, FieldError, ValueError) as exc:
        raise CurveParseError(str(exc)) from exc
    if config.field and repr(parse_field(config.field)) != repr(C.field):
        raise CurveParseError(f"curve file field {C.field!r} does not match --field {config.field}")
    if config.degree is not None and config.degree != C.degree:
        raise CurveParseError(f"curve has degree {C.degree}, --degree says {config.degree}")
    return C


def _curve_doc(C: PlaneCurve) -> dict:
    return {"field": repr(C.field), "equation": str(C.F), "degree": C.degree,
            "sampling": dict(C.meta) if C.meta else None}


# -- inflect -----------------------------------------------------------------------------


def cmd_inflect(config: ExperimentConfig) -> Outcome:
    """Inflection flags and points, compared with the Plucker-type prediction."""
    config.validate()
    limits = config.limits
    if config.random:
        K = parse_field(config.field)
        d = 3 if config.degree is None else config.degree
        if d < 2:
            return _degenerate(config, f"inflection points need degree >= 2, got {d}")
        C, flags = sample_inflection_curve(d, K, config.seed, config.max_attempts, limits)
    else:
        C = load_curve(config)
        if C.degree < 2:
            return _degenerate(config, f"inflection points need degree >= 2, got {C.degree}")
        flags = inflection_flag_scheme(C, limits, config.seed)
    points = inflection_scheme(C, limits, config.seed, flags)
    prediction = plucker_counts(C.degree, C.field.p)
    smooth = is_smooth(C, limits)
    hyp = [flex_hypotheses(P) for P in flags.points]
    verdict = inflection_verdict(flags, prediction)
    if verdict == "FAIL" and (not smooth or not all(hyp)):
        verdict = "DEGENERATE"
    doc = _document(
        config,
        curve=_curve_doc(C),
        fingerprints={"flags": flags.fingerprint, "points": points.fingerprint},
        prediction=prediction.to_dict(),
        report=points.to_dict(),
        checks={"smooth": smooth, "hypotheses_per_flag": hyp},
        verdict=verdict,
    )
    lines = [
        f"curve      {C.F}  over {C.field!r}",
        f"predicted  {prediction.points} points x {prediction.multiplicity} = {prediction.total}",
        f"flags      {flags.radical_degree} geometric, total degree {flags.total_degree}",
    ]
    for P in flags.points:
        ex = P.extra
        lines.append(
            f"  p={_fmt_point(ex['point'])} l={_fmt_point(ex['line'])} mult={P.multiplicity}"
            f" deg={P.residue_degree} contact={ex['contact_order']} smooth={ex['smooth_point']}"
            f" tangent_dim={ex['tangent_dimension']}"
        )
    lines.append(f"points     {points.radical_degree} geometric, total degree {points.total_degree}")
    for P in points.points:
        lines.append(f"  {_fmt_point(P.formatted(P.projective[0]))} mult={P.multiplicity} deg={P.residue_degree}")
    lines.append(f"smooth     {smooth}")
    lines.append(f"verdict    {verdict}")
    return Outcome(verdict, doc, lines)


def _degenerate(config, reason, **extra) -> Outcome:
    doc = _document(config, verdict="DEGENERATE", reason=reason, **extra)
    return Outcome("DEGENERATE", doc, [f"DEGENERATE: {reason}"])


# -- theta -------------------------------------------------------------------------------


def cmd_theta(config: ExperimentConfig) -> Outcome:
    """Bitangent lines of a plane quartic, compared with the theta-hyperplane count."""
    config.validate()
    limits = config.limits
    if config.random:
        K = parse_field(config.field)
        d = 4 if config.degree is None else config.degree
        if d != 4:
            return _degenerate(config, f"theta-hyperplanes are computed for plane quartics, got degree {d}")
        C = random_smooth_curve(4, K, config.seed, lambda C: general_quartic(C, limits),
                                config.max_attempts, limits)
    else:
        C = load_curve(config)
        if C.degree != 4:
            return _degenerate(config, f"theta-hyperplanes are computed for plane quartics, got degree {C.degree}")
    rep = theta_scheme_quartic(C, limits, config.seed)
    prediction = theta_counts(3, C.field.p)
    general = general_quartic(C, limits)
    verdict = theta_verdict(rep, prediction)
    if verdict == "FAIL" and not general:
        verdict = "DEGENERATE"
    doc = _document(
        config,
        curve=_curve_doc(C),
        fingerprints={"image": rep.fingerprint},
        prediction=prediction.to_dict(),
        report=rep.to_dict(),
        checks={"general_quartic": general},
        verdict=verdict,
    )
    lines = [
        f"curve      {C.F}  over {C.field!r}",
        f"predicted  {prediction.points} lines x {prediction.multiplicity} = {prediction.total}",
        f"lines      {rep.radical_degree} geometric, total degree {rep.total_degree}"
        f" (image ideal degree {rep.notes['image_degree']}, ordered pairs {rep.notes['preimage_degree']})",
    ]
    for P in rep.points:
        lines.append(f"  {_fmt_point(P.extra['line'])} mult={P.multiplicity} deg={P.residue_degree}"
                     f" image_length={P.extra['image_length']}")
    lines.append(f"general    {general}")
    lines.append(f"verdict    {verdict}")
    return Outcome(verdict, doc, lines)


# -- tangency ----------------------------------------------------------------------------


def cmd_tangency(config: ExperimentConfig) -> Outcome:
    """Fiber lengths of tangency correspondences at simple tangents or bitangents."""
    config.validate()
    limits = config.limits
    t = config.options.get("t", 1)
    count = config.options.get("count", 3)
    if t not in (1, 2):
        raise UsageError("--t must be 1 or 2")
    if config.random:
        K = parse_field(config.field)
        d = config.degree if config.degree is not None else (3 if t == 1 else 4)
        if t == 2 and d != 4:
            return _degenerate(config, "bitangents are computed for plane quartics")
        if d < 2:
            return _degenerate(config, f"tangent lines need degree >= 2, got {d}")
        if t == 1:
            pred = lambda C: bool(simple_tangents(C, K, 1, limits))  # noqa: E731
        else:
            pred = lambda C: bool(verified_bitangents(C, K, config.seed, limits))  # noqa: E731
        C = random_smooth_curve(d, K, config.seed, pred, config.max_attempts, limits)
    else:
        C = load_curve(config)
        K = C.field
        if C.degree < 2 or (t == 2 and C.degree != 4):
            return _degenerate(config, f"unsupported degree {C.degree} for t = {t}")
    lam = 2 if K.p == 2 else 1
    expected = lam ** t
    rows = []
    if t == 1:
        for p, H in simple_tangents(C, K, count, limits):
            rows.append({"points": [[K.format(c) for c in p]], "line": [K.format(c) for c in H],
                         "contact_orders": [2], "length": gamma_length(C, p, H, K, limits)})
    else:
        for H, pts, M, HM in verified_bitangents(C, K, config.seed, limits)[:count]:
            lengths = [gamma_dual_length(C, order, HM, M, limits) for order in (pts, pts[::-1])]
            rows.append({"points": [[M.format(c) for c in p] for p in pts], "line": [K.format(c) for c in H],
                         "contact_orders": [2, 2], "length": lengths[0], "length_reversed": lengths[1]})
    if not rows:
        return _degenerate(config, "no verified tangent configuration over the base field",
                           curve=_curve_doc(C))
    ok = all(r["length"] == expected and r.get("length_reversed", expected) == expected for r in rows)
    verdict = "PASS" if ok else "FAIL"
    doc = _document(config, curve=_curve_doc(C), t=t, expected_length=expected,
                    configurations=rows, verdict=verdict)
    what = "gamma-length" if t == 1 else "gamma-dual-length"
    lines = [f"curve      {C.F}  over {C.field!r}", f"expected   {what} {expected}"]
    for r in rows:
        pts = " ".join(_fmt_point(p) for p in r["points"])
        lines.append(f"  H={_fmt_point(r['line'])} at {pts}: {r['length']}")
    lines.append(f"verdict    {verdict}")
    return Outcome(verdict, doc, lines)


# -- formulas ----------------------------------------------------------------------------


def cmd_formulas(config: ExperimentConfig) -> Outcome:
    """Closed-form values: de Jonquieres numbers, congruences, count predictions."""
    config.validate(needs_curve=False)
    opts = config.options
    what = opts.get("formula")
    if what == "dejonquieres":
        g, v, m = opts["g"], opts["v"], opts["m"]
        if g < 0 or v < 0 or not m or min(m) < 1:
            raise UsageError("need g, v >= 0 and multiplicities >= 1")
        J = dejonquieres(g, v, m)
        verdict = "PASS" if J.divisible else "FAIL"
        doc = _document(config, result=J.to_dict(), verdict=verdict)
        lines = [f"J({g},{v},({','.join(map(str, m))})) = {J.value}", f"unordered = {J.unordered} (stabilizer {J.stab})",
                 f"divisible by prod(m) = {J.divisible}", f"verdict    {verdict}"]
    elif what == "congruence":
        P = opts["max_prime"]
        if P < 2:
            raise UsageError("--max-prime must be at least 2")
        res = congruence_sweep(P)
        verdict = "PASS" if res["ok"] else "FAIL"
        doc = _document(config, result=res, verdict=verdict)
        lines = [f"primes below {P}: {res['primes_checked']}",
                 f"mod p^2 failures: {res['mod_p2_failures']}",
                 f"mod p^3 failures (p >= 5): {res['mod_p3_failures']}",
                 f"expected mod p^3 failures: {res['expected_mod_p3_failures']}",
                 f"verdict    {verdict}"]
    elif what == "predict":
        char = opts["characteristic"]
        try:
            if opts["problem"] == "inflection":
                pred = plucker_counts(opts["degree"], char)
            else:
                pred = theta_counts(opts["genus"], char)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        verdict = "PASS"
        doc = _document(config, result=pred.to_dict(), verdict=verdict)
        lines = [f"{pred.problem} in characteristic {char}: {pred.points} points x {pred.multiplicity}"
                 f" = {pred.total}"]
    else:
        raise UsageError("formulas needs one of: dejonquieres, congruence, predict")
    return Outcome(verdict, doc, lines)


# -- verify-paper ------------------------------------------------------------------------


def cmd_verify_paper(config: ExperimentConfig) -> Outcome:
    """Run the desk-scale suite of checks; one row per check."""
    from .checks import CHECKS, run_checks

    config.validate(needs_curve=False)
    only = config.options.get("only") or []
    unknown = [n for n in only if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s) {unknown}; choose from {sorted(CHECKS)}")
    rows = run_checks(only or list(CHECKS), config.seed, config.limits, config.max_attempts)
    failed = [r["check"] for r in rows if r["status"] != "PASS"]
    verdict = "FAIL" if failed else "PASS"
    doc = _document(config, results=rows,
                    summary={"checks": len(rows), "passed": len(rows) - len(failed), "failed": failed},
                    verdict=verdict)
    width = max(len(r["check"]) for r in rows)
    lines = [f"{r['check']:<{width}}  {r['status']:<4}  {r['summary']}" for r in rows]
    lines.append(f"{len(rows) - len(failed)}/{len(rows)} checks passed")
    return Outcome(verdict, doc, lines)


# -- argument parsing --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, curve: bool = True):
    if curve:
        p.add_argument("--field", help="field literal such as GF(3), GF(2^3) or GF(2^4; t^4+t+1)")
        p.add_argument("--degree", type=int)
        p.add_argument("--curve", dest="curve_path", metavar="FILE", help="curve file")
        p.add_argument("--random", action="store_true", help="rejection-sample a random curve")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS)
    p.add_argument("--max-basis", type=int, default=DEFAULT_MAX_BASIS)
    p.add_argument("--max-attempts", type=int, default=int(os.environ.get(ENV_MAX_ATTEMPTS, 500)))
    p.add_argument("--format", dest="fmt", choices=("human", "json"), default="human")
    p.add_argument("--out", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="charpenum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"charpenum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("inflect", help="inflection points and flags of a plane curve"))
    _common(sub.add_parser("theta", help="bitangents (theta-hyperplanes) of a plane quartic"))
    p = sub.add_parser("tangency", help="fiber lengths of tangency correspondences")
    _common(p)
    p.add_argument("--t", type=int, choices=(1, 2), default=1, help="number of tangency points")
    p.add_argument("--count", type=int, default=3, help="configurations to examine")

    p = sub.add_parser("formulas", help="closed-form counts and congruences")
    fsub = p.add_subparsers(dest="formula", required=True, parser_class=_Parser)
    q = fsub.add_parser("dejonquieres", help="J(g, v, m)")
    q.add_argument("g", type=int)
    q.add_argument("v", type=int)
    q.add_argument("m", type=int, nargs="+")
    _common(q, curve=False)
    q = fsub.add_parser("congruence", help="C(2p,p) = 2 mod p^2 and p^3")
    q.add_argument("--max-prime", type=int, default=10_000)
    _common(q, curve=False)
    q = fsub.add_parser("predict", help="expected counts")
    q.add_argument("--problem", choices=("inflection", "theta"), required=True)
    q.add_argument("--degree", type=int, default=3)
    q.add_argument("--genus", type=int, default=3)
    q.add_argument("--characteristic", type=int, default=0)
    _common(q, curve=False)

    p = sub.add_parser("verify-paper", help="run every desk-scale check")
    p.add_argument("--only", action="append", metavar="CHECK", help="run only this check (repeatable)")
    p.add_argument("--list", action="store_true", help="list check names and exit")
    _common(p, curve=False)
    return parser


def config_from_args(args) -> ExperimentConfig:
    base = {k: getattr(args, k) for k in ("seed", "max_pairs", "max_basis", "max_attempts", "fmt", "out")}
    for k in ("field", "degree", "curve_path", "random"):
        if hasattr(args, k):
            base[k] = getattr(args, k)
    options = {}
    if args.command == "tangency":
        options = {"t": args.t, "count": args.count}
    elif args.command == "formulas":
        options = {"formula": args.formula}
        if args.formula == "dejonquieres":
            options.update(g=args.g, v=args.v, m=list(args.m))
        elif args.formula == "congruence":
            options["max_prime"] = args.max_prime
        else:
            options.update(problem=args.problem, degree=args.degree, genus=args.genus,
                           characteristic=args.characteristic)
    elif args.command == "verify-paper":
        options = {"only": sorted(set(args.only or []))}
    return ExperimentConfig(command=args.command, options=options, **base)


COMMANDS = {
    "inflect": cmd_inflect,
    "theta": cmd_theta,
    "tangency": cmd_tangency,
    "formulas": cmd_formulas,
    "verify-paper": cmd_verify_paper,
}


def run(config: ExperimentConfig) -> Outcome:
    """Dispatch one experiment, turning library errors into verdicts."""
    try:
        return COMMANDS[config.command](config)
    except (CurveParseError, ParseError, FieldError) as exc:
        return Outcome("PARSE_ERROR", _document(config, verdict="PARSE_ERROR", reason=str(exc)),
                       [f"PARSE ERROR: {exc}"])
    except ResourceLimitError as exc:
        doc = _document(config, verdict="RESOURCE_LIMIT", reason=str(exc))
        return Outcome("RESOURCE_LIMIT", doc, [f"RESOURCE LIMIT: {exc}"])
    except (DegenerateInput, SamplingFailure) as exc:
        return _degenerate(config, str(exc))


def emit(outcome: Outcome, config: ExperimentConfig, stream=None):
    if config.fmt == "json":
        text = json.dumps(outcome.document, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(outcome.lines) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify-paper" and args.list:
        from .checks import CHECKS

        for name, (_, about) in CHECKS.items():
            print(f"{name:<28} {about}")
        return EXIT_PASS
    config = config_from_args(args)
    try:
        started = time.perf_counter()
        outcome = run(config)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"charpenum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(outcome, config)
    sys.stdout.flush()
    if config.fmt == "human" and not config.out:
        print(f"({time.perf_counter() - started:.1f} s)", file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
