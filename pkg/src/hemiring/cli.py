"""Command-line front end.

Every subcommand builds one JSON-ready payload.  ``--json`` prints it with
sorted keys; otherwise the same payload is flattened into an aligned table,
so both views always carry the same fields.

Exit codes: 0 ok, 2 law or validation failure, 3 precondition failure,
4 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    HemiringError,
    NonCanonicalizable,
    ParseError,
    UnknownStructure,
    WrongStructure,
)
from .laws import check_hemiring_laws
from .norms import (
    StructureConstants,
    build_finite_dim_pseudonorm,
    check_pseudonorm_laws,
    norm_from_json,
)
from .parser import parse_element, parse_term_expression
from .sequences import (
    DEFAULT_PROBE_DEPTH,
    Componentwise,
    FromExpression,
    Geometric,
    PartialSums,
    Scaled,
    certificate_from_json,
    default_epsilons,
    element_to_json,
    parse_epsilons,
    validate,
)
from .structures import density_witness_for, get_structure, shrink_witness_for
from .theorems import (
    bernoulli_check,
    condensation_backward,
    condensation_forward,
    condensation_roundtrip,
    condense,
    geometric_sum,
    probed_ratio_certificate,
    ratio_test,
)

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 1000

OK, LAW_FAILURE, PRECONDITION_FAILURE, USAGE_ERROR = 0, 2, 3, 4
STATUS = {OK: "ok", LAW_FAILURE: "law_failure", PRECONDITION_FAILURE: "precondition_failure", USAGE_ERROR: "error"}

# errors caused by what the user typed rather than by the mathematics
_INPUT_ERRORS = (ParseError, UnknownStructure, WrongStructure, NonCanonicalizable, json.JSONDecodeError, OSError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class CommandResult:
    def __init__(self, command, code, settings, result):
        self.command = command
        self.code = code
        self.settings = settings
        self.result = result

    @property
    def status(self):
        return STATUS[self.code]

    def payload(self):
        return {"command": self.command, "status": self.status, "settings": self.settings, "result": self.result}

    def to_json(self):
        return json.dumps(self.payload(), sort_keys=True, indent=2)

    def to_table(self):
        rows = list(_flatten(self.payload()))
        width = max((len(k) for k, _ in rows), default=0)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _flatten(value, prefix=""):
    if isinstance(value, dict):
        if not value and prefix:
            yield prefix, "{}"
        for k in sorted(value):
            yield from _flatten(value[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(value, list):
        if not value:
            yield prefix, "[]"
        for i, v in enumerate(value):
            yield from _flatten(v, f"{prefix}[{i}]")
    elif value is None:
        yield prefix, "null"
    elif isinstance(value, bool):
        yield prefix, "true" if value else "false"
    else:
        yield prefix, str(value)


# ---------------------------------------------------------------------------
# helpers


def _render_list(S, xs):
    return [element_to_json(S, x) for x in xs]


def _epsilons(text, S):
    return default_epsilons(S) if text is None else parse_epsilons(text, S)


def _report_dict(report):
    d = report.as_dict()
    d["violations"] = d["violations"][:20]
    d["violation_count"] = len(report.violations)
    return d


def _validation(cert, eps, depth):
    report = validate(cert, eps, depth)
    return report, _report_dict(report)


# ---------------------------------------------------------------------------
# subcommands


def cmd_laws(args):
    S = get_structure(args.structure)
    report = check_hemiring_laws(S, args.samples, args.seed)
    d = report.as_dict()
    d["failures"] = d["failures"][:20]
    d["failure_count"] = len(report.failures)
    settings = {"structure": S.id, "samples": args.samples, "seed": args.seed}
    return CommandResult("laws", OK if report.passed else LAW_FAILURE, settings, d)


def cmd_witness(args):
    S = get_structure(args.structure)
    settings = {"structure": S.id, "kind": args.kind}
    if args.kind == "density":
        if args.epsilon is None:
            raise UsageError("witness density needs --epsilon")
        eps = parse_element(args.epsilon, S)
        w = density_witness_for(S)
        beta, gamma = w(eps)
        ok = S.is_positive(beta) and S.is_positive(gamma) and S.lt(S.add(beta, gamma), eps)
        result = {
            "rule": w.rule,
            "epsilon": S.render(eps),
            "beta": S.render(beta),
            "gamma": S.render(gamma),
            "beta_plus_gamma": S.render(S.add(beta, gamma)),
            "holds": ok,
        }
    else:
        if args.alpha is None or args.m is None:
            raise UsageError("witness shrink needs --alpha and --m")
        alpha, m = parse_element(args.alpha, S), parse_element(args.m, S)
        w = shrink_witness_for(S)
        al, ar = w(alpha, m)
        left, right = S.mul(al, m), S.mul(m, ar)
        ok = S.is_positive(al) and S.is_positive(ar) and S.lt(left, alpha) and S.lt(right, alpha)
        result = {
            "rule": w.rule,
            "alpha": S.render(alpha),
            "m": S.render(m),
            "alpha_l": S.render(al),
            "alpha_r": S.render(ar),
            "alpha_l_times_m": S.render(left),
            "m_times_alpha_r": S.render(right),
            "holds": ok,
        }
    return CommandResult("witness", OK if ok else LAW_FAILURE, settings, result)


def cmd_norm_build(args):
    sc = StructureConstants.load(args.constants)
    norm = build_finite_dim_pseudonorm(sc)
    report = check_pseudonorm_laws(norm, args.check_samples, args.seed)
    H = norm.target
    d = report.as_dict()
    d["failures"] = d["failures"][:20]
    d["failure_count"] = len(report.failures)
    result = {
        "dimension": sc.n,
        "field": sc.field.id,
        "M": H.render(norm.params["M"]),
        "nM": H.render(norm.params["nM"]),
        "zero_m": norm.params["zero_m"],
        "norm": norm.to_json(),
        "check": d,
    }
    settings = {"constants": args.constants, "check_samples": args.check_samples, "seed": args.seed}
    return CommandResult("norm build", OK if report.passed else LAW_FAILURE, settings, result)


def cmd_norm_check(args):
    S = get_structure(args.structure)
    norm = norm_from_json(args.kind, S)
    report = check_pseudonorm_laws(norm, args.samples, args.seed)
    d = report.as_dict()
    d["failures"] = d["failures"][:20]
    d["failure_count"] = len(report.failures)
    d["strength"] = norm.strength
    settings = {"kind": args.kind, "structure": S.id, "samples": args.samples, "seed": args.seed}
    return CommandResult("norm check", OK if report.passed else LAW_FAILURE, settings, d)


def cmd_seq_eval(args):
    S = get_structure(args.structure)
    if args.to < args.from_:
        raise UsageError("--to must be at least --from")
    x = FromExpression(parse_term_expression(args.term), S)
    seq = PartialSums(x) if args.partial_sums else x
    rows = [{"n": n, "value": element_to_json(S, seq.term(n))} for n in range(args.from_, args.to + 1)]
    settings = {
        "structure": S.id,
        "term": str(x.expr),
        "from": args.from_,
        "to": args.to,
        "partial_sums": bool(args.partial_sums),
    }
    return CommandResult("seq eval", OK, settings, {"terms": rows})


def cmd_geom(args):
    S = get_structure(args.structure)
    r = parse_element(args.r, S)
    settings = {"structure": S.id, "r": S.render(r), "terms": args.terms, "depth": DEFAULT_PROBE_DEPTH}
    res = geometric_sum(r, S)
    cert = res.certificate
    # s is the sum of the first `terms` terms r^0 .. r^(terms-1)
    s = cert.sequence.term(args.terms - 1)
    gap = cert.norm(S.sub(s, res.sum))
    report, rep = _validation(cert, None, DEFAULT_PROBE_DEPTH)
    result = {
        "sum": S.render(res.sum),
        "s": element_to_json(S, s),
        "gap": element_to_json(cert.norm.target, gap),
        "certificate": cert.to_json(),
        "validation": rep,
    }
    return CommandResult("geom", OK if report.passed else LAW_FAILURE, settings, result)


def cmd_condense(args):
    S = get_structure(args.structure)
    x = FromExpression(parse_term_expression(args.term), S)
    depth = args.depth
    if args.direction == "forward":
        source = probed_ratio_certificate(x, depth)
        cert = condensation_forward(source, depth)
    elif args.direction == "backward":
        source = probed_ratio_certificate(condense(x), depth)
        cert = condensation_backward(source, depth)
    else:
        source = probed_ratio_certificate(x, depth)
        cert = condensation_roundtrip(source, depth)
    eps = _epsilons(args.eps, cert.norm.target)
    report, rep = _validation(cert, eps, depth)
    settings = {"structure": S.id, "term": str(x.expr), "direction": args.direction, "depth": depth, "eps": _render_list(cert.norm.target, eps)}
    result = {"input_certificate": source.to_json(), "certificate": cert.to_json(), "validation": rep}
    return CommandResult("condense", OK if report.passed else LAW_FAILURE, settings, result)


def cmd_ratio(args):
    """The series x_n = x0 r^n, the extremal case of the ratio bound.

    In qvec:k the first coordinate carries it and the others are zero.
    """
    S = get_structure(args.structure)
    H = get_structure("rational") if S.carrier == "qvec" else S
    x0 = parse_element(args.x0_norm, H)
    r = parse_element(args.r, H)
    if S.carrier == "qvec":
        zero = Scaled(H.zero, Geometric(r, H))
        first = Scaled(x0, Geometric(r, H))
        x = Componentwise((first,) + (zero,) * (S.params["dim"] - 1))
    else:
        x = Scaled(x0, Geometric(r, S))
    cert = ratio_test(x, x0, r)
    eps = _epsilons(args.eps, cert.norm.target)
    report, rep = _validation(cert, eps, args.depth)
    settings = {
        "structure": S.id,
        "x0_norm": H.render(x0),
        "r": H.render(r),
        "depth": args.depth,
        "eps": _render_list(cert.norm.target, eps),
    }
    result = {"certificate": cert.to_json(), "validation": rep}
    return CommandResult("ratio", OK if report.passed else LAW_FAILURE, settings, result)


def cmd_bernoulli(args):
    S = get_structure(args.structure)
    xs = [parse_element(t.strip(), S) for t in args.xs.split(";")]
    report = bernoulli_check(S, xs, args.mode)
    settings = {"structure": S.id, "xs": [S.render(x) for x in xs], "mode": args.mode}
    result = {
        "lhs": report.details.get("lhs"),
        "rhs": report.details.get("rhs"),
        "equal": report.details.get("equal"),
        "pass": report.passed and not report.precondition_failures,
        "failures": [f.as_dict() for f in report.failures],
        "precondition_failures": list(report.precondition_failures),
    }
    if report.precondition_failures:
        code = PRECONDITION_FAILURE
    else:
        code = OK if report.passed else LAW_FAILURE
    return CommandResult("bernoulli", code, settings, result)


def cmd_cert_validate(args):
    with open(args.file) as fh:
        cert = certificate_from_json(json.load(fh))
    eps = _epsilons(args.eps, cert.norm.target)
    report, rep = _validation(cert, eps, args.depth)
    settings = {"file": args.file, "depth": args.depth, "eps": _render_list(cert.norm.target, eps)}
    return CommandResult("cert validate", OK if report.passed else LAW_FAILURE, settings, rep)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    p = _Parser(prog="hemiring", description="Exact checks and series certificates over ordered hemirings.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print the payload as JSON")
        return sp

    sp = common(sub.add_parser("laws", help="sampled hemiring and order laws"))
    sp.add_argument("--structure", required=True)
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.set_defaults(func=cmd_laws)

    sp = common(sub.add_parser("witness", help="density or shrink witness"))
    sp.add_argument("kind", choices=("density", "shrink"))
    sp.add_argument("--structure", required=True)
    sp.add_argument("--epsilon")
    sp.add_argument("--alpha")
    sp.add_argument("--m")
    sp.set_defaults(func=cmd_witness)

    norm = sub.add_parser("norm", help="build or check pseudonorms")
    nsub = norm.add_subparsers(dest="norm_command", parser_class=_Parser)
    nsub.required = True
    sp = common(nsub.add_parser("build", help="norm from structure constants"))
    sp.add_argument("--constants", required=True)
    sp.add_argument("--check-samples", type=int, default=DEFAULT_SAMPLES)
    sp.set_defaults(func=cmd_norm_build, seed=DEFAULT_SEED)
    sp = common(nsub.add_parser("check", help="pseudonorm laws of a built-in norm"))
    sp.add_argument("--kind", required=True)
    sp.add_argument("--structure", required=True)
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sp.set_defaults(func=cmd_norm_check, seed=DEFAULT_SEED)

    seq = sub.add_parser("seq", help="evaluate sequences")
    ssub = seq.add_subparsers(dest="seq_command", parser_class=_Parser)
    ssub.required = True
    sp = common(ssub.add_parser("eval", help="terms or partial sums of an expression"))
    sp.add_argument("--structure", required=True)
    sp.add_argument("--term", required=True)
    sp.add_argument("--from", dest="from_", type=int, required=True)
    sp.add_argument("--to", type=int, required=True)
    sp.add_argument("--partial-sums", action="store_true")
    sp.set_defaults(func=cmd_seq_eval)

    sp = common(sub.add_parser("geom", help="geometric series sum and certificate"))
    sp.add_argument("--structure", required=True)
    sp.add_argument("--r", required=True)
    sp.add_argument("--terms", type=int, default=20)
    sp.set_defaults(func=cmd_geom)

    sp = common(sub.add_parser("condense", help="condensation certificates"))
    sp.add_argument("direction", choices=("forward", "backward", "roundtrip"))
    sp.add_argument("--structure", required=True)
    sp.add_argument("--term", required=True)
    sp.add_argument("--eps")
    sp.add_argument("--depth", type=int, default=DEFAULT_PROBE_DEPTH)
    sp.set_defaults(func=cmd_condense)

    sp = common(sub.add_parser("ratio", help="ratio test certificate"))
    sp.add_argument("--structure", required=True)
    sp.add_argument("--x0-norm", required=True)
    sp.add_argument("--r", required=True)
    sp.add_argument("--eps")
    sp.set_defaults(func=cmd_ratio, depth=DEFAULT_PROBE_DEPTH)

    sp = common(sub.add_parser("bernoulli", help="Bernoulli inequality on given inputs"))
    sp.add_argument("--structure", required=True)
    sp.add_argument("--xs", required=True)
    sp.add_argument("--mode", required=True)
    sp.set_defaults(func=cmd_bernoulli)

    cert = sub.add_parser("cert", help="certificate files")
    csub = cert.add_subparsers(dest="cert_command", parser_class=_Parser)
    csub.required = True
    sp = common(csub.add_parser("validate", help="validate a certificate file"))
    sp.add_argument("--file", required=True)
    sp.add_argument("--eps")
    sp.add_argument("--depth", type=int, default=DEFAULT_PROBE_DEPTH)
    sp.set_defaults(func=cmd_cert_validate)
    return p


def _positive_ints(args):
    for name in ("samples", "check_samples", "depth", "terms"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")


def run(argv):
    """Parse ``argv`` and run one subcommand; returns ``(CommandResult, as_json)``."""
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        _positive_ints(args)
        result = args.func(args)
        result.settings.setdefault("seed", DEFAULT_SEED)
        result.settings.setdefault("samples", result.settings.get("check_samples", DEFAULT_SAMPLES))
        result.settings.setdefault("depth", DEFAULT_PROBE_DEPTH)
        return result, as_json
    except UsageError as exc:
        return CommandResult(argv[0] if argv else "", USAGE_ERROR, _default_settings(), {"error": "usage", "message": str(exc)}), as_json
    except _INPUT_ERRORS as exc:
        return _error(argv, USAGE_ERROR, exc), as_json
    except HemiringError as exc:
        return _error(argv, PRECONDITION_FAILURE, exc), as_json
    except ValueError as exc:
        return _error(argv, USAGE_ERROR, exc), as_json


def _default_settings():
    return {"seed": DEFAULT_SEED, "samples": DEFAULT_SAMPLES, "depth": DEFAULT_PROBE_DEPTH}


def _error(argv, code, exc):
    return CommandResult(argv[0] if argv else "", code, _default_settings(), {"error": type(exc).__name__, "message": str(exc)})


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    result, as_json = run(argv)
    text = result.to_json() if as_json else _with_header(result)
    out = sys.stderr if result.code == USAGE_ERROR else sys.stdout
    print(text, file=out)
    return result.code


def _with_header(result):
    s = result.settings
    head = f"# hemiring {result.command}  seed={s.get('seed', DEFAULT_SEED)}  samples={s.get('samples', DEFAULT_SAMPLES)}  depth={s.get('depth', DEFAULT_PROBE_DEPTH)}"
    return head + "\n" + result.to_table()


if __name__ == "__main__":
    sys.exit(main())
