"""
'cli/main.py': Argument grammar and the run(argv) entry point.

Exit codes: 0 pass, 1 fail, 2 usage error, 3 numeric-inconclusive.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from config.loader import (
    get_cache_dir,
    get_fit_config,
    get_log_level,
    get_numeric_config,
    get_primes,
    get_suite_orders,
)
from holonomy.cli.commands import HANDLERS
from holonomy.cli.inputs import (
    degree_spec,
    head_factor,
    int_range,
    natural_int,
    positive_int,
    prime_int,
    rational_text,
)
from holonomy.cli.schemas import CommandConfig, CommandGroup, RunReport, RunStatus
from holonomy.exceptions import HolonomyError, QuadratureError, UsageError
from holonomy.generators.schemas import Branch, SeriesTarget
from holonomy.modular.schemas import Direction
from holonomy.suites.schemas import SuiteName
from holonomy.utils.events import drain_events
from holonomy.utils.logging import setup_logging

logger = logging.getLogger("holonomy.cli.main")

# Event fields that change between identical runs; kept only with --timings.
VOLATILE_EVENT_FIELDS = ("timestamp", "seconds")

SUITE_HELP = {
    SuiteName.PVI.value: "sigma-form residual of the lambda-extended correlations",
    SuiteName.KW.value: "Kramers-Wannier covariance of the sigma form",
    SuiteName.EK.value: "f^(2)_{N,N} as polynomials in E and K",
    SuiteName.RUSSIAN_DOLL.value: "nested annihilation of the form factors",
    SuiteName.DIRECT_SUM.value: "F_3 = lclm(M_4, L_2) decomposition",
    SuiteName.INTERTWINERS.value: "printed intertwiners of L_3, L_4 with symmetric powers of L_2",
    SuiteName.THETA.value: "lambda-extension against the Jacobi theta ratio",
    SuiteName.BEUKERS.value: "factorization of the zeta(3) integral operators",
    SuiteName.SCALING.value: "scaling limits and their Bessel equivalences",
    SuiteName.BRIDGE.value: "numeric bridge between the scaled operators and integrals",
}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Write the JSON report here instead of standard output")
    common.add_argument("--log-level", dest="log_level", help="Logging level (default from config.yaml)")
    common.add_argument("--config", default="config.yaml", help="Configuration file")
    common.add_argument("--timings", action="store_true", help="Keep timestamps and durations in the events")
    return common


def _operands(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="inputs", action="append", default=[], help="Operator JSON file (repeatable)")
    p.add_argument(
        "--op",
        dest="inline",
        action="append",
        default=[],
        help="Inline operator 'a0;a1;...;aq' (repeatable); a leading minus works as --op=-1;1 or --op -1;1",
    )
    p.add_argument("--var", default="t", help="Variable of inline operators")
    p.add_argument("--parameter", help="Parameter of inline operators, e.g. nu = N^2")
    p.add_argument("--N", type=natural_int, help="Specialize nu = N^2 before working")


def _series_target(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target", required=True, choices=SeriesTarget.list())
    p.add_argument("--n", type=positive_int, help="Integral dimension of phiH / phiD")
    p.add_argument("--N", type=natural_int, help="Lattice distance of form factors and correlations")
    p.add_argument("--j", type=positive_int, help="Form factor index")
    p.add_argument("--lambda", dest="lam", type=rational_text, help="lambda as 'num/den'")
    p.add_argument("--branch", choices=Branch.list())
    p.add_argument("--method", choices=["lattice", "fourier"], help="phiH route")
    p.add_argument("--upper", nargs="*", type=rational_text, help="Hypergeometric numerator parameters")
    p.add_argument("--lower", nargs="*", type=rational_text, help="Hypergeometric denominator parameters")
    p.add_argument("--variable", help="Series variable of hypergeometric targets")


def _ansatz_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=positive_int, required=True, help="Operator order q")
    p.add_argument("--degree", type=degree_spec, help="Uniform coefficient degree, or 'auto'")
    p.add_argument("--head-factor", dest="head_factor", type=head_factor, action="append", default=[],
                   help="Known head factor '1,-4:4' (repeatable); switches to a Fuchsian ansatz")
    p.add_argument("--head-degree", dest="head_degree", type=natural_int, help="Degree of the head coefficient")
    p.add_argument("--scale", type=positive_int, help="Refit in x = scale * w^2")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="holonomy",
        description="Series, linear ODEs and differential operators of lattice integrals.",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    # series
    series = groups.add_parser(CommandGroup.SERIES.value, help="Exact and mod-p series").add_subparsers(dest="command", required=True)
    gen = series.add_parser("gen", parents=[common], help="Generate a series")
    _series_target(gen)
    gen.add_argument("--order", type=positive_int, required=True, help="Truncation order T")
    gen.add_argument("--prime", type=prime_int)
    cache = series.add_parser("cache", parents=[common], help="Inspect or clear the series cache")
    cache.add_argument("--clear", action="store_true")

    # ode
    ode = groups.add_parser(CommandGroup.ODE.value, help="Guess linear ODEs").add_subparsers(dest="command", required=True)
    fit = ode.add_parser("fit", parents=[common], help="Fit an operator to a series file")
    fit.add_argument("--series", required=True, help="Series JSON or a 'series gen' report")
    _ansatz_flags(fit)
    fit.add_argument("--max-degree", dest="max_degree", type=natural_int, default=40, help="Bound of --degree auto")
    fit.add_argument("--prime", type=prime_int, help="Reduce the series modulo this prime first")
    minimal = ode.add_parser("minimal", parents=[common], help="Minimal operator of several fits")
    _operands(minimal)
    lift = ode.add_parser("lift", parents=[common], help="Fit modulo primes and lift to rationals")
    _series_target(lift)
    _ansatz_flags(lift)
    lift.add_argument("--terms", type=positive_int, required=True, help="Series order generated per prime")
    lift.add_argument("--exact", action="store_true", help="Check the lift against the rational series")
    scan = ode.add_parser("scan", parents=[common], help="Floating-point singularity scan")
    scan.add_argument("--series", required=True)
    scan.add_argument("--orders", type=int_range, required=True, help="e.g. 3-8")
    scan.add_argument("--degrees", type=int_range, required=True, help="e.g. 4-20")
    scan.add_argument("--terms", type=positive_int, help="Use only the first terms of the series")
    scan.add_argument("--dps", type=positive_int)
    scan.add_argument("--csv", help="Write the stabilized roots as CSV")

    # op
    op = groups.add_parser(CommandGroup.OP.value, help="Differential operators").add_subparsers(dest="command", required=True)
    for name, text in (
        ("compose", "L1 o L2 o ..."),
        ("divrem", "Right division L = Q M + R"),
        ("gcrd", "Greatest common right divisor"),
        ("lclm", "Least common left multiple"),
        ("singular", "Factor the head polynomial"),
        ("image", "Operator of Q(solutions of M)"),
        ("peel", "Split off first-order right factors"),
    ):
        _operands(op.add_parser(name, parents=[common], help=text))
    sympow = op.add_parser("sympow", parents=[common], help="Symmetric power of an order-2 operator")
    _operands(sympow)
    sympow.add_argument("--power", type=positive_int, required=True)
    apply_ = op.add_parser("apply", parents=[common], help="Apply an operator to a series")
    _operands(apply_)
    apply_.add_argument("--series", required=True)
    for name, text in (("indicial", "Indicial polynomial at a point"), ("apparent", "Apparent-singularity test")):
        sub = op.add_parser(name, parents=[common], help=text)
        _operands(sub)
        sub.add_argument("--point", required=True, help="'infinity', 'a/b' or factor coefficients '1,3,4'")
    inter = op.add_parser("intertwine", parents=[common], help="Search (L, M) or verify (L, M, U, V)")
    _operands(inter)
    inter.add_argument("--order-bound", dest="order_bound", type=natural_int, default=3)
    inter.add_argument("--degree-bound", dest="degree_bound", type=natural_int, default=6)
    ratsols = op.add_parser("ratsols", parents=[common], help="Rational solutions")
    _operands(ratsols)
    ratsols.add_argument("--degree-bound", dest="degree_bound", type=natural_int)

    # verify
    verify = groups.add_parser(
        CommandGroup.VERIFY.value, parents=[common], help="Run a verification suite",
        description="Suites: " + "; ".join(f"{k}: {v}" for k, v in SUITE_HELP.items()),
    )
    verify.add_argument("suite", choices=SuiteName.list())
    verify.add_argument("--N", dest="N_list", type=natural_int, action="append", help="Lattice distance (repeatable)")
    verify.add_argument("--lambda", dest="lam", type=rational_text, action="append", help="lambda (repeatable)")
    verify.add_argument("--branch", choices=Branch.list(), action="append")
    verify.add_argument("--order", type=positive_int, help="Truncation order")
    verify.add_argument("--t", type=rational_text, help="Sample point of the theta suite")
    verify.add_argument("--n", type=natural_int, action="append", help="Beukers index (repeatable)")
    verify.add_argument("--csv", help="Also write the cells as CSV")

    # modular
    modular = groups.add_parser(CommandGroup.MODULAR.value, help="Elliptic and modular checks").add_subparsers(dest="command", required=True)
    j = modular.add_parser("j", parents=[common], help="j-invariant of a modulus k")
    j.add_argument("--k", required=True, help="'a/b' (exact) or a sympy expression such as (3+I*sqrt(7))/8")
    j.add_argument("--dps", type=positive_int)
    landen = modular.add_parser("landen", parents=[common], help="Landen transformation or its fixed points")
    landen.add_argument("--k")
    landen.add_argument("--direction", choices=Direction.list(), default=Direction.ASCENDING.value)
    landen.add_argument("--fixed-points", dest="fixed_points", action="store_true")
    landen.add_argument("--dps", type=positive_int)
    nome = modular.add_parser("nome", parents=[common], help="Nome and half-period ratio tau")
    nome.add_argument("--k", required=True)
    nome.add_argument("--dps", type=positive_int)
    curve = modular.add_parser("curve", parents=[common], help="Degree-2 modular polynomial at (j1, j2)")
    curve.add_argument("--j1", required=True)
    curve.add_argument("--j2", required=True)
    curve.add_argument("--dps", type=positive_int)
    heegner = modular.add_parser("heegner", parents=[common], help="j((1 + i sqrt(4n-1))/2) near an integer")
    heegner.add_argument("--n", dest="n_value", type=positive_int, required=True)
    heegner.add_argument("--dps", type=positive_int)
    nick = modular.add_parser("nickelian", parents=[common], help="Nickelian singularities for u^(2m+1) = 1")
    nick.add_argument("--m", type=positive_int, required=True)
    classify = modular.add_parser("classify", parents=[common], help="Classify head factors or a catalog list")
    _operands(classify)
    classify.add_argument("--list", help="Catalog tag, e.g. phiH5")
    classify.add_argument("--reference", help="Catalog tag whose factors are removed first, e.g. phiD5")
    classify.add_argument("--context", type=positive_int, default=5, help="Nickelian bound n")
    classify.add_argument("--apparent", action="store_true", help="Also test factors for apparent singularities")
    return parser


def _command_config(args: argparse.Namespace, command: str) -> CommandConfig:
    path = args.config
    return CommandConfig(
        command=command,
        primes=get_primes(path),
        fit=get_fit_config(path),
        numeric=get_numeric_config(path),
        cache_dir=get_cache_dir(path),
        suite_orders=get_suite_orders(path),
    )


def _arguments(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"out", "log_level", "config", "timings"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None or value == [] or value is False:
            continue
        out[key] = value if isinstance(value, (bool, int, str)) else json.loads(json.dumps(value, default=str))
    return out


def _events(timings: bool) -> List[Dict[str, Any]]:
    events = drain_events()
    if timings:
        return events
    stable = []
    for e in events:
        e = {k: v for k, v in e.items() if k not in VOLATILE_EVENT_FIELDS}
        e["context"] = {k: v for k, v in e.get("context", {}).items() if k not in VOLATILE_EVENT_FIELDS}
        stable.append(e)
    return stable


def _emit(report: RunReport, out: Optional[str]) -> None:
    text = json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2, default=str) + "\n"
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


INLINE_FLAGS = ("--op", "--point", "--lambda")


def _attach_dash_values(argv: Sequence[str]) -> List[str]:
    """Rewrite '--op -1;1' as '--op=-1;1' so argparse does not read the value as a flag."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        value = argv[i + 1] if i + 1 < len(argv) else ""
        if token in INLINE_FLAGS and value.startswith("-") and len(value) > 1 and not value.startswith("--"):
            out.append(f"{token}={value}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Execute one command or suite and write its RunReport.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        int: 0 pass, 1 fail, 2 usage error, 3 numeric-inconclusive.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_dash_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        # argparse has already printed the offending flag
        return e.code if isinstance(e.code, int) else 2

    subcommand = getattr(args, "command", None)
    command = f"verify {args.suite}" if args.group == CommandGroup.VERIFY.value else f"{args.group} {subcommand}"
    setup_logging(args.log_level or get_log_level(args.config))
    drain_events()
    handler = HANDLERS[(args.group, subcommand)]
    result: Dict[str, Any] = {}
    error = None
    try:
        config = _command_config(args, command)
        outcome = handler(args, config)
        result = outcome.result
        status = RunStatus.PASS if outcome.passed else RunStatus.FAIL
    except UsageError as e:
        status, error = RunStatus.USAGE, str(e)
    except ValueError as e:
        status, error = RunStatus.USAGE, f"{UsageError.label}: {e}"
    except QuadratureError as e:
        status, error = RunStatus.INCONCLUSIVE, str(e)
    except HolonomyError as e:
        status, error = RunStatus.FAIL, str(e)
    if error:
        logger.error(f"[run] {command}: {error}")
    report = RunReport(
        command=command,
        arguments=_arguments(args),
        status=status,
        result=result,
        error=error,
        events=_events(args.timings),
    )
    _emit(report, args.out)
    return report.exit_code
