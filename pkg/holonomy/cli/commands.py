"""
'cli/commands.py': One handler per leaf command.

Every handler takes the parsed arguments and the CommandConfig and returns an
Outcome whose result is JSON-ready.
"""
import logging
from argparse import Namespace
from functools import reduce
from typing import Any, Dict, List, Optional

import mpmath

from holonomy.cli.inputs import collect_operators, parse_number, parse_point, read_series
from holonomy.cli.schemas import CommandConfig, Outcome
from holonomy.exceptions import UsageError
from holonomy.fitting.float_scan import float_scan, scan_to_csv
from holonomy.fitting.schemas import Ansatz
from holonomy.fitting.service import degree_scan, fit, lift_fit, minimal_operator
from holonomy.generators.cache import SeriesCache
from holonomy.generators.service import generate
from holonomy.modular.classify import classify, extra_singularities, list_polynomial, nickelian
from holonomy.modular.elliptic import (
    heegner_check,
    j_of_k,
    landen,
    landen_fixed_points,
    modular_curve_residual,
    nome_tau,
)
from holonomy.operators.diffop import DiffOp, ParamDiffOp, apply, compose, gcrd, lclm, right_divrem
from holonomy.operators.intertwiners import search_intertwiner, verify_intertwiner
from holonomy.operators.local import check_apparent, indicial, singular_points
from holonomy.operators.ratsols import factor_first_order_chain, rational_solutions
from holonomy.operators.sympower import image_operator, sym_power
from holonomy.rings.fields import format_rational
from holonomy.suites.service import run_suite

logger = logging.getLogger("holonomy.cli.commands")


def _text(value: Any) -> Any:
    """JSON form of exact and mpmath numbers."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, 20)
    if hasattr(value, "denominator") and hasattr(value, "numerator"):
        return format_rational(value)
    return str(value)


def _series_params(args: Namespace) -> Dict[str, Any]:
    names = ("n", "N", "j", "lam", "branch", "method", "upper", "lower", "variable")
    return {k: getattr(args, k) for k in names if getattr(args, k, None) is not None}


def _cache(config: CommandConfig) -> SeriesCache:
    return SeriesCache(config.cache_dir)


def _operands(args: Namespace, count: Optional[int] = None, at_least: int = 1) -> List[DiffOp]:
    ops = collect_operators(args.inputs, args.inline, args.var, args.parameter)
    if args.N is not None:
        ops = [op.specialize(args.N) if isinstance(op, ParamDiffOp) else op for op in ops]
    if count is not None and len(ops) != count:
        raise UsageError(f"--in/--op: expected {count} operator(s), got {len(ops)}")
    if len(ops) < at_least:
        raise UsageError(f"--in/--op: expected at least {at_least} operator(s), got {len(ops)}")
    return ops


# -- series -----------------------------------------------------------------------------------------
def series_gen(args: Namespace, config: CommandConfig) -> Outcome:
    params = _series_params(args)
    series = generate(args.target, args.order, prime=args.prime, cache=_cache(config), **params)
    return Outcome({"target": args.target, "params": params, "series": series.to_dict()}, True)


def series_cache(args: Namespace, config: CommandConfig) -> Outcome:
    cache = _cache(config)
    removed = cache.clear() if args.clear else 0
    return Outcome(
        {
            "directory": str(cache.base_path) if cache.enabled else None,
            "enabled": cache.enabled,
            "entries": cache.count(),
            "removed": removed,
        },
        True,
    )


# -- ode --------------------------------------------------------------------------------------------
def _ansatz(args: Namespace) -> Ansatz:
    if args.head_factor:
        if args.head_degree is None:
            raise UsageError("--head-degree is required with --head-factor")
        return Ansatz.fuchsian(args.order, args.head_factor, args.head_degree, substitution_scale=args.scale)
    if args.degree is None:
        raise UsageError("--degree auto needs a series fit; give an explicit --degree here")
    return Ansatz.dense(args.order, args.degree, substitution_scale=args.scale)


def _fit_result(result) -> Dict[str, Any]:
    report = result.to_report()
    report["operator"] = minimal_operator(result.operators).to_dict()
    return report


def ode_fit(args: Namespace, config: CommandConfig) -> Outcome:
    s = read_series(args.series)
    if args.prime is not None:
        s = s.reduce(args.prime)
    if args.degree is None and not args.head_factor:
        result = degree_scan(
            s, [args.order], args.max_degree, margin=config.fit.margin,
            primes=config.primes, substitution_scale=args.scale,
        )
    else:
        result = fit(s, _ansatz(args), margin=config.fit.margin, exact_limit=config.fit.exact_limit, primes=config.primes)
    return Outcome(_fit_result(result), True)


def ode_minimal(args: Namespace, config: CommandConfig) -> Outcome:
    ops = _operands(args)
    return Outcome({"operator": minimal_operator(ops).to_dict(), "candidates": len(ops)}, True)


def ode_lift(args: Namespace, config: CommandConfig) -> Outcome:
    params = _series_params(args)
    cache = _cache(config)
    a = _ansatz(args)
    exact = generate(args.target, args.terms, cache=cache, **params) if args.exact else None
    result = lift_fit(
        lambda p: generate(args.target, args.terms, prime=p, cache=cache, **params),
        a,
        config.primes,
        exact=exact,
        margin=config.fit.margin,
        max_primes=config.fit.max_primes,
    )
    return Outcome(_fit_result(result), True)


def ode_scan(args: Namespace, config: CommandConfig) -> Outcome:
    s = read_series(args.series)
    if args.terms is not None:
        s = s.truncate(args.terms - 1)
    report = float_scan(s, args.orders, args.degrees, dps=args.dps or config.numeric.dps)
    if args.csv:
        scan_to_csv(report, args.csv)
    return Outcome(
        {
            "terms": len(s),
            "cells": [c.model_dump(mode="json") for c in report.cells],
            "roots": [r.model_dump(mode="json") for r in report.roots],
        },
        True,
    )


# -- op ---------------------------------------------------------------------------------------------
def op_compose(args: Namespace, config: CommandConfig) -> Outcome:
    ops = _operands(args, at_least=2)
    return Outcome({"operator": reduce(compose, ops).to_dict()}, True)


def op_divrem(args: Namespace, config: CommandConfig) -> Outcome:
    L, M = _operands(args, count=2)
    q, r = right_divrem(L, M)
    return Outcome({"quotient": q.to_dict(), "remainder": r.to_dict(), "divides": r.is_zero()}, True)


def op_gcrd(args: Namespace, config: CommandConfig) -> Outcome:
    return Outcome({"operator": reduce(gcrd, _operands(args, at_least=2)).to_dict()}, True)


def op_lclm(args: Namespace, config: CommandConfig) -> Outcome:
    return Outcome({"operator": reduce(lclm, _operands(args, at_least=2)).to_dict()}, True)


def op_sympow(args: Namespace, config: CommandConfig) -> Outcome:
    (L,) = _operands(args, count=1)
    return Outcome({"operator": sym_power(L, args.power).to_dict(), "power": args.power}, True)


def op_apply(args: Namespace, config: CommandConfig) -> Outcome:
    (L,) = _operands(args, count=1)
    out = apply(L, read_series(args.series))
    return Outcome({"series": out.to_dict(), "annihilates": out.is_zero()}, True)


def op_singular(args: Namespace, config: CommandConfig) -> Outcome:
    (L,) = _operands(args, count=1)
    return Outcome(singular_points(L).model_dump(mode="json"), True)


def op_indicial(args: Namespace, config: CommandConfig) -> Outcome:
    (L,) = _operands(args, count=1)
    data = indicial(L, parse_point(args.point))
    return Outcome(
        {
            "point": args.point,
            "polynomial": str(data.polynomial.as_expr()) if data.polynomial is not None else None,
            "exponents": [_text(e) for e in data.exponents],
            "residual": list(data.residual),
            "regular": data.regular,
        },
        True,
    )


def op_apparent(args: Namespace, config: CommandConfig) -> Outcome:
    (L,) = _operands(args, count=1)
    check = check_apparent(L, parse_point(args.point))
    return Outcome({"point": args.point, "apparent": check.apparent, "reason": check.reason}, True)


def op_intertwine(args: Namespace, config: CommandConfig) -> Outcome:
    """Two operands: search U, V with L U = V M. Four operands: verify the given U, V."""
    ops = _operands(args)
    if len(ops) == 4:
        L, M, U, V = ops
        ok = verify_intertwiner(L, M, U, V)
        return Outcome({"verified": ok}, ok)
    if len(ops) != 2:
        raise UsageError(f"--in/--op: expected 2 or 4 operators, got {len(ops)}")
    L, M = ops
    found = search_intertwiner(L, M, args.order_bound, args.degree_bound)
    if found is None:
        return Outcome({"found": False, "order_bound": args.order_bound, "degree_bound": args.degree_bound}, False)
    return Outcome({"found": True, "U": found.U.to_dict(), "V": found.V.to_dict()}, True)


def op_image(args: Namespace, config: CommandConfig) -> Outcome:
    M, Q = _operands(args, count=2)
    return Outcome({"operator": image_operator(M, Q).to_dict()}, True)


def op_ratsols(args: Namespace, config: CommandConfig) -> Outcome:
    (L,) = _operands(args, count=1)
    sols = rational_solutions(L, args.degree_bound)
    return Outcome({"solutions": [str(y.as_expr()) for y in sols], "count": len(sols)}, True)


def op_peel(args: Namespace, config: CommandConfig) -> Outcome:
    (L,) = _operands(args, count=1)
    chain = factor_first_order_chain(L)
    return Outcome(
        {
            "factors": [f.to_dict() for f in chain.factors],
            "complete": chain.complete,
            "remainder": chain.remainder.to_dict() if chain.remainder is not None else None,
        },
        True,
    )


# -- verify -----------------------------------------------------------------------------------------
def verify(args: Namespace, config: CommandConfig) -> Outcome:
    order = args.order or config.suite_orders.get(f"{args.suite.replace('-', '_')}_order")
    report = run_suite(args.suite, N=args.N_list, lam=args.lam, branch=args.branch, order=order, t=args.t, n=args.n)
    if args.csv:
        report.to_frame().to_csv(args.csv, index=False)
    return Outcome(report.to_report(), report.passed)


# -- modular ----------------------------------------------------------------------------------------
def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def modular_j(args: Namespace, config: CommandConfig) -> Outcome:
    dps = args.dps or config.numeric.dps
    k = parse_number(_need(args.k, "--k"), dps)
    return Outcome({"k": args.k, "j": _text(j_of_k(k, dps))}, True)


def modular_landen(args: Namespace, config: CommandConfig) -> Outcome:
    if args.fixed_points:
        factors = landen_fixed_points(args.direction)
        return Outcome(
            {
                "direction": args.direction,
                "fixed_points": [{"polynomial": c, "multiplicity": m} for c, m in factors],
            },
            True,
        )
    dps = args.dps or config.numeric.dps
    k = parse_number(_need(args.k, "--k"), dps)
    return Outcome({"k": args.k, "direction": args.direction, "image": _text(landen(k, args.direction, dps))}, True)


def modular_nome(args: Namespace, config: CommandConfig) -> Outcome:
    dps = args.dps or config.numeric.dps
    result = nome_tau(parse_number(_need(args.k, "--k"), dps), dps)
    return Outcome({**result.to_report(), "iterations": result.iterations}, True)


def modular_curve(args: Namespace, config: CommandConfig) -> Outcome:
    dps = args.dps or config.numeric.dps
    value = modular_curve_residual(parse_number(args.j1, dps), parse_number(args.j2, dps))
    return Outcome({"j1": args.j1, "j2": args.j2, "residual": _text(value)}, True)


def modular_heegner(args: Namespace, config: CommandConfig) -> Outcome:
    check = heegner_check(args.n_value, args.dps or config.numeric.dps)
    return Outcome(
        {
            "n": args.n_value,
            "tau": _text(check.tau),
            "j": _text(check.j),
            "nearest": check.nearest,
            "deviation": _text(check.deviation),
            "tail": _text(check.tail),
        },
        True,
    )


def modular_nickelian(args: Namespace, config: CommandConfig) -> Outcome:
    return Outcome(nickelian(args.m).model_dump(mode="json"), True)


def modular_classify(args: Namespace, config: CommandConfig) -> Outcome:
    if args.list:
        if args.inputs or args.inline:
            raise UsageError("--list excludes --in/--op")
        if args.reference:
            rows = extra_singularities(args.list, args.reference, args.context)
        else:
            rows = classify(list_polynomial(args.list), args.context)
    else:
        if args.reference:
            raise UsageError("--reference needs --list")
        (L,) = _operands(args, count=1)
        rows = classify(singular_points(L), args.context, operator=L if args.apparent else None)
    return Outcome({"context": args.context, "factors": [r.model_dump(mode="json") for r in rows]}, True)


HANDLERS = {
    ("series", "gen"): series_gen,
    ("series", "cache"): series_cache,
    ("ode", "fit"): ode_fit,
    ("ode", "minimal"): ode_minimal,
    ("ode", "lift"): ode_lift,
    ("ode", "scan"): ode_scan,
    ("op", "compose"): op_compose,
    ("op", "divrem"): op_divrem,
    ("op", "gcrd"): op_gcrd,
    ("op", "lclm"): op_lclm,
    ("op", "sympow"): op_sympow,
    ("op", "apply"): op_apply,
    ("op", "singular"): op_singular,
    ("op", "indicial"): op_indicial,
    ("op", "apparent"): op_apparent,
    ("op", "intertwine"): op_intertwine,
    ("op", "image"): op_image,
    ("op", "ratsols"): op_ratsols,
    ("op", "peel"): op_peel,
    ("verify", None): verify,
    ("modular", "j"): modular_j,
    ("modular", "landen"): modular_landen,
    ("modular", "nome"): modular_nome,
    ("modular", "curve"): modular_curve,
    ("modular", "heegner"): modular_heegner,
    ("modular", "nickelian"): modular_nickelian,
    ("modular", "classify"): modular_classify,
}
