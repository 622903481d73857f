"""
'cli/inputs.py': Flag validators and readers for series and operator files.

Series and operator files are accepted bare (the JSON written by Series.to_dict
or DiffOp.to_dict) or wrapped in a RunReport produced by an earlier command.
"""
import argparse
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
import sympy

from holonomy.exceptions import UsageError
from holonomy.operators.diffop import DiffOp, ParamDiffOp
from holonomy.operators.local import INFINITY
from holonomy.rings.fields import MIN_PRIME, parse_rational
from holonomy.rings.series import Series


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def natural_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def prime_int(text: str) -> int:
    value = positive_int(text)
    if not sympy.isprime(value) or value <= MIN_PRIME:
        raise argparse.ArgumentTypeError(f"expected a prime above {MIN_PRIME}, got {value}")
    return value


def rational_text(text: str) -> str:
    """Validate 'num/den' and return it unchanged."""
    try:
        parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational 'num/den', got {text!r}")
    return text.strip()


def int_range(text: str) -> List[int]:
    """'3-8' or '3,5,7' or '4'."""
    try:
        if "-" in text.strip()[1:]:
            lo, hi = text.split("-", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 3-8 or a list like 3,5,7, got {text!r}")
    if not values or min(values) < 0:
        raise argparse.ArgumentTypeError(f"empty or negative range {text!r}")
    return values


def head_factor(text: str) -> Tuple[List[int], int]:
    """'1,-4:4' is the factor 1 - 4w with multiplicity 4; the multiplicity defaults to 1."""
    coeffs, _, mult = text.partition(":")
    try:
        poly = [int(c) for c in coeffs.split(",")]
        multiplicity = int(mult) if mult else 1
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integer coefficients with ':multiplicity', got {text!r}")
    if len(poly) < 2 or multiplicity < 1:
        raise argparse.ArgumentTypeError(f"factor {text!r} must have degree >= 1 and multiplicity >= 1")
    return poly, multiplicity


def degree_spec(text: str) -> Optional[int]:
    """A nonnegative degree, or 'auto' (returned as None) for a degree scan."""
    if text.strip().lower() == "auto":
        return None
    return natural_int(text)


def parse_point(text: str):
    """
    'infinity', a rational 'a/b', or little-endian factor coefficients '1,3,4'.
    """
    text = text.strip()
    if text.lower() in (INFINITY, "oo", "inf"):
        return INFINITY
    try:
        if "," in text:
            return [rational_text(c) for c in text.split(",")]
        return rational_text(text)
    except argparse.ArgumentTypeError as e:
        raise UsageError(f"--point: {e}")


def parse_number(text: str, dps: int = 30):
    """
    Exact rational for 'num/den' input; otherwise a sympy expression ('I' is the
    imaginary unit) evaluated to an mpmath number at `dps` digits.
    """
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        expr = sympy.sympify(text)
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise UsageError(f"cannot read number {text!r}", cause=e)
    if expr.free_symbols:
        raise UsageError(f"number {text!r} contains free symbols {sorted(map(str, expr.free_symbols))}")
    re, im = expr.as_real_imag()
    with mpmath.workdps(dps):
        real = mpmath.mpf(str(sympy.N(re, dps + 5)))
        imag = mpmath.mpf(str(sympy.N(im, dps + 5)))
        return real if imag == 0 else mpmath.mpc(real, imag)


def _read_json(path: str) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise UsageError(f"no such file: {path}", cause=e)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not JSON", cause=e)


def _unwrap(data: Dict[str, Any], keys: Sequence[str]) -> List[Dict[str, Any]]:
    """The payload itself, or the named entries of a wrapped RunReport result."""
    if "coefficients" in data:
        return [data]
    result = data.get("result", {})
    for key in keys:
        value = result.get(key)
        if isinstance(value, dict):
            return [value]
        if isinstance(value, list) and value:
            return list(value)
    return []


def read_series(path: str) -> Series:
    found = _unwrap(_read_json(path), ("series",))
    if not found:
        raise UsageError(f"--series: {path} holds no series")
    return Series.from_dict(found[0])


def read_operators(path: str) -> List[DiffOp]:
    """Every operator of a file: a bare operator, or 'operator'/'operators' of a report."""
    found = _unwrap(_read_json(path), ("operator", "operators"))
    if not found:
        raise UsageError(f"--in: {path} holds no operator")
    return [DiffOp.from_dict(d) for d in found]


def inline_operator(text: str, variable: str, parameter: Optional[str]) -> DiffOp:
    """Coefficients a_0;...;a_q of sum a_i D^i as sympy expressions."""
    coeffs = [c.strip() for c in text.split(";")]
    if len(coeffs) < 1 or not all(coeffs):
        raise UsageError(f"--op: empty coefficient in {text!r}")
    try:
        if parameter:
            return ParamDiffOp.from_strings(coeffs, variable, parameter)
        return DiffOp.from_strings(coeffs, variable)
    except (sympy.SympifyError, SyntaxError, TypeError, ValueError) as e:
        raise UsageError(f"--op: cannot read {text!r}", cause=e)


def collect_operators(paths: Sequence[str], inline: Sequence[str], variable: str, parameter: Optional[str]) -> List[DiffOp]:
    """Operands from --in files first, then from --op strings."""
    ops: List[DiffOp] = []
    for path in paths or ():
        ops.extend(read_operators(path))
    for text in inline or ():
        ops.append(inline_operator(text, variable, parameter))
    return ops
