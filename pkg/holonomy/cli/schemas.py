"""
'cli/schemas.py': Report envelope written by every command.
"""
from collections import namedtuple
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from config.loader import FitSettings, NumericSettings

REPORT_FORMAT = 1

# result: JSON-ready dict; passed: verdict behind the exit code.
Outcome = namedtuple("Outcome", ["result", "passed"])


class CommandGroup(str, Enum):
    SERIES = "series"
    ODE = "ode"
    OP = "op"
    VERIFY = "verify"
    MODULAR = "modular"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class RunStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    USAGE = "usage-error"
    INCONCLUSIVE = "numeric-inconclusive"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


EXIT_CODES = {
    RunStatus.PASS: 0,
    RunStatus.FAIL: 1,
    RunStatus.USAGE: 2,
    RunStatus.INCONCLUSIVE: 3,
}


class RunReport(BaseModel):
    """
    Machine-readable outcome of one CLI invocation.

    Fields:
        format: File format version.
        command: Group and subcommand, e.g. 'ode fit'.
        arguments: Parsed flags that shaped the run.
        status: pass, fail, usage-error or numeric-inconclusive.
        result: Command output (series, operators, reports, roots).
        error: Error text when the command raised.
        events: Run events collected while the command executed.
    """
    format: int = Field(REPORT_FORMAT, description="File format version")
    command: str = Field(..., description="Group and subcommand")
    arguments: Dict[str, Any] = Field(default_factory=dict, description="Parsed flags")
    status: RunStatus = Field(..., description="Verdict of the run")
    result: Dict[str, Any] = Field(default_factory=dict, description="Command output")
    error: Optional[str] = Field(None, description="Error text when the command raised")
    events: List[Dict[str, Any]] = Field(default_factory=list, description="Collected run events")

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class CommandConfig(BaseModel):
    """
    Settings resolved once per invocation from config.yaml, the environment and flags.

    Fields:
        command: Group and subcommand.
        primes: Primes for modular work, reference primes first.
        fit: Margin, exact/modular switch and prime budget.
        numeric: Working precision and tolerances.
        cache_dir: Series cache root, None when caching is off.
        suite_orders: Default truncation orders of the suites.
    """
    command: str = Field(..., description="Group and subcommand")
    primes: List[int] = Field(default_factory=list, description="Primes for modular work")
    fit: FitSettings = Field(default_factory=FitSettings)
    numeric: NumericSettings = Field(default_factory=NumericSettings)
    cache_dir: Optional[str] = Field(None, description="Series cache root")
    suite_orders: Dict[str, int] = Field(default_factory=dict, description="Default suite orders")
