"""
'suites/service.py': Suite registry; one entry per `verify` target.
"""
import logging
from typing import Any, Callable, Dict, Iterable, Optional

from holonomy.scaling.bridge import bridge_suite
from holonomy.scaling.limit import scaled_structure_report
from holonomy.suites.beukers import beukers_suite
from holonomy.suites.ek import ek_suite
from holonomy.suites.pvi import DEFAULT_LAMBDAS, kw_suite, pvi_suite
from holonomy.suites.schemas import SuiteName, SuiteReport
from holonomy.suites.structure import doll_direct_sum, intertwiner_report, russian_doll_report
from holonomy.suites.theta import theta_suite

logger = logging.getLogger("holonomy.suites.service")


def _ints(values: Optional[Iterable], default) -> tuple:
    return tuple(int(v) for v in values) if values else tuple(default)


def _pvi(N=None, lam=None, branch=None, order: Optional[int] = None, **_) -> SuiteReport:
    return pvi_suite(
        Ns=_ints(N, (0, 1, 2)),
        lambdas=tuple(lam) if lam else DEFAULT_LAMBDAS,
        branches=tuple(branch) if branch else ("below", "above"),
        order=order or 40,
    )


def _kw(**_) -> SuiteReport:
    return kw_suite()


def _ek(N=None, order: Optional[int] = None, **_) -> SuiteReport:
    return ek_suite(Ns=_ints(N, range(5)), order=order or 50)


def _doll(N=None, order: Optional[int] = None, **_) -> SuiteReport:
    return russian_doll_report(Ns=_ints(N, (0, 1, 2)), order=order or 60)


def _direct_sum(N=None, **_) -> SuiteReport:
    cells = []
    for n in _ints(N, (0,)):
        cells.extend(doll_direct_sum(n).cells)
    return SuiteReport(suite=SuiteName.DIRECT_SUM.value, cells=cells)


def _intertwiners(**_) -> SuiteReport:
    return intertwiner_report()


def _theta(lam=None, t: Optional[str] = None, order: Optional[int] = None, **_) -> SuiteReport:
    return theta_suite(lambdas=tuple(lam) if lam else ("1", "-1", "1/2"), t=t or "1/10", order=order or 60)


def _beukers(n=None, **_) -> SuiteReport:
    return beukers_suite(ns=_ints(n, (1, 2, 3, 4)))


def _scaling(**_) -> SuiteReport:
    return scaled_structure_report()


def _bridge(**_) -> SuiteReport:
    return bridge_suite()


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    SuiteName.PVI.value: _pvi,
    SuiteName.KW.value: _kw,
    SuiteName.EK.value: _ek,
    SuiteName.RUSSIAN_DOLL.value: _doll,
    SuiteName.DIRECT_SUM.value: _direct_sum,
    SuiteName.INTERTWINERS.value: _intertwiners,
    SuiteName.THETA.value: _theta,
    SuiteName.BEUKERS.value: _beukers,
    SuiteName.SCALING.value: _scaling,
    SuiteName.BRIDGE.value: _bridge,
}


def run_suite(name: str, **params: Any) -> SuiteReport:
    """
    Run one named suite; cells come back in canonical order.

    Raises:
        ValueError: If the suite name is unknown.
    """
    try:
        runner = SUITES[SuiteName(name).value]
    except ValueError:
        raise ValueError(f"Unsupported suite: {name}. Choose one of {SuiteName.list()}")
    report = runner(**params)
    logger.info(f"[run_suite] {name}: {len(report.cells)} cells, {len(report.failures())} failed")
    return report
