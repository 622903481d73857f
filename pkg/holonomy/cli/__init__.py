from holonomy.cli.main import build_parser, run
from holonomy.cli.schemas import CommandConfig, RunReport, RunStatus

__all__ = ["build_parser", "run", "CommandConfig", "RunReport", "RunStatus"]
