"""'holonomy/utils/logging.py': Logger setup for library and CLI."""
import logging
from typing import Optional

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def setup_logging(level: str = "WARNING", fmt: Optional[str] = None) -> None:
    """
    Configure the root 'holonomy' logger once.

    Args:
        level (str): Level name, e.g. 'INFO'.
        fmt (Optional[str]): Custom format string.
    """
    root = logging.getLogger("holonomy")
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(fmt or LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
