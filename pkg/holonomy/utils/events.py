"""
'holonomy/utils/events.py': Run event collection attached to reports.
"""
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, Iterator, List, Optional

# Events of the current run; the CLI drains them into its RunReport.
execution_events: List[Dict[str, Any]] = []


def add_event(level: str, message: str, context: Optional[Dict[str, Any]] = None) -> None:
    """
    Collects an execution event.

    Args:
        level (str): The log level (e.g., 'INFO', 'ERROR').
        message (str): The event message.
        context (Optional[Dict[str, Any]], optional): Additional context for the event.
    """
    execution_events.append({
        "timestamp": datetime.now().isoformat(),
        "level": level,
        "message": message,
        "context": context or {},
    })


def drain_events() -> List[Dict[str, Any]]:
    """Return and clear the collected events."""
    events = list(execution_events)
    execution_events.clear()
    return events


@contextmanager
def timed_event(message: str, context: Optional[Dict[str, Any]] = None) -> Iterator[Dict[str, Any]]:
    """
    Record a start/stop pair of events with the elapsed seconds.

    The yielded dict may be filled by the caller; it is merged into the stop event.
    """
    extra: Dict[str, Any] = dict(context or {})
    start = datetime.now()
    add_event("DEBUG", f"{message} started", dict(extra))
    try:
        yield extra
    finally:
        extra["seconds"] = (datetime.now() - start).total_seconds()
        add_event("INFO", f"{message} finished", extra)
