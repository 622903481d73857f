"""
'generators/cache.py': Content-addressed series cache on the local file system.
"""
import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from holonomy.rings.series import Series

logger = logging.getLogger("holonomy.generators.cache")

CACHE_ENV = "HOLONOMY_CACHE_DIR"


def cache_key(generator: str, params: Dict[str, Any], prime: Optional[int], order: int) -> str:
    """SHA-256 of the canonical JSON of (generator, parameters, prime, order)."""
    payload = json.dumps(
        {"generator": generator, "params": params, "prime": prime, "order": order},
        sort_keys=True,
        separators=(",", ":"),
        default=str,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class SeriesCache:
    """
    File-based cache: one JSON document per key under a base directory.

    Keys are content addresses only; there is no timestamp logic.
    """

    def __init__(self, base_path: Optional[str] = None):
        """
        Args:
            base_path (Optional[str]): Cache root; defaults to $HOLONOMY_CACHE_DIR.
        """
        base_path = base_path or os.environ.get(CACHE_ENV)
        self.enabled = bool(base_path)
        self.base_path = Path(base_path) if base_path else None
        if self.enabled:
            self.base_path.mkdir(parents=True, exist_ok=True)

    def _get_path(self, key: str) -> Path:
        return self.base_path.joinpath(key[:2], f"{key}.json")

    def fetch(self, key: str) -> Optional[Series]:
        """Return the cached series or None on a miss."""
        if not self.enabled:
            return None
        path = self._get_path(key)
        try:
            with path.open("r") as f:
                data = json.load(f)
        except FileNotFoundError:
            return None
        logger.debug(f"[SeriesCache.fetch] hit {key}")
        return Series.from_dict(data["series"])

    def save(self, key: str, series: Series, meta: Optional[Dict[str, Any]] = None) -> None:
        """Write the series under its key (atomic rename)."""
        if not self.enabled:
            return
        path = self._get_path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with tmp.open("w") as f:
            json.dump({"format": 1, "key": key, "meta": meta or {}, "series": series.to_dict()}, f, sort_keys=True)
        tmp.replace(path)
        logger.debug(f"[SeriesCache.save] stored {key}")

    def count(self) -> int:
        """Number of cached documents."""
        if not self.enabled:
            return 0
        return sum(1 for _ in self.base_path.rglob("*.json"))

    def clear(self) -> int:
        """Remove every cached document; returns the number removed."""
        if not self.enabled:
            return 0
        removed = 0
        for path in self.base_path.rglob("*.json"):
            path.unlink()
            removed += 1
        return removed
