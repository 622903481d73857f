"""
'modular/catalog.py': Catalog of named singularity polynomials.
"""
import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, ValidationError

from holonomy.exceptions import DomainMismatchError
from holonomy.modular.schemas import CatalogEntry

logger = logging.getLogger("holonomy.modular.catalog")

CATALOG_PATH = Path(__file__).parent / "data" / "catalog.json"


class SingularityCatalog(BaseModel):
    format: int = Field(1, description="File format version")
    entries: List[CatalogEntry] = Field(default_factory=list)

    def polynomials(self, variable: str = "w") -> List[Tuple[str, List[int]]]:
        return [(e.name, list(e.coefficients)) for e in self.entries if e.variable == variable]

    def tagged(self, tag: str, variable: Optional[str] = None) -> List[CatalogEntry]:
        return [e for e in self.entries if tag in e.tags and (variable is None or e.variable == variable)]

    def lookup(self, coefficients: Sequence, variable: str = "w") -> Optional[CatalogEntry]:
        """Entry whose polynomial equals the given one up to sign."""
        target = [int(c) for c in coefficients]
        negated = [-c for c in target]
        for e in self.entries:
            if e.variable == variable and e.coefficients in (target, negated):
                return e
        return None


@lru_cache(maxsize=None)
def _load(path: str) -> SingularityCatalog:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return SingularityCatalog.model_validate(data)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise DomainMismatchError(f"[load_catalog] cannot read catalog {path}", cause=e)


def load_catalog(path: Optional[str] = None) -> SingularityCatalog:
    catalog = _load(str(path or CATALOG_PATH))
    logger.debug(f"[load_catalog] {len(catalog.entries)} entries")
    return catalog
