"""
'operators/serialization.py': Operator JSON files.
"""
import json
from pathlib import Path
from typing import Union

from holonomy.exceptions import DomainMismatchError
from holonomy.operators.diffop import DiffOp


def dumps(op: DiffOp) -> str:
    return json.dumps(op.to_dict(), sort_keys=True)


def loads(text: str) -> DiffOp:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainMismatchError("[loads] operator JSON is malformed", cause=e)
    if "coefficients" not in data:
        raise DomainMismatchError("[loads] operator JSON has no coefficients")
    return DiffOp.from_dict(data)


def save_operator(op: DiffOp, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(op), encoding="utf-8")
    return path


def load_operator(path: Union[str, Path]) -> DiffOp:
    return loads(Path(path).read_text(encoding="utf-8"))
