"""Content-addressed result cache keyed by a hash of the canonical input."""
from __future__ import annotations

import hashlib
import json
import logging
import os
from fractions import Fraction
from pathlib import Path

from filelock import FileLock

log = logging.getLogger(__name__)

ENV_VAR = "CHERNFLOW_CACHE_DIR"


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def canonical_json(obj) -> str:
    """Sorted keys, no whitespace, fractions as strings."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default, ensure_ascii=False)


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def default_cache_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


class ResultCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def lookup(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        with FileLock(str(path) + ".lock"):
            try:
                doc = json.loads(path.read_text())
                payload = doc["payload"]
                if hashlib.sha256(payload.encode()).hexdigest() != doc["sha256"]:
                    raise ValueError("checksum mismatch")
            except (ValueError, KeyError, TypeError) as e:
                log.warning("corrupt cache entry %s (%s); recomputing", path.name, e)
                return None
        return payload

    def store(self, key: str, payload: str) -> None:
        path = self._path(key)
        doc = {"sha256": hashlib.sha256(payload.encode()).hexdigest(), "payload": payload}
        with FileLock(str(path) + ".lock"):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(doc))
            os.replace(tmp, path)
