"""On-disk cache of computed tables.

Entries are JSON files named by a sha256 over the Cartan matrix, the
engine, the job parameters and ``FORMAT_VERSION``.  The cache is advisory:
an unreadable entry is reported with a warning and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import warnings
from pathlib import Path
from typing import Callable

from filelock import FileLock

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
ENV_VAR = "KMDECOMP_CACHE"

__all__ = ["Cache", "FORMAT_VERSION", "ENV_VAR", "cache_key", "resolve_cache_dir"]


def resolve_cache_dir(flag: str | None) -> Path | None:
    """The environment variable wins over the flag; neither means no cache."""
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(flag) if flag else None


def cache_key(datum, kind: str, engine: str, lambdas, depth: int, extra=None) -> str:
    payload = {
        "gcm": [list(r) for r in datum.gcm],
        "kind": kind,
        "model": engine,
        "lambdas": [list(l) for l in lambdas],
        "depth": depth,
        "extra": extra,
        "version": FORMAT_VERSION,
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


class Cache:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str):
        path = self._path(key)
        if not path.exists():
            return None
        with FileLock(str(path) + ".lock"):
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
                if data.get("version") != FORMAT_VERSION or data.get("key") != key:
                    raise ValueError("version or key mismatch")
                return data["payload"]
            except (ValueError, KeyError, OSError) as exc:
                warnings.warn(f"ignoring unreadable cache entry {path.name}: {exc}", RuntimeWarning)
                return None

    def put(self, key: str, payload) -> None:
        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        with FileLock(str(path) + ".lock"):
            tmp.write_text(json.dumps({"version": FORMAT_VERSION, "key": key, "payload": payload},
                                      sort_keys=True), encoding="utf-8")
            os.replace(tmp, path)

    def fetch(self, key: str, compute: Callable[[], object], dump: Callable, load: Callable):
        """Return ``load(payload)`` from the cache, or compute, store and return."""
        hit = self.get(key)
        if hit is not None:
            try:
                return load(hit)
            except (ValueError, KeyError, TypeError) as exc:
                warnings.warn(f"ignoring malformed cache payload {key[:12]}: {exc}", RuntimeWarning)
        value = compute()
        try:
            self.put(key, dump(value))
        except OSError as exc:
            log.warning("could not write cache entry: %s", exc)
        return value
