"""Process-wide memo tables, optionally persisted under ``$REFORM_CACHE_DIR``.

Each table is a plain dict guarded by a lock.  When the environment variable
is set the table is loaded at first use and written back at interpreter
exit.  Files start with a short magic/version header; anything that does not
match (older format, truncated write, foreign file) is ignored, so deleting
or corrupting the cache directory is always safe.
"""
from __future__ import annotations

import atexit
import logging
import os
import pickle
import tempfile
import threading
from pathlib import Path

log = logging.getLogger(__name__)

MAGIC = b"KNRFCACHE"
FORMAT_VERSION = 1
ENV_VAR = "REFORM_CACHE_DIR"

_registry: list["PersistentMemo"] = []


class PersistentMemo:
    def __init__(self, name: str):
        self.name = name
        self._data: dict = {}
        self._lock = threading.Lock()
        self._loaded = False
        self._dirty = False
        _registry.append(self)

    def _path(self) -> Path | None:
        root = os.environ.get(ENV_VAR)
        if not root:
            return None
        return Path(root) / f"{self.name}.v{FORMAT_VERSION}.cache"

    def _ensure_loaded(self):
        if self._loaded:
            return
        with self._lock:
            if self._loaded:
                return
            self._loaded = True
            path = self._path()
            if path is None or not path.is_file():
                return
            try:
                with path.open("rb") as fh:
                    header = fh.read(len(MAGIC) + 1)
                    if header[: len(MAGIC)] != MAGIC or header[len(MAGIC)] != FORMAT_VERSION:
                        log.info("ignoring cache %s with unknown header", path)
                        return
                    stored = pickle.load(fh)
                if isinstance(stored, dict):
                    stored.update(self._data)
                    self._data = stored
            except Exception as exc:  # a damaged cache is never fatal
                log.info("ignoring unreadable cache %s: %s", path, exc)

    def get(self, key, default=None):
        self._ensure_loaded()
        return self._data.get(key, default)

    def __contains__(self, key):
        self._ensure_loaded()
        return key in self._data

    def __setitem__(self, key, value):
        self._ensure_loaded()
        self._data[key] = value
        self._dirty = True

    def __len__(self):
        return len(self._data)

    def clear(self):
        with self._lock:
            self._data.clear()
            self._dirty = False

    def flush(self):
        path = self._path()
        if path is None or not self._dirty:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with self._lock:
                snapshot = dict(self._data)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{self.name}.")
            with os.fdopen(fd, "wb") as fh:
                fh.write(MAGIC + bytes([FORMAT_VERSION]))
                pickle.dump(snapshot, fh, protocol=pickle.HIGHEST_PROTOCOL)
            os.replace(tmp, path)
            self._dirty = False
        except OSError as exc:
            log.warning("could not write cache %s: %s", path, exc)


def flush_all():
    for memo in _registry:
        memo.flush()


atexit.register(flush_all)
