"""Persistent spent-nullifier set with atomic check-and-insert.

The backing store is an append-only text log, one 0x-prefixed 64-hex-char
nullifier per line — human-auditable and crash-tolerant. A torn final line
(no trailing newline, or a partial write) is detected on open and truncated
with a warning; a malformed complete line means real corruption and is
refused.

One registry object serializes all callers within its process; sharing one
log file across processes is out of contract (front it with a single
owning process instead).
"""

from __future__ import annotations

import logging
import os
import threading
from enum import Enum

from .errors import RegistryCorruptError, RegistryError
from .field import FieldElement

logger = logging.getLogger(__name__)


class NullifierStatus(Enum):
    FRESH = "fresh"
    REPLAY = "replay"


class NullifierSet:
    """Spent-nullifier registry enforcing one verification per molecule."""

    def __init__(self, path: str, entries: set, handle):
        self._path = path
        self._entries = entries
        self._handle = handle
        self._lock = threading.Lock()

    @classmethod
    def open(cls, path: str) -> "NullifierSet":
        """Load (or create) a registry at the given path."""
        entries = set()
        try:
            if os.path.exists(path):
                with open(path, "rb") as fh:
                    raw = fh.read()
                keep = len(raw)
                if raw and not raw.endswith(b"\n"):
                    keep = raw.rfind(b"\n") + 1
                    logger.warning(
                        "registry %s: truncating torn final line (%d bytes)", path, len(raw) - keep
                    )
                    with open(path, "ab") as fh:
                        fh.truncate(keep)
                for line_no, line in enumerate(raw[:keep].splitlines(), start=1):
                    text = line.decode("ascii", errors="replace").strip()
                    if not text:
                        continue
                    try:
                        entries.add(int(FieldElement.from_hex(text)))
                    except Exception:
                        raise RegistryCorruptError(
                            f"{path}: line {line_no} is not a nullifier: {text[:80]!r}"
                        ) from None
            handle = open(path, "ab")
        except OSError as exc:
            raise RegistryError(f"cannot open registry {path}: {exc}") from None
        return cls(path, entries, handle)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, nullifier) -> bool:
        return int(nullifier) in self._entries

    @property
    def path(self) -> str:
        return self._path

    def entries(self) -> list:
        """Stable snapshot of the spent set."""
        return [FieldElement(v) for v in sorted(self._entries)]

    def check_and_insert(self, nullifier) -> NullifierStatus:
        """Atomically test-and-record a nullifier.

        FRESH means the entry is now durably on disk; REPLAY leaves the set
        untouched. An append failure rolls the in-memory set back so no
        phantom entry survives.
        """
        value = int(FieldElement(int(nullifier)))
        with self._lock:
            if value in self._entries:
                return NullifierStatus.REPLAY
            self._entries.add(value)
            try:
                self._handle.write((FieldElement(value).to_hex() + "\n").encode("ascii"))
                self._handle.flush()
                os.fsync(self._handle.fileno())
            except OSError as exc:
                self._entries.discard(value)
                raise RegistryError(f"append to {self._path} failed: {exc}") from None
            return NullifierStatus.FRESH

    def close(self):
        with self._lock:
            if self._handle is not None:
                self._handle.close()
                self._handle = None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
        return False
