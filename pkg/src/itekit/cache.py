"""Persistent cache of per-mode Dirichlet spectra.

Uses an sqlite3 database ``spectra.db`` in the cache directory. Rows are
immutable: a key is the sha256 of the manifold, mode, upper end, tolerances
and a format tag, so a changed input never hits a stale row.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path

from itekit.logger import get_logger
from itekit.manifold import WarpedManifold
from itekit.radial import DirichletEigenRecord, dirichlet_spectrum_mode
from itekit.settings import DEFAULT_TOLERANCES, Tolerances, digest

log = get_logger(__name__)

FORMAT_TAG = "spectra-v1"


class SpectrumCache:
    """Manages cached Dirichlet spectra.

    Writes are serialized through one lock; the connection is shared by the
    worker threads of a run."""

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / "spectra.db"

        self.lock = threading.Lock()
        self.db = sqlite3.connect(self.path, check_same_thread=False)
        self.cursor = self.db.cursor()
        self.cursor.executescript(
            """
            CREATE TABLE IF NOT EXISTS spectra (
                key TEXT PRIMARY KEY,
                manifold TEXT NOT NULL,
                l INTEGER NOT NULL,
                lambda_max REAL NOT NULL,
                records TEXT NOT NULL
            );
            """
        )
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(m: WarpedManifold, l: int, lambda_max: float, tol: Tolerances) -> str:
        return digest(
            {
                "format": FORMAT_TAG,
                "manifold": m.to_dict(),
                "l": int(l),
                "lambda_max": float(lambda_max),
                "tolerances": tol.to_dict(),
            }
        )

    def get(self, key: str) -> list[DirichletEigenRecord] | None:
        with self.lock:
            self.cursor.execute("SELECT records FROM spectra WHERE key = ?;", (key,))
            row = self.cursor.fetchone()
        if row is None:
            return None
        return [DirichletEigenRecord.from_dict(r) for r in json.loads(row[0])]

    def put(
        self,
        key: str,
        m: WarpedManifold,
        l: int,
        lambda_max: float,
        records: list[DirichletEigenRecord],
    ) -> None:
        payload = json.dumps([r.to_dict() for r in records])
        with self.lock:
            self.cursor.execute(
                "INSERT OR IGNORE INTO spectra (key, manifold, l, lambda_max, records) VALUES (?, ?, ?, ?, ?);",
                (key, json.dumps(m.to_dict(), sort_keys=True), int(l), float(lambda_max), payload),
            )
            self.db.commit()

    def spectrum(
        self,
        m: WarpedManifold,
        l: int,
        lambda_max: float,
        tol: Tolerances = DEFAULT_TOLERANCES,
    ) -> list[DirichletEigenRecord]:
        """``dirichlet_spectrum_mode`` through the cache."""

        key = self.key(m, l, lambda_max, tol)
        cached = self.get(key)
        if cached is not None:
            self.hits += 1
            log.debug(f"cache hit: {m.name or 'manifold'} l={l} lambda_max={lambda_max}")
            return cached

        self.misses += 1
        records = dirichlet_spectrum_mode(m, l, lambda_max, tol)
        self.put(key, m, l, lambda_max, records)
        return records

    def clear(self) -> None:
        with self.lock:
            self.cursor.execute("DELETE FROM spectra;")
            self.db.commit()

    def close(self) -> None:
        with self.lock:
            self.db.close()
