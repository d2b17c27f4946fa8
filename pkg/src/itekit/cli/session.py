from __future__ import annotations

import csv
import io
import json
import typing
from functools import cached_property
from pathlib import Path

import click

from itekit.cache import SpectrumCache
from itekit.common import fmt, jsonable
from itekit.settings import RunConfig, load_config


class Session:
    """State shared by the commands of one invocation: config, cache and output target."""

    def __init__(
        self,
        config: str | None = None,
        cache_dir: str | None = None,
        threads: int | None = None,
        out: str | None = None,
    ) -> None:
        overrides = {"threads": threads} if threads else None
        self.config: RunConfig = load_config(config, overrides)
        self.cache_flag = cache_dir
        self.out = out

    @property
    def threads(self) -> int:
        return self.config.threads

    @property
    def tolerances(self):
        return self.config.tolerances

    @cached_property
    def cache(self) -> SpectrumCache:
        return SpectrumCache(self.config.resolved_cache_dir(self.cache_flag))

    def close(self) -> None:
        if "cache" in self.__dict__:
            self.cache.close()

    def emit(self, text: str) -> None:
        if self.out:
            Path(self.out).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)

    def write_json(self, payload: dict) -> None:
        """Payload with the config echo, stable key order, UTF-8."""

        data = {**jsonable(payload), **self.config.echo()}
        self.emit(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n")

    def write_csv(self, header: list[str], rows: typing.Iterable[typing.Sequence]) -> None:
        """CSV with a ``# config_digest=...`` line ahead of the header."""

        buffer = io.StringIO()
        buffer.write(f"# config_digest={self.config.digest}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
        self.emit(buffer.getvalue())
