"""Run configuration.

Defaults ship in ``defaults.toml`` next to this module. A run config (JSON, or
TOML by suffix) is merged over them key by key; unknown keys and mistyped
values are rejected before any computation starts.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
import typing
from dataclasses import asdict, dataclass
from pathlib import Path

import toml

from itekit.errors import ConfigError
from itekit.manifold import ManifoldPair, WarpedManifold, validate_pair

DEFAULTS_PATH = Path(__file__).with_name("defaults.toml")
CACHE_ENV = "ITEKIT_CACHE_DIR"
PROFILE_ENV = "ITEKIT_ENV"

SECTIONS = ("tolerances", "search", "symbol")
FREE_BLOCKS = ("pair", "manifold")
PLUMBING = ("threads", "cache_dir")


@dataclass(frozen=True)
class Tolerances:
    ode_rel: float = 1e-10
    root_rel: float = 1e-9
    pole_tol: float = 1e-7
    degeneracy_tol: float = 1e-8
    cap_offset: float = 1e-6
    laurent_step: float = 1e-4
    tail_safety: float = 4.0
    jump_window: float = 1e-5

    def pole_window(self, lam: complex | float) -> float:
        return self.pole_tol * max(1.0, abs(lam))

    def degeneracy_window(self, lam: float) -> float:
        return self.degeneracy_tol * max(1.0, abs(lam))

    def laurent_h(self, lam0: float) -> float:
        return self.laurent_step * max(1.0, abs(lam0))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SearchOptions:
    l_max: int = 40
    interval: tuple[float, float] = (0.05, 20.0)
    grid: int = 64
    scan_divisions: int = 64
    alpha: float = 0.0
    alpha_fraction: float = 0.5
    lam: float = 1.0
    modes: tuple[int, int] = (0, 4)
    points: int = 200


@dataclass(frozen=True)
class SymbolOptions:
    order: int = 3
    case: str = ""
    lam: str = ""
    xi: str = ""


def load_defaults(profile: str | None = None) -> dict:
    """Packaged defaults, with the ``[testing]`` overrides applied when the
    profile (or ``ITEKIT_ENV``) is ``test``."""

    with open(DEFAULTS_PATH, "r") as defaultsfile:
        defaults = toml.load(defaultsfile)

    testing = defaults.pop("testing", {})
    if (profile or os.environ.get(PROFILE_ENV, "")) == "test":
        defaults["search"].update(testing)
    return defaults


def _read(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as configfile:
            if path.suffix == ".toml":
                return toml.load(configfile)
            return json.load(configfile)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except (json.JSONDecodeError, toml.TomlDecodeError) as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e


def _check_type(default: typing.Any, value: typing.Any, where: str) -> typing.Any:
    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, (int, float)):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        if ok and isinstance(default, int) and not isinstance(default, bool):
            ok = float(value).is_integer()
            value = int(value) if ok else value
    elif isinstance(default, list):
        ok = isinstance(value, list) and len(value) == len(default)
    elif isinstance(default, str):
        ok = isinstance(value, (str, int, float)) and not isinstance(value, bool)
        value = str(value) if ok else value
    else:
        ok = True
    if not ok:
        raise ConfigError(f"{where}: expected {type(default).__name__}, got {value!r}")
    return value


def merge(defaults: dict, user: dict) -> dict:
    """Merge ``user`` over ``defaults`` with schema checks."""

    merged = copy.deepcopy(defaults)
    for key, value in user.items():
        if key in FREE_BLOCKS:
            if not isinstance(value, dict):
                raise ConfigError(f"{key}: expected an object")
            merged[key] = value
        elif key in SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"{key}: expected an object")
            for sub, subvalue in value.items():
                if sub not in defaults[key]:
                    raise ConfigError(f"unknown key {key}.{sub}")
                merged[key][sub] = _check_type(defaults[key][sub], subvalue, f"{key}.{sub}")
        elif key in defaults:
            merged[key] = _check_type(defaults[key], value, key)
        else:
            raise ConfigError(f"unknown key {key}")
    return merged


def canonical_json(data: typing.Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(data: typing.Any) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


class RunConfig:
    """Effective configuration of one run."""

    def __init__(self, effective: dict) -> None:
        self.effective = effective
        try:
            self.tolerances = Tolerances(**effective["tolerances"])
            search = dict(effective["search"])
            search["lam"] = search.pop("lambda")
            search["interval"] = tuple(search["interval"])
            search["modes"] = tuple(int(m) for m in search["modes"])
            self.search = SearchOptions(**search)
            symbol = dict(effective["symbol"])
            symbol["lam"] = symbol.pop("lambda")
            self.symbol = SymbolOptions(**symbol)
        except TypeError as e:
            raise ConfigError(f"bad configuration: {e}") from e

        if self.tolerances.ode_rel <= 0 or self.tolerances.root_rel <= 0:
            raise ConfigError("tolerances must be positive")
        if self.search.l_max < 0 or self.search.grid < 2 or self.search.scan_divisions < 2:
            raise ConfigError("search.l_max must be >= 0, search.grid and search.scan_divisions >= 2")
        a, b = self.search.interval
        if not 0 <= a <= b:
            raise ConfigError(f"search.interval must satisfy 0 <= a <= b, got {[a, b]}")

        self.threads = max(1, int(effective.get("threads", 1)))
        self.cache_dir = effective.get("cache_dir") or ""

    @property
    def results(self) -> dict:
        """Effective config without the keys that cannot change results."""

        return {k: v for k, v in self.effective.items() if k not in PLUMBING}

    @property
    def digest(self) -> str:
        return digest(self.results)

    def echo(self) -> dict:
        """Effective config plus digest, embedded in every output."""

        return {"config": self.results, "config_digest": self.digest}

    def manifold(self, key: str = "manifold") -> WarpedManifold:
        if key == "manifold" and "manifold" not in self.effective and "pair" in self.effective:
            key = "m1"
        if key in ("m1", "m2"):
            block = self.effective.get("pair", {}).get(key)
        else:
            block = self.effective.get(key)
        if not block:
            raise ConfigError(f"config has no {key!r} manifold block")
        return WarpedManifold.from_dict(block, name=key)

    def manifolds(self) -> list[WarpedManifold]:
        if "pair" in self.effective:
            return [self.manifold("m1"), self.manifold("m2")]
        return [self.manifold()]

    def pair(self) -> ManifoldPair:
        block = self.effective.get("pair")
        if not block:
            raise ConfigError("config has no 'pair' block")
        return validate_pair(
            self.manifold("m1"),
            self.manifold("m2"),
            block.get("zeta"),
            block.get("case"),
        )

    def resolved_cache_dir(self, flag: str | None = None) -> Path:
        """Cache directory: flag, then environment, then config, then ``~/.itekit/cache``."""

        chosen = flag or os.environ.get(CACHE_ENV) or self.cache_dir
        return Path(chosen).expanduser() if chosen else Path.home() / ".itekit" / "cache"


def load_config(
    path: str | Path | None = None,
    overrides: dict | None = None,
    profile: str | None = None,
) -> RunConfig:
    """Load a run config file (JSON or TOML) over the packaged defaults.

    Args:
        path: config file, or None for defaults only
        overrides (dict): extra values applied last (CLI flags)
        profile (str): ``"test"`` applies the testing overrides"""

    effective = load_defaults(profile)
    if path is not None:
        effective = merge(effective, _read(Path(path)))
    if overrides:
        effective = merge(effective, overrides)
    return RunConfig(effective)
