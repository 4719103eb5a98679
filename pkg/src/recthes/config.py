"""Configuration loading.

One JSON file declares the languages with their dictionary files, the
statistical parameters and the storage/listen locations.  Relative
paths are taken relative to the config file so a checkout can move.
The path comes from --config, the RECTHES_CONFIG variable, or
./recthes.json, in that order.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .errors import ConfigError
from .lexicon import (
    DEFAULT_CATEGORIES,
    DEFAULT_DISTANCE,
    DistMatrix,
    LanguagePaths,
    Lexicon,
    ValidationReport,
    load_lexicon,
)

ENV_VAR = "RECTHES_CONFIG"
DEFAULT_FILENAME = "recthes.json"
THESAURUS_FILENAME = "thesaurus.json"


@dataclass(frozen=True)
class Listen:
    host: str = "127.0.0.1"
    port: int = 8765


@dataclass(frozen=True)
class Config:
    languages: Mapping[str, LanguagePaths]
    categories: tuple[str, ...] = DEFAULT_CATEGORIES
    dist: DistMatrix = field(default_factory=lambda: DistMatrix(DEFAULT_DISTANCE))
    n: int = 3
    theta: float = 0.10
    cap: int = 4096
    data_dir: Path = Path("data")
    listen: Listen = field(default_factory=Listen)
    frontend_dir: Path | None = None
    source: Path | None = None

    @property
    def thesaurus_path(self) -> Path:
        return self.data_dir / THESAURUS_FILENAME

    def load_lexicon(self) -> tuple[Lexicon, ValidationReport]:
        return load_lexicon(self.languages, self.categories, self.dist)


def find_config(explicit: str | os.PathLike | None = None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(DEFAULT_FILENAME)


def _resolve(base: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else (base / p)


def _parse_dist(raw, where: str, categories: tuple[str, ...]) -> DistMatrix:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected an object")
    default = raw.get("default", DEFAULT_DISTANCE)
    if not isinstance(default, int) or default < 1:
        raise ConfigError(f"{where}.default: expected an integer >= 1")
    overrides = {}
    for i, entry in enumerate(raw.get("overrides", [])):
        cats = entry.get("categories")
        t = entry.get("t")
        if (not isinstance(cats, list) or len(cats) != 2
                or not all(isinstance(c, str) for c in cats)):
            raise ConfigError(
                f"{where}.overrides[{i}].categories: expected two names")
        for c in cats:
            if c not in categories:
                raise ConfigError(
                    f"{where}.overrides[{i}]: unknown category {c!r}")
        if not isinstance(t, int) or t < 1:
            raise ConfigError(
                f"{where}.overrides[{i}].t: expected an integer >= 1")
        overrides[(cats[0], cats[1])] = t
    return DistMatrix(default, overrides)


def load_config(path: str | os.PathLike) -> Config:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {path}: {e}")
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be an object: {path}")

    base = path.resolve().parent
    langs_raw = raw.get("languages")
    if not isinstance(langs_raw, dict) or not langs_raw:
        raise ConfigError("config needs a nonempty 'languages' object")
    languages: dict[str, LanguagePaths] = {}
    for lang, files in sorted(langs_raw.items()):
        if not isinstance(files, dict):
            raise ConfigError(f"languages.{lang}: expected an object")
        paths = {}
        for kind in ("main", "variations", "stopwords"):
            value = files.get(kind)
            if not isinstance(value, str):
                raise ConfigError(f"languages.{lang}.{kind}: path required")
            resolved = _resolve(base, value)
            if not resolved.is_file():
                raise ConfigError(
                    f"languages.{lang}.{kind}: no such file: {resolved}")
            paths[kind] = resolved
        languages[lang] = LanguagePaths(**paths)

    categories = tuple(raw.get("categories", DEFAULT_CATEGORIES))
    if not categories or not all(isinstance(c, str) for c in categories):
        raise ConfigError("categories: expected a nonempty list of names")
    dist = (_parse_dist(raw["dist"], "dist", categories) if "dist" in raw
            else DistMatrix(DEFAULT_DISTANCE))

    n = raw.get("n", 3)
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"n must be an integer >= 1, got {n!r}")
    theta = raw.get("theta", 0.10)
    if not isinstance(theta, (int, float)) or theta <= 0:
        raise ConfigError(f"theta must be > 0, got {theta!r}")
    cap = raw.get("cap", 4096)
    if not isinstance(cap, int) or cap < 1:
        raise ConfigError(f"cap must be an integer >= 1, got {cap!r}")

    listen_raw = raw.get("listen", {})
    if not isinstance(listen_raw, dict):
        raise ConfigError("listen: expected an object")
    listen = Listen(host=listen_raw.get("host", "127.0.0.1"),
                    port=int(listen_raw.get("port", 8765)))

    data_dir = _resolve(base, raw.get("data_dir", "data"))
    frontend_raw = raw.get("frontend_dir")
    frontend_dir = _resolve(base, frontend_raw) if frontend_raw else None

    return Config(languages=languages, categories=categories, dist=dist,
                  n=n, theta=float(theta), cap=cap, data_dir=data_dir,
                  listen=listen, frontend_dir=frontend_dir,
                  source=path.resolve())


def with_data_dir(config: Config, data_dir: Path) -> Config:
    return replace(config, data_dir=data_dir)
