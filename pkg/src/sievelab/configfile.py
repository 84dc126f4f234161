"""Scenario config files.

Plain INI-style text with three sections:

    [scenario]
    name = quasisquare-census
    seed = 7            # optional, default 0

    [params]
    y = 10000           # scenario-specific; schema-checked
    window = 50,100

    [output]
    json = census.json  # optional, defaults derived from the scenario name
    csv = census.csv

Parsing is strict: unknown sections or keys are errors naming the offending
path, as are missing required keys and values that fail their cast.  The
config hash embedded in every report is taken over the raw file text.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .reports import content_hash

__all__ = ["ConfigError", "ScenarioConfig", "parse_config", "parse_config_text"]


class ConfigError(ValueError):
    """A config file failed schema validation; message names the field."""


def _cast_int(text: str) -> int:
    return int(text)


def _cast_float(text: str) -> float:
    return float(text)


def _cast_str(text: str) -> str:
    return text.strip()


def _cast_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _cast_int_list(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of integers")
    return tuple(int(p) for p in parts)


def _cast_int_pair(text: str) -> tuple[int, int]:
    values = _cast_int_list(text)
    if len(values) != 2:
        raise ValueError(f"expected exactly two integers, got {len(values)}")
    return values[0], values[1]


CASTERS = {
    "int": _cast_int,
    "float": _cast_float,
    "str": _cast_str,
    "bool": _cast_bool,
    "int_list": _cast_int_list,
    "int_pair": _cast_int_pair,
}

_REQUIRED = object()


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    seed: int
    params: dict
    outputs: dict = field(default_factory=dict)
    config_hash: str = ""

    def output_path(self, kind: str, default: str) -> str:
        return self.outputs.get(kind, default)


def parse_config_text(text: str, schemas: dict) -> ScenarioConfig:
    cp = configparser.ConfigParser(
        interpolation=None, delimiters=("=",), inline_comment_prefixes=("#",)
    )
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc

    allowed_sections = {"scenario", "params", "output"}
    for section in cp.sections():
        if section not in allowed_sections:
            raise ConfigError(f"unknown section [{section}]")
    if not cp.has_section("scenario"):
        raise ConfigError("missing section [scenario]")

    scenario_keys = set(cp.options("scenario"))
    extra = scenario_keys - {"name", "seed"}
    if extra:
        raise ConfigError(f"unknown key scenario.{sorted(extra)[0]}")
    if "name" not in scenario_keys:
        raise ConfigError("missing key scenario.name")
    name = cp.get("scenario", "name").strip()
    if name not in schemas:
        raise ConfigError(
            f"unknown scenario {name!r}; valid: {', '.join(sorted(schemas))}"
        )
    try:
        seed = int(cp.get("scenario", "seed", fallback="0"))
    except ValueError as exc:
        raise ConfigError(f"scenario.seed: {exc}") from exc

    schema = schemas[name]
    params = {}
    raw_params = dict(cp.items("params")) if cp.has_section("params") else {}
    for key, raw in raw_params.items():
        if key not in schema:
            raise ConfigError(f"unknown key params.{key} for scenario {name}")
        kind, _default = schema[key]
        try:
            params[key] = CASTERS[kind](raw)
        except ValueError as exc:
            raise ConfigError(f"params.{key}: {exc}") from exc
    for key, (kind, default) in schema.items():
        if key in params:
            continue
        if default is _REQUIRED:
            raise ConfigError(f"missing required key params.{key}")
        params[key] = default

    outputs = {}
    if cp.has_section("output"):
        for key, raw in cp.items("output"):
            if key not in ("json", "csv"):
                raise ConfigError(f"unknown key output.{key}")
            outputs[key] = raw.strip()

    return ScenarioConfig(
        name=name,
        seed=seed,
        params=params,
        outputs=outputs,
        config_hash=content_hash(text),
    )


def parse_config(path: str, schemas: dict) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, schemas)


REQUIRED = _REQUIRED
