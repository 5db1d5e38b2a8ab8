"""
Run configuration for the readsift CLI.

Values come from four places, highest priority first: explicit command-line
flags, a config file, ``RSFT_*`` environment variables, built-in defaults.

Config files are either plain ``key=value`` lines (``#`` starts a comment) or
YAML when the file name ends in ``.yaml``/``.yml``. Heuristic and training
overrides use dotted keys (``heuristic.drop_ratio=0.25``, ``train.epochs=50``)
in plain files and nested mappings in YAML.
"""

from collections.abc import Sequence
from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from readsift.core.errors import DataError

ModelKind = Literal["ff", "m1m2", "semigan"]

_NESTED = ("heuristic", "train")


class RunConfig(BaseSettings):
    """Resolved settings of one CLI invocation."""

    model_config = SettingsConfigDict(
        env_prefix="RSFT_",
        env_nested_delimiter="__",
        extra="forbid",
    )

    command: str = ""
    inputs: dict[str, Path] = Field(default_factory=dict)
    outputs: dict[str, Path] = Field(default_factory=dict)

    model: ModelKind = "m1m2"
    length: Optional[int] = Field(None, ge=4)
    labeled: int = Field(30, ge=1)
    seed: int = 0
    min_mapq: int = Field(0, ge=0, le=255)

    models: list[ModelKind] = Field(default_factory=lambda: ["ff", "m1m2", "semigan"])
    labeled_sizes: list[int] = Field(default_factory=lambda: [15, 30, 70])
    repeats: int = Field(5, ge=1, description="Benchmark seeds: seed, seed + 1, ...")

    heuristic: dict[str, float] = Field(default_factory=dict)
    train: dict[str, float] = Field(default_factory=dict)

    @field_validator("models", "labeled_sizes", mode="before")
    @classmethod
    def split_commas(cls, v: Any) -> Any:
        """Accept ``15,30,70`` from flags and key=value files."""
        if isinstance(v, str):
            return [part.strip() for part in v.split(",") if part.strip()]
        return v

    def rows(self) -> list[tuple[str, str]]:
        """Flattened ``(key, value)`` pairs for display."""
        rows: list[tuple[str, str]] = []
        for key, value in self.model_dump().items():
            if isinstance(value, dict):
                rows.extend((f"{key}.{sub}", str(v)) for sub, v in sorted(value.items()))
            elif isinstance(value, list):
                rows.append((key, ",".join(map(str, value))))
            elif value is not None and value != "":
                rows.append((key, str(value)))
        return rows


def _fold(flat: dict[str, Any]) -> dict[str, Any]:
    folded: dict[str, Any] = {}
    for key, value in flat.items():
        key = key.replace("-", "_")
        head, dot, tail = key.partition(".")
        if dot:
            if head not in _NESTED:
                raise DataError(f"unknown config section '{head}' (valid: {', '.join(_NESTED)})")
            folded.setdefault(head, {})[tail] = value
        else:
            folded[key] = value
    return folded


def _parse_key_values(text: str, path: Path) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise DataError(f"{path}:{line_number}: expected key=value, got {line!r}")
        values[key.strip()] = value.strip()
    return values


def load_config_file(path: Path) -> dict[str, Any]:
    """
    Read a config file into a nested mapping.

    Raises:
        DataError: If the file is not a flat key=value file or a YAML mapping
    """
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in (".yaml", ".yml"):
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise DataError(f"{path}: invalid YAML: {e}") from None
        if not isinstance(raw, dict):
            raise DataError(f"{path}: expected a mapping at the top level")
        flat: dict[str, Any] = {}
        for key, value in raw.items():
            if isinstance(value, dict):
                flat.update({f"{key}.{sub}": v for sub, v in value.items()})
            else:
                flat[str(key)] = value
        return _fold(flat)
    return _fold(_parse_key_values(text, path))


def resolve_config(flags: dict[str, Any], config_path: Optional[Path] = None) -> RunConfig:
    """
    Merge flags over the config file; the environment fills whatever is left.

    Flags whose value is None were not given and do not override anything.

    Raises:
        pydantic.ValidationError: On unknown keys or out-of-range values
    """
    merged: dict[str, Any] = load_config_file(config_path) if config_path else {}
    for key, value in flags.items():
        if value is None:
            continue
        if key in _NESTED:
            merged.setdefault(key, {}).update(value)
        else:
            merged[key] = value
    return RunConfig(**merged)


def parse_overrides(items: Sequence[str], sections: Sequence[str] = _NESTED) -> dict[str, Any]:
    """
    ``section.key=value`` strings from the command line as a nested mapping.

    Args:
        items: Raw ``--set`` values
        sections: Sections the running command reads

    Raises:
        ValueError: If an item is not a dotted key=value pair, or names a
            section outside ``sections``
    """
    values: dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or "." not in key:
            raise ValueError(f"expected section.key=value (e.g. train.epochs=50), got {item!r}")
        values[key.strip()] = value.strip()
    try:
        nested = _fold(values)
    except DataError as e:
        raise ValueError(str(e)) from None
    unused = sorted(set(nested) - set(sections))
    if unused:
        raise ValueError(f"{unused[0]}.* settings are not used here (accepted: {', '.join(sections)})")
    return nested
