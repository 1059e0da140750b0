import json
import tomllib
from enum import StrEnum
from pathlib import Path
from typing import Any

import pandas as pd
from tabulate import tabulate

from rephom.core.errors import ConfigError
from rephom.core.log import get_logger

logger = get_logger()

CONFIG_TABLE = "rephom"


class OutputFormat(StrEnum):
    TABLE = "table"
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


def dumps_json(obj: Any) -> str:
    """Deterministic JSON: keys in insertion order, two space indent."""
    return json.dumps(obj, indent=2, ensure_ascii=False)


def render_frame(df: pd.DataFrame, output_format: OutputFormat, index: bool = False) -> str:
    """
    Renders a DataFrame as text.

    Args:
        df: the frame to render
        output_format: table, csv or markdown; JSON output is built from the domain objects instead
        index: whether the frame index is part of the output

    Returns:
        The rendered text, without a trailing newline.
    """
    match output_format:
        case OutputFormat.CSV:
            return df.to_csv(index=index, lineterminator="\n").rstrip("\n")
        case OutputFormat.MARKDOWN:
            return tabulate(df, headers="keys", tablefmt="github", showindex=index)
        case _:
            return tabulate(df, headers="keys", tablefmt="plain", showindex=index)


def load_schema(name: str) -> dict:
    """
    Loads a JSON schema from the schemas directory.

    Args:
        name: schema name without the ``.schema.json`` suffix

    Raises:
        ConfigError: if no schema with that name ships with the package

    Returns:
        The parsed schema.
    """
    schema_file = Path(__file__).parents[1] / "schemas" / f"{name}.schema.json"
    if not schema_file.exists() or not schema_file.is_file():
        raise ConfigError(f'Cannot find schema "{name}", available: {", ".join(schema_names())}')
    return json.loads(schema_file.read_text())


def schema_names() -> list[str]:
    schema_dir = Path(__file__).parents[1] / "schemas"
    return sorted(f.name.removesuffix(".schema.json") for f in schema_dir.glob("*.schema.json"))


def load_config_file(file: Path) -> dict[str, Any]:
    """
    Reads option defaults from a TOML file. Keys are long option names, either
    top level or under a ``[rephom]`` table; dashes and underscores are
    interchangeable.

    Raises:
        ConfigError: if the file cannot be read or parsed
    """
    try:
        with open(file, "rb") as f:
            document = tomllib.load(f)
    except OSError as error:
        raise ConfigError(f"Unable to read config file {file}: {error}") from error
    except tomllib.TOMLDecodeError as error:
        raise ConfigError(f"Invalid TOML in {file}: {error}") from error
    settings = document.get(CONFIG_TABLE, document)
    if not isinstance(settings, dict):
        raise ConfigError(f"[{CONFIG_TABLE}] in {file} must be a table")
    logger.debug(f"Loaded {len(settings)} settings from {file}")
    return {key.replace("-", "_"): value for key, value in settings.items()}
