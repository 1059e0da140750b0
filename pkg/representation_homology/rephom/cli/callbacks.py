from pathlib import Path

import typer

from rephom.cli.parsers import CONFIG_META_KEY
from rephom.core.errors import ConfigError
from rephom.core.io import load_config_file


def config_file_callback(ctx: typer.Context, value: Path | None) -> Path | None:
    if value is None:
        return value
    if value.suffix != ".toml":
        raise typer.BadParameter("Specified config file does not end in .toml.")
    try:
        ctx.meta[CONFIG_META_KEY] = load_config_file(value)
    except ConfigError as error:
        raise typer.BadParameter(error.message) from error
    return value


def threads_callback(value: int | None) -> int | None:
    if value is not None and value < 1:
        raise typer.BadParameter("At least one worker thread is needed.")
    return value
