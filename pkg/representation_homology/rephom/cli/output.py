import contextlib
import typing

import pandas as pd
import typer

from rephom.cli.parsers import setting
from rephom.core.errors import ConfigError, RephomError
from rephom.core.io import OutputFormat, dumps_json, render_frame
from rephom.core.log import get_logger

logger = get_logger()


@contextlib.contextmanager
def reporting_errors() -> typing.Iterator[None]:
    """
    Turns a RephomError into its JSON error object on stdout and exits with the
    error's exit code.
    """
    try:
        yield
    except RephomError as error:
        typer.echo(dumps_json(error.to_dict()))
        logger.error(error.message)
        raise typer.Exit(error.exit_code) from error


def output_format(ctx: typer.Context) -> OutputFormat:
    value = setting(ctx, "format", ctx.meta.get("rephom.format"), OutputFormat.TABLE)
    try:
        return OutputFormat(value)
    except ValueError as error:
        raise ConfigError(f'Unknown output format "{value}", expected one of {", ".join(OutputFormat)}') from error


def emit(
    ctx: typer.Context,
    payload: dict,
    frame: pd.DataFrame | None = None,
    headline: typing.Mapping[str, typing.Any] | None = None,
    index: bool = False,
) -> None:
    """
    Writes a result: ``payload`` as JSON, or the optional ``headline`` followed
    by ``frame`` for the tabular formats. CSV output is the frame alone.
    """
    fmt = output_format(ctx)
    if fmt is OutputFormat.JSON or frame is None:
        typer.echo(dumps_json(payload))
        return
    if fmt is not OutputFormat.CSV and headline:
        for key, value in headline.items():
            typer.echo(f"{key}: {value}")
        typer.echo("")
    typer.echo(render_frame(frame, fmt, index=index))
