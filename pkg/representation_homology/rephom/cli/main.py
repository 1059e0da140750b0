import logging
import typing
from pathlib import Path

import typer

from rephom.cli.callbacks import config_file_callback
from rephom.cli.commands.catalog import catalog
from rephom.cli.commands.certify import certify
from rephom.cli.commands.cotangent import cotangent
from rephom.cli.commands.e2 import e2
from rephom.cli.commands.koszul import koszul
from rephom.cli.commands.schema import schema
from rephom.cli.parsers import setting
from rephom.core.io import OutputFormat
from rephom.core.log import setup_logging

app = typer.Typer(add_completion=False, pretty_exceptions_show_locals=False)
app.command()(cotangent)
app.command()(certify)
app.command()(e2)
app.command()(koszul)
app.command()(catalog)
app.command()(schema)


@app.callback()
def _setup(
    ctx: typer.Context,
    verbose: typing.Annotated[
        bool | None,
        typer.Option("--verbose/--quiet", help="Log computation details, or only warnings and errors."),
    ] = None,
    output_format: typing.Annotated[
        OutputFormat | None,
        typer.Option("--format", help="Output format. Defaults to table."),
    ] = None,
    config: typing.Annotated[
        Path | None,
        typer.Option(
            exists=True,
            dir_okay=False,
            resolve_path=True,
            is_eager=True,
            callback=config_file_callback,
            help="TOML file with option defaults. Options passed on the command line take precedence.",
        ),
    ] = None,
):
    verbose = setting(ctx, "verbose", verbose)
    setup_logging(logging.DEBUG if verbose else logging.WARNING if verbose is False else logging.INFO)
    if output_format is not None:
        ctx.meta["rephom.format"] = output_format


if __name__ == "__main__":
    app()
