import typing

import typer

from rephom.cli.output import reporting_errors
from rephom.core.io import dumps_json, load_schema, schema_names


def schema(
    name: typing.Annotated[
        str | None, typer.Argument(help="Schema to print. Lists the shipped schemas when omitted.")
    ] = None,
) -> None:
    with reporting_errors():
        if name is None:
            for schema_name in schema_names():
                typer.echo(schema_name)
            return
        typer.echo(dumps_json(load_schema(name)))
