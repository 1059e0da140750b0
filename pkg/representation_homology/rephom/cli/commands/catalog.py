import typing

import pandas as pd
import typer

from rephom.cli.output import emit, output_format, reporting_errors
from rephom.cli.parsers import parse_exponents, parse_int, setting
from rephom.core.catalog import (
    cpr_char_homology,
    cpr_cotangent_homology,
    cpr_generator_degrees,
    cpr_local_system_homology,
    global_bounds,
    markdown_table,
    resolve_exponents,
)
from rephom.core.errors import ConfigError
from rephom.core.io import OutputFormat
from rephom.core.liegroups import parse_group
from rephom.core.spaces import format_space, parse_space


def catalog(
    ctx: typer.Context,
    group: typing.Annotated[str | None, typer.Option(help="Algebraic group, e.g. SL2.")] = None,
    bounds: typing.Annotated[
        str | None, typer.Option(help="Report the known vanishing bounds of this space model.")
    ] = None,
    cpr_r: typing.Annotated[
        int | None, typer.Option(help="Report the character homology of CP^r for this r.")
    ] = None,
    exponents: typing.Annotated[
        str | None,
        typer.Option(help="Exponents of the group, comma separated. Required for GL(n), defaults for SL(n)."),
    ] = None,
    cutoff: typing.Annotated[
        int | None, typer.Option(help="Largest degree of the CP^r series. Defaults to the top generator degree sum.")
    ] = None,
    local_system: typing.Annotated[
        bool, typer.Option(help="With --cpr-r, report the homology of CP^r with coefficients in the coadjoint system.")
    ] = False,
) -> None:
    with reporting_errors():
        bounds = setting(ctx, "bounds", bounds)
        cpr_r = setting(ctx, "cpr_r", cpr_r)
        group_text = setting(ctx, "group", group)
        if (bounds is None) == (cpr_r is None):
            raise ConfigError("Pass exactly one of --bounds or --cpr-r")
        alg_group = parse_group(group_text) if group_text is not None else None
        if bounds is not None:
            if alg_group is None:
                raise ConfigError("--bounds needs --group")
            space_model = parse_space(bounds)
            rows = [b.to_dict() for b in global_bounds(space_model, alg_group)]
            payload = {"space": format_space(space_model), "group": str(alg_group), "bounds": rows}
            if output_format(ctx) is OutputFormat.MARKDOWN:
                typer.echo(markdown_table(rows))
                return
            emit(ctx, payload, pd.DataFrame(rows), {"space": payload["space"], "group": payload["group"]})
            return
        r = parse_int(cpr_r, "cpr-r", minimum=1)
        if local_system:
            if alg_group is None:
                raise ConfigError("--local-system needs --group")
            dims = cpr_local_system_homology(alg_group, r)
            payload = {"r": r, "group": str(alg_group), "local_system_homology": {str(i): d for i, d in dims.items()}}
            frame = pd.DataFrame({"i": list(dims), "dim": list(dims.values())})
            emit(ctx, payload, frame, {"r": r, "group": str(alg_group)})
            return
        exponent_text = setting(ctx, "exponents", exponents)
        exps = resolve_exponents(alg_group, parse_exponents(exponent_text) if exponent_text is not None else None)
        top = sum(cpr_generator_degrees(exps, r))
        series = cpr_char_homology(exps, r, parse_int(setting(ctx, "cutoff", cutoff, top), "cutoff", minimum=0))
        payload = {
            "r": r,
            "exponents": list(exps),
            **series.to_dict(),
            "cotangent_homology": {str(d): n for d, n in cpr_cotangent_homology(exps, r).items()},
        }
        frame = pd.DataFrame({"degree": range(len(series.dims)), "dim": series.dims})
        emit(ctx, payload, frame, {"r": r, "exponents": " ".join(map(str, exps)), "algebra": series.description})
