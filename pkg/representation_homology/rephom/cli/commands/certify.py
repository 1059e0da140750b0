import typing

import typer

from rephom.cli.callbacks import threads_callback
from rephom.cli.output import emit, reporting_errors
from rephom.cli.parsers import field_setting, parse_int, parse_local_dim, required_setting, setting
from rephom.core.cotangent import certify_samples
from rephom.core.errors import ConfigError
from rephom.core.liegroups import parse_group
from rephom.core.sampling import SamplerName
from rephom.core.spaces import parse_space

TABLE_COLUMNS = ["sample", "h", "bound", "smooth", "chi", "expected", "pass", "cohomology"]


def certify(
    ctx: typer.Context,
    space: typing.Annotated[str | None, typer.Option(help="Space model, as for the cotangent command.")] = None,
    group: typing.Annotated[str | None, typer.Option(help="Algebraic group, e.g. GL2 or SL2.")] = None,
    field: typing.Annotated[
        str | None,
        typer.Option(help="Coefficient field. Defaults to cyclotomic:p for lens spaces and B Z_p, Q otherwise."),
    ] = None,
    sampler: typing.Annotated[
        SamplerName | None, typer.Option(help="How representations are sampled. Defaults to auto.")
    ] = None,
    samples: typing.Annotated[
        int | None, typer.Option(help="Number of sampled representations besides the trivial one. Defaults to 20.")
    ] = None,
    seed: typing.Annotated[int | None, typer.Option(help="Seed of the sampler. Defaults to 0.")] = None,
    local_dim: typing.Annotated[
        str | None,
        typer.Option(help='Declared local dimension of the component, or "expected", used for the smooth flag.'),
    ] = None,
    threads: typing.Annotated[
        int | None,
        typer.Option(
            envvar="REPHOM_THREADS",
            callback=threads_callback,
            help="Worker processes for the samples. Output does not depend on it. Defaults to 1.",
        ),
    ] = None,
) -> None:
    with reporting_errors():
        space_model = parse_space(required_setting(ctx, "space", space))
        alg_group = parse_group(required_setting(ctx, "group", group))
        coefficients = field_setting(ctx, field, space_model)
        sampler_value = setting(ctx, "sampler", sampler, SamplerName.AUTO)
        try:
            sampler_name = SamplerName(sampler_value)
        except ValueError as error:
            raise ConfigError(f'Unknown sampler "{sampler_value}", expected one of {", ".join(SamplerName)}') from error
        run = certify_samples(
            space_model,
            alg_group,
            coefficients,
            sampler=sampler_name,
            count=parse_int(setting(ctx, "samples", samples, 20), "samples", minimum=0),
            seed=parse_int(setting(ctx, "seed", seed, 0), "seed", minimum=0),
            local_dim=parse_local_dim(setting(ctx, "local_dim", local_dim), space_model, alg_group),
            workers=parse_int(setting(ctx, "threads", threads, 1), "threads", minimum=1),
        )
        frame = run.rows[TABLE_COLUMNS].copy()
        frame = frame.dropna(axis=1, how="all")
        headline = {key: value for key, value in run.summary.items() if key != "max_bound"}
        headline["max_bound"] = f"{run.summary['max_bound']['value']} ({run.summary['max_bound']['qualifier']})"
        emit(ctx, {"summary": run.summary, "certificates": run.records()}, frame, headline)
