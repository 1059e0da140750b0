import typing

import typer

from rephom.cli.callbacks import threads_callback
from rephom.cli.output import emit, reporting_errors
from rephom.cli.parsers import parse_int, required_setting, setting
from rephom.core.koszul import DEFAULT_BUDGET, model_summary, parse_model, truncated_homology
from rephom.core.log import get_logger

logger = get_logger()


def koszul(
    ctx: typer.Context,
    model: typing.Annotated[
        str | None, typer.Option(help="Koszul model: torus:<group> or surface:<group>,g=<genus>, e.g. torus:GL1.")
    ] = None,
    cutoff: typing.Annotated[int | None, typer.Option(help="Largest internal degree. Defaults to 4.")] = None,
    budget: typing.Annotated[
        int | None,
        typer.Option(help=f"Largest graded piece, in basis elements, before giving up. Defaults to {DEFAULT_BUDGET}."),
    ] = None,
    threads: typing.Annotated[
        int | None,
        typer.Option(
            envvar="REPHOM_THREADS",
            callback=threads_callback,
            help="Worker processes for the internal degrees. Output does not depend on it. Defaults to 1.",
        ),
    ] = None,
) -> None:
    with reporting_errors():
        koszul_model = parse_model(required_setting(ctx, "model", model))
        max_degree = parse_int(setting(ctx, "cutoff", cutoff, 4), "cutoff", minimum=0)
        logger.info(f"Computing Koszul homology of {koszul_model.name} through internal degree {max_degree}")
        betti = truncated_homology(
            koszul_model,
            max_degree,
            parse_int(setting(ctx, "budget", budget, DEFAULT_BUDGET), "budget", minimum=1),
            workers=parse_int(setting(ctx, "threads", threads, 1), "threads", minimum=1),
        )
        headline = {
            "model": koszul_model.name,
            "even variables": koszul_model.n_even_vars,
            "odd variables": koszul_model.n_odd_vars,
            "note": "pre-localization homology, determinants not inverted",
        }
        emit(ctx, {**betti.to_dict(), "summary": model_summary(koszul_model)}, betti.to_frame(), headline, index=True)
