import typing

import typer

from rephom.cli.output import emit, reporting_errors
from rephom.cli.parsers import parse_h, parse_int, required_setting, setting
from rephom.core.specseq import degeneration_report, e2_page


def e2(
    ctx: typer.Context,
    h: typing.Annotated[
        str | None,
        typer.Option("--h", help="Cotangent homology dimensions as degree:dim pairs, e.g. 0:2,2:2."),
    ] = None,
    pmax: typing.Annotated[int | None, typer.Option(help="Largest symmetric power. Defaults to 4.")] = None,
    nmax: typing.Annotated[
        int | None, typer.Option(help="Largest total degree. Defaults to pmax times the top degree of --h.")
    ] = None,
) -> None:
    with reporting_errors():
        dims = parse_h(required_setting(ctx, "h", h))
        p_max = parse_int(setting(ctx, "pmax", pmax, 4), "pmax", minimum=0)
        top = max((degree for degree, dim in dims.items() if dim), default=0)
        n_max = parse_int(setting(ctx, "nmax", nmax, p_max * top), "nmax", minimum=0)
        page = e2_page(dims, p_max, n_max)
        report = degeneration_report(page)
        headline = {
            "lacunary modulus": page.lacunary_modulus,
            "degenerate": str(report.degenerate).lower(),
            "reason": report.reason,
            "predicted nonzero degrees": " ".join(str(n) for n in report.predicted_nonzero_degrees),
        }
        emit(ctx, {**page.to_dict(), "degeneration": report.to_dict()}, page.grid(), headline, index=True)
