import typing

import pandas as pd
import typer

from rephom.cli.output import emit, reporting_errors
from rephom.cli.parsers import field_setting, parse_local_dim, parse_rep, required_setting, setting
from rephom.core.cotangent import cotangent_homology, euler_check, tangent_dims, vanishing_certificate
from rephom.core.liegroups import parse_group
from rephom.core.log import get_logger
from rephom.core.spaces import CyclicGroupSpace, format_space, parse_space

logger = get_logger()


def cotangent(
    ctx: typer.Context,
    space: typing.Annotated[
        str | None,
        typer.Option(
            help=(
                "Space model, e.g. surface:g=2, link:braid=s1 s2,strands=3, lens:p=5,q=1 2, wedge:n=3, "
                "bz:p=7, torusknot:p=2,q=3 or pres:gens=2;rels=a b A B."
            )
        ),
    ] = None,
    group: typing.Annotated[str | None, typer.Option(help="Algebraic group, e.g. GL2, SL2, T^2 or GL2xT^1.")] = None,
    field: typing.Annotated[
        str | None,
        typer.Option(
            help="Coefficient field: Q, fq:<q>[,root=<r>] or cyclotomic:<N>. "
            "Defaults to cyclotomic:p for lens spaces and B Z_p, Q otherwise."
        ),
    ] = None,
    rep: typing.Annotated[
        str | None,
        typer.Option(
            help=(
                'Representation: "trivial", "diag:a,b;c,d" with one diagonal per generator, '
                "or a JSON list of matrices of literal strings. Defaults to trivial."
            )
        ),
    ] = None,
    tangent: typing.Annotated[
        bool, typer.Option(help="Also report the tangent space of the representation variety.")
    ] = False,
    local_dim: typing.Annotated[
        str | None,
        typer.Option(help='Declared local dimension of the component, or "expected", used for the smooth flag.'),
    ] = None,
) -> None:
    with reporting_errors():
        space_model = parse_space(required_setting(ctx, "space", space))
        alg_group = parse_group(required_setting(ctx, "group", group))
        coefficients = field_setting(ctx, field, space_model)
        point = parse_rep(setting(ctx, "rep", rep, "trivial"), space_model, alg_group, coefficients)
        logger.info(f"Computing cotangent homology of {format_space(space_model)} in {alg_group} over {coefficients}")
        report = cotangent_homology(space_model, point)
        certificate = vanishing_certificate(
            space_model, point, parse_local_dim(setting(ctx, "local_dim", local_dim), space_model, alg_group), report
        )
        payload = {"space": format_space(space_model), "group": str(alg_group), "rep": point.label, **report.to_dict()}
        if not isinstance(space_model, CyclicGroupSpace):
            payload["euler_check"] = euler_check(space_model, point, report).to_dict()
        payload["certificate"] = {
            "vanishing_bound": certificate.vanishing_bound,
            "smooth_flag": certificate.smooth_flag,
            "local_dim": certificate.local_dim,
        }
        if tangent:
            payload["tangent"] = tangent_dims(space_model, point).to_dict()
        frame = pd.DataFrame({"degree": range(len(report.betti)), "dim": report.betti})
        headline = {
            "space": payload["space"],
            "group": payload["group"],
            "field": payload["field"],
            "betti": " ".join(str(b) for b in report.betti),
            "euler": report.euler,
        }
        if "euler_check" in payload:
            headline["euler check"] = "pass" if payload["euler_check"]["pass"] else "FAIL"
        headline["vanishing bound"] = certificate.vanishing_bound
        if tangent:
            headline["z1"] = payload["tangent"]["z1"]
        emit(ctx, payload, frame, headline)
