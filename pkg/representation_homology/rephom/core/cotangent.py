"""
Cotangent complexes of derived representation schemes at a representation,
their homology, and the certificates read off from it.

Chain groups are sums of copies of the dual Lie algebra, written in the dual
of the fixed Lie algebra basis, so every differential is the transpose of a
matrix acting on the Lie algebra itself.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import pandas as pd
from pandarallel import pandarallel
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

from rephom.core import exact
from rephom.core.errors import MissingGenerator, OrderViolated, RelatorViolated
from rephom.core.exact import ChainComplex, Field, HomologyReport
from rephom.core.fox import AdjointTable, artin_image, evaluate, fox_derivative, fox_jacobian, word_image
from rephom.core.liegroups import AlgGroup, GroupElement, adjoint, coadjoint, identity_element, joint_fixed_dim
from rephom.core.log import get_logger
from rephom.core.sampling import SamplerName, resolve_sampler, sample_assignment, sample_count
from rephom.core.spaces import (
    ConeTemplate,
    CyclicGroupSpace,
    LensTemplate,
    LinkComplement,
    LinkConeTemplate,
    PeriodicTemplate,
    SpaceModel,
    Surface,
    WedgeCircles,
    build_template,
    euler_top,
    format_space,
    generator_count,
    presentation_of,
    template_dims,
)

logger = get_logger()


@dataclass(frozen=True, eq=False)
class RepPoint:
    group: AlgGroup
    field: Field
    assignment: tuple[GroupElement, ...]
    label: str = ""

    def to_dict(self) -> dict:
        return {"label": self.label, "images": [g.to_rows() for g in self.assignment]}


def trivial_rep(space: SpaceModel, group: AlgGroup, field: Field) -> RepPoint:
    return RepPoint(group, field, (identity_element(group, field),) * generator_count(space), label="trivial")


class EulerCheck(NamedTuple):
    chi: int
    expected: int
    passed: bool

    def to_dict(self) -> dict:
        return {"chi": self.chi, "expected": self.expected, "pass": self.passed}


class TangentDims(NamedTuple):
    z1: int
    h1_group: int
    h0_group: int

    def to_dict(self) -> dict:
        return {"z1": self.z1, "h1_group": self.h1_group, "h0_group": self.h0_group}


@dataclass(frozen=True, eq=False)
class Certificate:
    rep: RepPoint
    h: tuple[int, ...]
    vanishing_bound: int | None
    smooth_flag: bool
    local_dim: int | None = None

    def to_dict(self) -> dict:
        return {
            "rep": self.rep.to_dict(),
            "h": list(self.h),
            "vanishing_bound": self.vanishing_bound,
            "smooth_flag": self.smooth_flag,
            "local_dim": self.local_dim,
            "field": str(self.rep.field),
            "evidence": self.rep.field.evidence,
        }


def _cone(jacobian: DomainMatrix, field: Field) -> ChainComplex:
    n_rows, n_cols = jacobian.shape
    if n_rows == 0:
        # no relators, the cone is concentrated in degree 0
        return ChainComplex(field=field, dims=(n_cols,), differentials=())
    return ChainComplex(field=field, dims=(n_cols, n_rows), differentials=(jacobian.transpose().to_sparse(),))


def link_jacobian(braid, assignment: Sequence[GroupElement]) -> DomainMatrix:
    """
    The block matrix with (i, j) block Ad∘rho(d beta(x_i) / d x_j).

    Raises:
        RelatorViolated: when rho is not fixed by beta
    """
    images = artin_image(braid)
    for i, w in enumerate(images):
        if word_image(w, assignment) != assignment[i]:
            raise RelatorViolated(i, f"x{i + 1} = beta(x{i + 1})")
    table = AdjointTable(assignment)
    dim = table.group.dim
    blocks = {}
    for i, w in enumerate(images):
        for j in range(braid.strands):
            derivative = fox_derivative(w, j)
            if not derivative.is_zero():
                blocks[(i, j)] = evaluate(derivative, table)
    return exact.block_matrix(blocks, [dim] * braid.strands, [dim] * braid.strands, table.field)


def _generator_of_order(p: int, assignment: Sequence[GroupElement]) -> GroupElement:
    if len(assignment) != 1:
        raise MissingGenerator(f"Expected one generator image for gamma, got {len(assignment)}")
    g = assignment[0]
    if not (g**p).is_identity():
        raise OrderViolated(f"rho(gamma)^{p} is not the identity")
    return g


def _norm(x: DomainMatrix, p: int, field: Field) -> DomainMatrix:
    total = exact.zeros(*x.shape, field)
    power = exact.identity(x.shape[0], field)
    for _ in range(p):
        total = total + power
        power = power * x
    return total


def periodic_differentials(
    x: DomainMatrix, p: int, exponents: Sequence[int], count: int, field: Field
) -> list[DomainMatrix]:
    """
    delta^0, ..., delta^{count-1} on the Lie algebra: the norm sum_r X^r in even
    degrees, X^{l} - 1 in odd degree 2k - 1 with l = exponents[k].
    """
    eye = exact.identity(x.shape[0], field)
    norm = _norm(x, p, field)
    deltas = []
    for j in range(count):
        if j % 2 == 0:
            deltas.append(norm)
        else:
            deltas.append(x ** exponents[(j + 1) // 2] - eye)
    return deltas


def cotangent_complex(space: SpaceModel, rep: RepPoint) -> ChainComplex:
    """
    Raises:
        RelatorViolated: when rho does not satisfy the relators (or is not fixed by the braid)
        OrderViolated: when rho(gamma)^p is not the identity for lens spaces and B Z_p
        Unsupported: for CP^r
    """
    template = build_template(space)
    field = rep.field
    logger.debug(f"Instantiating {type(template).__name__} for {format_space(space)} in {rep.group}")
    match template:
        case ConeTemplate(presentation=presentation):
            return _cone(fox_jacobian(presentation, rep.assignment), field)
        case LinkConeTemplate(braid=braid):
            jacobian = link_jacobian(braid, rep.assignment)
            differential = (exact.identity(jacobian.shape[0], field) - jacobian).transpose().to_sparse()
            return ChainComplex(field=field, dims=(jacobian.shape[1], jacobian.shape[0]), differentials=(differential,))
        case LensTemplate(p=p):
            x = adjoint(_generator_of_order(p, rep.assignment))
            deltas = periodic_differentials(x, p, template.inverse_exponents, 2 * template.m - 2, field)
            dims = template_dims(template, rep.group.dim)
            return ChainComplex(field=field, dims=dims, differentials=tuple(d.transpose().to_sparse() for d in deltas))
        case PeriodicTemplate(p=p, cutoff=cutoff):
            x = adjoint(_generator_of_order(p, rep.assignment))
            deltas = periodic_differentials(x, p, [1] * (cutoff + 2), cutoff + 1, field)
            dims = template_dims(template, rep.group.dim)
            return ChainComplex(field=field, dims=dims, differentials=tuple(d.transpose().to_sparse() for d in deltas))


def cotangent_homology(space: SpaceModel, rep: RepPoint) -> HomologyReport:
    report = exact.homology(cotangent_complex(space, rep))
    if isinstance(space, CyclicGroupSpace):
        # The last chain group is where the resolution was cut, its homology is an artefact
        return HomologyReport(
            betti=report.betti,
            euler=report.euler,
            field=report.field,
            reliable_through=space.cutoff,
            notes=(f"truncated periodic resolution, degrees above {space.cutoff} are not reliable",),
        )
    return report


def expected_euler(space: SpaceModel, group: AlgGroup) -> int:
    """
    (1 - chi_top) dim G, except for link complements whose cone of Id - Q has
    two equal-rank terms and so Euler characteristic 0.
    """
    if isinstance(space, LinkComplement):
        return 0
    return (1 - euler_top(space)) * group.dim


def euler_check(space: SpaceModel, rep: RepPoint, report: HomologyReport | None = None) -> EulerCheck:
    """
    Raises:
        Unsupported: for B Z_p
    """
    expected = expected_euler(space, rep.group)
    if report is None:
        report = cotangent_homology(space, rep)
    return EulerCheck(chi=report.euler, expected=expected, passed=report.euler == expected)


def tangent_dims(space: SpaceModel, rep: RepPoint) -> TangentDims:
    """
    z1 = dim Z^1(pi_1, Ad rho), the Zariski tangent space of the representation
    variety at rho; h1_group = z1 - dim B^1 with dim B^1 = dim G - dim H^0.
    """
    presentation = presentation_of(space, allow_non_aspherical=True)
    jacobian = fox_jacobian(presentation, rep.assignment)
    z1 = presentation.n_generators * rep.group.dim - exact.rank(jacobian)
    h0 = joint_fixed_dim(rep.assignment, rep.group, rep.field)
    return TangentDims(z1=z1, h1_group=z1 - (rep.group.dim - h0), h0_group=h0)


def vanishing_certificate(
    space: SpaceModel, rep: RepPoint, local_dim: int | None = None, report: HomologyReport | None = None
) -> Certificate:
    if report is None:
        report = cotangent_homology(space, rep)
    h = report.betti if report.reliable_through is None else report.betti[: report.reliable_through + 1]
    if len(h) < 2:
        bound = 0
    elif all(b == 0 for b in h[2:]):
        bound = h[1]
    else:
        bound = None
    smooth = local_dim is not None and h[0] == local_dim
    return Certificate(rep=rep, h=tuple(h), vanishing_bound=bound, smooth_flag=smooth, local_dim=local_dim)


def cyclic_cohomology(p: int, g: GroupElement, cutoff: int) -> tuple[int, ...]:
    """
    H^i(Z_p, g*) for i = 0..cutoff from the periodic resolution, with gamma
    acting through the coadjoint representation.

    Raises:
        OrderViolated: when g^p is not the identity
    """
    if not (g**p).is_identity():
        raise OrderViolated(f"rho(gamma)^{p} is not the identity")
    field = g.field
    x = coadjoint(g)
    eye = exact.identity(x.shape[0], field)
    norm = _norm(x, p, field)
    ranks = [exact.rank(x - eye) if i % 2 == 0 else exact.rank(norm) for i in range(cutoff + 1)]
    dim = g.group.dim
    return tuple(dim - ranks[i] - (ranks[i - 1] if i else 0) for i in range(cutoff + 1))


def torus_knot_tangent_dim(p: int, q: int, x0: GroupElement, y0: GroupElement) -> int:
    """dim {(u, v) : sum_{i<p} Ad(x0^i) u = sum_{i<q} Ad(y0^i) v}."""
    field = x0.field
    left = _norm(adjoint(x0), p, field)
    right = _norm(adjoint(y0), q, field)
    dim = x0.group.dim
    stacked = exact.block_matrix({(0, 0): left, (0, 1): -right}, [dim], [dim, dim], field)
    return 2 * dim - exact.rank(stacked)


def expected_local_dimension(space: SpaceModel, group: AlgGroup) -> int | None:
    """
    Dimension of the representation variety near a generic smooth point, for
    the spaces where it is known: dim G + rank G for the torus,
    (2g - 1) dim G + dim Z(G) for higher genus surfaces, n dim G for a wedge.
    """
    match space:
        case Surface(genus=1):
            return group.dim + group.rank
        case Surface(genus=g):
            return (2 * g - 1) * group.dim + group.center_dim
        case WedgeCircles(n=n):
            return n * group.dim
    return None


def _certify_row(
    row: pd.Series,
    space: SpaceModel,
    group: AlgGroup,
    field: Field,
    sampler: SamplerName,
    seed: int,
    local_dim: int | None,
) -> pd.Series:
    if row["sample"] == "trivial":
        rep = trivial_rep(space, group, field)
    else:
        index = int(row["sample"])
        rep = RepPoint(group, field, tuple(sample_assignment(space, group, field, sampler, seed, index)), label=str(index))
    report = cotangent_homology(space, rep)
    certificate = vanishing_certificate(space, rep, local_dim, report)
    result = {
        "sample": rep.label,
        "h": list(certificate.h),
        "bound": certificate.vanishing_bound,
        "smooth": certificate.smooth_flag,
        "chi": None,
        "expected": None,
        "pass": None,
        "cohomology": None,
        "images": [g.to_rows() for g in rep.assignment],
    }
    if isinstance(space, CyclicGroupSpace):
        result["cohomology"] = list(cyclic_cohomology(space.p, rep.assignment[0], space.cutoff))
    else:
        check = euler_check(space, rep, report)
        result.update({"chi": check.chi, "expected": check.expected, "pass": check.passed})
    return pd.Series(result)


_FLAG_COLUMNS = {"smooth", "pass"}


def _native(value, flag: bool):
    if isinstance(value, list):
        return value
    if value is None or pd.isna(value):
        return None
    if flag:
        return bool(value)
    if isinstance(value, str):
        return value
    return int(value)


@dataclass(frozen=True)
class CertifyRun:
    rows: pd.DataFrame
    summary: dict

    def records(self) -> list[dict]:
        """Rows as plain Python values, missing entries as None."""
        return [
            {column: _native(value, column in _FLAG_COLUMNS) for column, value in row.items()}
            for row in self.rows.to_dict(orient="records")
        ]


def certify_samples(
    space: SpaceModel,
    group: AlgGroup,
    field: Field,
    sampler: SamplerName = SamplerName.AUTO,
    count: int = 20,
    seed: int = 0,
    local_dim: int | None = None,
    workers: int = 1,
) -> CertifyRun:
    """
    Certificates for the trivial representation followed by ``count`` seeded
    samples, with the Euler identity checked on each.

    The maximum bound is over the sample only and is labelled SAMPLED.
    """
    sampler = resolve_sampler(space, sampler)
    count = sample_count(space, group, sampler, count)
    logger.info(f"Certifying {count} samples of {format_space(space)} in {group} over {field} with sampler {sampler}")
    samples_df = pd.DataFrame({"sample": ["trivial", *(str(i) for i in range(count))]})
    kwargs = {"space": space, "group": group, "field": field, "sampler": sampler, "seed": seed, "local_dim": local_dim}
    if workers > 1:
        pandarallel.initialize(nb_workers=workers, progress_bar=False, verbose=0)
        rows_df = samples_df.parallel_apply(_certify_row, axis=1, **kwargs)
    else:
        tqdm.pandas(unit="reps", disable=None)
        rows_df = samples_df.progress_apply(_certify_row, axis=1, **kwargs)
    run = CertifyRun(rows=rows_df, summary={})
    records = run.records()
    bounds = [r["bound"] for r in records if r["bound"] is not None]
    passes = [r["pass"] for r in records if r["pass"] is not None]
    summary = {
        "space": format_space(space),
        "group": str(group),
        "field": str(field),
        "evidence": field.evidence,
        "sampler": str(sampler),
        "seed": seed,
        "samples": count,
        "max_bound": {"value": max(bounds) if bounds else None, "qualifier": "SAMPLED"},
        "trivial_bound": records[0]["bound"],
        "all_euler_pass": all(passes) if passes else None,
    }
    return CertifyRun(rows=rows_df, summary=summary)
