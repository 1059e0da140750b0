"""
Closed-form answers: character homology of complex projective spaces, the
local system homology feeding it, and the vanishing bounds known for each
space model.
"""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from tabulate import tabulate

from rephom.core.errors import ConfigError, Unsupported
from rephom.core.fox import cycle_count
from rephom.core.liegroups import AlgGroup, group_data
from rephom.core.log import get_logger
from rephom.core.spaces import (
    CyclicGroupSpace,
    LinkComplement,
    SpaceModel,
    Surface,
    TorusKnot,
    WedgeCircles,
)

logger = get_logger()


@dataclass(frozen=True)
class PoincareSeries:
    dims: tuple[int, ...]
    generators: tuple[int, ...]
    description: str

    @property
    def cutoff(self) -> int:
        return len(self.dims) - 1

    def nonzero(self) -> dict[int, int]:
        return {degree: dim for degree, dim in enumerate(self.dims) if dim}

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "generator_degrees": list(self.generators),
            "series": [{"degree": degree, "dim": dim} for degree, dim in enumerate(self.dims)],
        }


def resolve_exponents(group: AlgGroup | None, exponents: Sequence[int] | None) -> tuple[int, ...]:
    if exponents is not None:
        if any(m < 1 for m in exponents):
            raise ConfigError(f"Exponents must be positive, got {list(exponents)}")
        return tuple(exponents)
    if group is None or group.exponents is None:
        raise ConfigError("Exponents are not fixed for this group, pass them explicitly")
    return group.exponents


def cpr_generator_degrees(exponents: Sequence[int], r: int) -> tuple[int, ...]:
    """Degree 2 r m + 2 s - 1 for every exponent m and s = 1..r."""
    if r < 1:
        raise ConfigError(f"CP^r needs r >= 1, got {r}")
    return tuple(sorted(2 * r * m + 2 * s - 1 for m in exponents for s in range(1, r + 1)))


def cpr_char_homology(exponents: Sequence[int], r: int, cutoff: int) -> PoincareSeries:
    """
    Dimension series of the free graded-commutative algebra on the odd
    generators of ``cpr_generator_degrees``, i.e. an exterior algebra.
    """
    degrees = cpr_generator_degrees(exponents, r)
    logger.debug(f"CP^{r} character homology generators in degrees {degrees}")
    series = np.zeros(cutoff + 1, dtype=np.int64)
    series[0] = 1
    for degree in degrees:
        factor = np.zeros(degree + 1, dtype=np.int64)
        factor[0] = factor[degree] = 1
        series = np.convolve(series, factor)[: cutoff + 1]
    names = ", ".join(f"xi_{2 * s - 1}^({i + 1})" for i in range(len(exponents)) for s in range(1, r + 1))
    return PoincareSeries(
        dims=tuple(int(v) for v in series),
        generators=degrees,
        description=f"exterior algebra on {names}" if names else "ground field",
    )


def cpr_cotangent_homology(exponents: Sequence[int], r: int) -> dict[int, int]:
    """One class in each generator degree of the character homology."""
    dims: dict[int, int] = {}
    for degree in cpr_generator_degrees(exponents, r):
        dims[degree] = dims.get(degree, 0) + 1
    return dims


def cpr_local_system_homology(group: AlgGroup, r: int) -> dict[int, int]:
    """H_{i+1}(CP^r, g*) has dimension dim G for i = 1, 3, ..., 2r - 1 and vanishes otherwise."""
    if r < 1:
        raise ConfigError(f"CP^r needs r >= 1, got {r}")
    return {i: group.dim for i in range(1, 2 * r, 2)}


class BoundStatus(StrEnum):
    PROVEN = "PROVEN"
    CONJECTURAL = "CONJECTURAL"
    LOCAL = "LOCAL"


@dataclass(frozen=True)
class Bound:
    """HR_i vanishes for i > bound, with the status of that statement."""

    bound: int
    status: BoundStatus
    source: str

    def to_dict(self) -> dict:
        return {"bound": self.bound, "status": str(self.status), "source": self.source}


def global_bounds(space: SpaceModel, group: AlgGroup) -> list[Bound]:
    """
    Raises:
        Unsupported: for spaces with no vanishing statement
    """
    data = group_data(group)
    match space:
        case Surface(genus=1):
            return [
                Bound(data.dim, BoundStatus.PROVEN, "surfaces of genus g >= 1 vanish above dim G"),
                Bound(data.rank, BoundStatus.CONJECTURAL, "torus vanishes above rank G"),
                Bound(data.rank, BoundStatus.LOCAL, "at smooth representations of the torus"),
            ]
        case Surface():
            return [
                Bound(data.dim, BoundStatus.PROVEN, "surfaces of genus g >= 1 vanish above dim G"),
                Bound(data.center_dim, BoundStatus.CONJECTURAL, "genus g >= 2 vanishes above dim Z(G)"),
                Bound(data.center_dim, BoundStatus.LOCAL, "at smooth representations of genus g >= 2"),
            ]
        case LinkComplement(braid=braid):
            return [
                Bound(
                    braid.strands * data.dim,
                    BoundStatus.PROVEN,
                    "link complements vanish above the maximal tangent dimension, at most strands * dim G",
                ),
                Bound(
                    cycle_count(braid) * data.dim,
                    BoundStatus.LOCAL,
                    "at smooth points of the trivial component, components * dim G",
                ),
            ]
        case TorusKnot():
            return [
                Bound(2 * data.dim, BoundStatus.PROVEN, "torus knot complements vanish above 2 dim G"),
                Bound(data.dim, BoundStatus.LOCAL, "at smooth points of the trivial component"),
            ]
        case WedgeCircles() | CyclicGroupSpace():
            return [Bound(0, BoundStatus.PROVEN, "virtually free groups have no higher representation homology")]
    raise Unsupported(f"No vanishing bound is known for {type(space).__name__}")


def markdown_table(rows: Iterable[Mapping[str, object]]) -> str:
    rows = list(rows)
    if not rows:
        return ""
    return tabulate(rows, headers="keys", tablefmt="github")
