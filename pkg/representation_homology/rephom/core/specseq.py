"""
E2 pages built from derived symmetric powers of a graded vector space.

Over a field of characteristic zero a complex of vector spaces is formal, so
the derived symmetric powers of the cotangent complex depend only on its
homology dimensions: Sym of the homology, polynomial on even degrees and
exterior on odd degrees.
"""

import math
from collections.abc import Mapping
from dataclasses import dataclass
from functools import reduce

import pandas as pd

from rephom.core.errors import ConfigError
from rephom.core.log import get_logger

logger = get_logger()

GradedDims = dict[int, int]

FORMALITY_NOTE = "derived Sym computed from homology dimensions, valid over characteristic zero"


def _check(h: Mapping[int, int]) -> None:
    for degree, dim in h.items():
        if degree < 0 or dim < 0:
            raise ConfigError(f"Graded dimensions must be non-negative, got {degree}: {dim}")


def _generator_series(degree: int, count: int, max_weight: int) -> dict[tuple[int, int], int]:
    """Weight/degree series of Sym on ``count`` generators of one degree."""
    series = {}
    for a in range(max_weight + 1):
        if degree % 2 == 0:
            dim = math.comb(count + a - 1, a) if count else int(a == 0)
        else:
            dim = math.comb(count, a)
        if dim:
            series[(a, a * degree)] = dim
    return series


def _convolve(
    left: Mapping[tuple[int, int], int], right: Mapping[tuple[int, int], int], max_weight: int
) -> dict[tuple[int, int], int]:
    product: dict[tuple[int, int], int] = {}
    for (w1, n1), a in left.items():
        for (w2, n2), b in right.items():
            if w1 + w2 <= max_weight:
                key = (w1 + w2, n1 + n2)
                product[key] = product.get(key, 0) + a * b
    return product


def free_algebra_series(h: Mapping[int, int], max_weight: int) -> dict[tuple[int, int], int]:
    """(weight, total degree) -> dim of the free graded-commutative algebra on ``h``, weights up to ``max_weight``."""
    _check(h)
    factors = [_generator_series(degree, count, max_weight) for degree, count in sorted(h.items()) if count]
    return reduce(lambda a, b: _convolve(a, b, max_weight), factors, {(0, 0): 1})


def derived_sym_dims(h: Mapping[int, int], p: int) -> GradedDims:
    """Total degree -> dim of the weight ``p`` piece of Sym(h)."""
    series = free_algebra_series(h, p)
    return {n: dim for (w, n), dim in sorted(series.items()) if w == p and dim}


@dataclass(frozen=True)
class E2Page:
    table: dict[tuple[int, int], int]
    p_max: int
    n_max: int
    lacunary_modulus: int | None

    def quillen_index(self, weight: int, total: int) -> tuple[int, int]:
        """The (p, q) position of a (weight, total degree) entry, q being the symmetric power."""
        return total - weight, weight

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for (w, n), dim in sorted(self.table.items()):
            p, q = self.quillen_index(w, n)
            rows.append({"weight": w, "total_degree": n, "p": p, "q": q, "dim": dim})
        return pd.DataFrame(rows, columns=["weight", "total_degree", "p", "q", "dim"])

    def grid(self) -> pd.DataFrame:
        """Weights as rows, total degrees as columns."""
        grid = pd.DataFrame(0, index=range(self.p_max + 1), columns=range(self.n_max + 1), dtype=int)
        for (w, n), dim in self.table.items():
            grid.loc[w, n] = dim
        grid.index.name = "weight"
        return grid

    def to_dict(self) -> dict:
        return {
            "p_max": self.p_max,
            "n_max": self.n_max,
            "lacunary_modulus": self.lacunary_modulus,
            "entries": self.to_frame().to_dict(orient="records"),
            "note": FORMALITY_NOTE,
        }


def e2_page(h: Mapping[int, int], p_max: int, n_max: int) -> E2Page:
    series = free_algebra_series(h, p_max)
    table = {(w, n): dim for (w, n), dim in series.items() if n <= n_max and dim}
    positive = sorted({n for (_, n) in table if n > 0})
    modulus = reduce(math.gcd, positive, 0) if positive else None
    if modulus is not None and modulus < 2:
        modulus = None
    logger.debug(f"E2 page with {len(table)} nonzero entries, lacunary modulus {modulus}")
    return E2Page(table=table, p_max=p_max, n_max=n_max, lacunary_modulus=modulus)


@dataclass(frozen=True)
class DegenerationReport:
    degenerate: bool
    reason: str
    predicted_nonzero_degrees: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "reason": self.reason,
            "predicted_nonzero_degrees": list(self.predicted_nonzero_degrees),
        }


def degeneration_report(page: E2Page) -> DegenerationReport:
    """
    Differentials lower the total degree by one, so a page whose nonzero
    entries sit in total degrees divisible by some d >= 2 cannot support any.
    """
    degrees = sorted({n for (_, n) in page.table})
    if not any(n > 0 for n in degrees):
        return DegenerationReport(True, "no entries in positive total degree", (0,))
    if page.lacunary_modulus is not None:
        top = max(degrees)
        predicted = tuple(range(0, top + 1, page.lacunary_modulus))
        return DegenerationReport(
            True, f"lacunary: all total degrees are multiples of {page.lacunary_modulus}", predicted
        )
    return DegenerationReport(False, "differentials not excluded", tuple(degrees))
