"""
Koszul models of derived representation schemes of the torus and of closed
surfaces, and their homology in bounded internal degree.

The complex is the exterior algebra on the odd variables over the polynomial
ring on the even variables, with d(theta_j) = relation_j. Determinants are not
inverted: every table is pre-localization homology, an upper bound for the
localized one.
"""

import itertools
import math
from dataclasses import dataclass

import pandas as pd
from pandarallel import pandarallel
from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring
from tqdm import tqdm

from rephom.core import exact
from rephom.core.errors import BudgetExceeded, ConfigError, Unsupported
from rephom.core.exact import ChainComplex, Field
from rephom.core.liegroups import AlgGroup, GroupKind, parse_group
from rephom.core.log import get_logger

logger = get_logger()

DEFAULT_BUDGET = 20000

Monomial = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class KoszulModel:
    name: str
    n_even_vars: int
    relations: tuple[PolyElement, ...]
    odd_weight: int
    localized_dets: tuple[PolyElement, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def n_odd_vars(self) -> int:
        return len(self.relations)

    def check_homogeneous(self) -> None:
        """Every relation must have internal weight ``odd_weight`` so that d preserves the grading."""
        for index, r in enumerate(self.relations):
            for monomial in r.monoms():
                if sum(monomial) != self.odd_weight:
                    raise ConfigError(f"Relation {index} is not homogeneous of degree {self.odd_weight}")


def _polynomial_matrices(count: int, n: int, prefix: str = "x"):
    names = [f"{prefix}{k}_{i}{j}" for k in range(count) for i in range(n) for j in range(n)]
    R, *gens = ring(names, ZZ)
    matrices = [[[gens[k * n * n + i * n + j] for j in range(n)] for i in range(n)] for k in range(count)]
    return R, matrices


def _mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), start=a[0][0].ring.zero) for j in range(n)] for i in range(n)]


def _det(a) -> PolyElement:
    n = len(a)
    if n == 1:
        return a[0][0]
    total = a[0][0].ring.zero
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        total += (-1) ** j * a[0][j] * _det(minor)
    return total


def _adjugate(a):
    n = len(a)
    if n == 1:
        return [[a[0][0].ring.one]]
    return [
        [(-1) ** (i + j) * _det([row[:i] + row[i + 1 :] for k, row in enumerate(a) if k != j]) for j in range(n)]
        for i in range(n)
    ]


def _sl_coordinates(m) -> list[PolyElement]:
    n = len(m)
    coords = [m[i][j] for i in range(n) for j in range(n) if i != j]
    running = m[0][0].ring.zero
    for i in range(n - 1):
        running += m[i][i]
        coords.append(running)
    return coords


def torus_model(group: AlgGroup) -> KoszulModel:
    """
    The commuting variety model: even variables the entries of X and Y, one odd
    variable per Lie algebra coordinate with d(theta) the matching coordinate of
    XY - YX.
    """
    if len(group.factors) != 1:
        raise Unsupported("Koszul models are built for a single GL, SL or torus factor")
    (factor,) = group.factors
    n = factor.n
    if factor.kind is GroupKind.TORUS:
        R, *_ = ring([f"x{i}" for i in range(2 * n)], ZZ)
        return KoszulModel(
            name=f"torus:{group}",
            n_even_vars=2 * n,
            relations=(R.zero,) * n,
            odd_weight=2,
            notes=("abelian group, every relation vanishes",),
        )
    R, (x, y) = _polynomial_matrices(2, n)
    commutator = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(_mul(x, y), _mul(y, x))]
    if factor.kind is GroupKind.GL:
        relations = tuple(commutator[i][j] for i in range(n) for j in range(n))
    else:
        relations = tuple(_sl_coordinates(commutator))
    return KoszulModel(
        name=f"torus:{group}",
        n_even_vars=2 * n * n,
        relations=relations,
        odd_weight=2,
        localized_dets=(_det(x), _det(y)),
    )


def surface_model(group: AlgGroup, genus: int) -> KoszulModel:
    """
    The genus g model for GL(n): the relator prod [X_i, Y_i] = 1 is multiplied on
    the right by Y_g X_g and the inverses of X_i, Y_i (i < g) are written as
    adjugates over determinants, whose product is then cleared.
    """
    if genus < 1:
        raise ConfigError(f"Genus must be at least 1, got {genus}")
    if len(group.factors) != 1 or group.factors[0].kind is not GroupKind.GL:
        raise Unsupported("Surface Koszul models are built for GL(n)")
    n = group.factors[0].n
    R, matrices = _polynomial_matrices(2 * genus, n)
    left = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    cleared = R.one
    dets = []
    for i in range(genus - 1):
        x, y = matrices[2 * i], matrices[2 * i + 1]
        left = _mul(_mul(_mul(_mul(left, x), y), _adjugate(x)), _adjugate(y))
        cleared *= _det(x) * _det(y)
        dets.extend([_det(x), _det(y)])
    x, y = matrices[-2], matrices[-1]
    lhs = _mul(_mul(left, x), y)
    rhs = _mul(y, x)
    relations = tuple(lhs[i][j] - cleared * rhs[i][j] for i in range(n) for j in range(n))
    dets.extend([_det(x), _det(y)])
    degree = 2 * n * (genus - 1) + 2
    return KoszulModel(
        name=f"surface:{group},g={genus}",
        n_even_vars=2 * genus * n * n,
        relations=relations,
        odd_weight=degree,
        localized_dets=tuple(dets),
        notes=(
            "relator multiplied on the right by Y_g X_g",
            f"cleared determinant factor of degree {2 * n * (genus - 1)}",
        ),
    )


@dataclass(frozen=True)
class GradedBetti:
    """(homological degree, internal degree) -> dim of pre-localization Koszul homology."""

    table: dict[tuple[int, int], int]
    chain_dims: dict[tuple[int, int], int]
    max_internal_degree: int
    model: str

    def euler(self, internal_degree: int) -> int:
        return sum((-1) ** a * b for (a, w), b in self.table.items() if w == internal_degree)

    def chain_euler(self, internal_degree: int) -> int:
        return sum((-1) ** a * c for (a, w), c in self.chain_dims.items() if w == internal_degree)

    def to_frame(self) -> pd.DataFrame:
        degrees = sorted({a for a, _ in self.chain_dims})
        frame = pd.DataFrame(0, index=degrees, columns=range(self.max_internal_degree + 1), dtype=int)
        for (a, w), b in self.table.items():
            frame.loc[a, w] = b
        frame.index.name = "homological_degree"
        return frame

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "pre_localization": True,
            "max_internal_degree": self.max_internal_degree,
            "entries": [
                {"homological_degree": a, "internal_degree": w, "dim": b} for (a, w), b in sorted(self.table.items())
            ],
        }


def _monomials(n_vars: int, degree: int) -> list[Monomial]:
    if degree < 0:
        return []
    monomials = []
    for combination in itertools.combinations_with_replacement(range(n_vars), degree):
        exponents = [0] * n_vars
        for v in combination:
            exponents[v] += 1
        monomials.append(tuple(exponents))
    # graded lexicographic within one degree
    return sorted(monomials, reverse=True)


def _basis(model: KoszulModel, a: int, w: int) -> list[tuple[tuple[int, ...], Monomial]]:
    polynomial_degree = w - a * model.odd_weight
    return [
        (subset, monomial)
        for subset in itertools.combinations(range(model.n_odd_vars), a)
        for monomial in _monomials(model.n_even_vars, polynomial_degree)
    ]


def _piece_sizes(model: KoszulModel, w: int) -> list[int]:
    top = min(model.n_odd_vars, w // model.odd_weight)
    return [
        math.comb(model.n_odd_vars, a) * polynomial_piece_dim(model.n_even_vars, w - a * model.odd_weight)
        for a in range(top + 1)
    ]


def _degree_block(row: pd.Series, model: KoszulModel) -> pd.Series:
    """Betti numbers of the strand of internal degree ``row["internal_degree"]``."""
    w = int(row["internal_degree"])
    field = Field.rational()
    K = field.domain
    relation_terms = [[(m, K.convert_from(c, ZZ)) for m, c in r.terms()] for r in model.relations]
    top = min(model.n_odd_vars, w // model.odd_weight)
    bases = [_basis(model, a, w) for a in range(top + 1)]
    logger.debug(f"Internal degree {w}: chain dimensions {[len(b) for b in bases]}")
    indices = [{element: i for i, element in enumerate(b)} for b in bases]
    differentials = []
    for a in range(1, top + 1):
        entries = {}
        for column, (subset, monomial) in enumerate(bases[a]):
            for position, j in enumerate(subset):
                rest = subset[:position] + subset[position + 1 :]
                sign = -1 if position % 2 else 1
                for exponent, coefficient in relation_terms[j]:
                    target = (rest, tuple(e + f for e, f in zip(monomial, exponent)))
                    row_index = indices[a - 1][target]
                    entries[(row_index, column)] = entries.get((row_index, column), K.zero) + coefficient * sign
        differentials.append(exact.from_entries(entries, (len(bases[a - 1]), len(bases[a])), field))
    report = exact.homology(
        ChainComplex(field=field, dims=tuple(len(b) for b in bases), differentials=tuple(differentials))
    )
    return pd.Series({"betti": tuple(report.betti), "chain_dims": tuple(len(b) for b in bases)})


def truncated_homology(
    model: KoszulModel, max_internal_degree: int, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> GradedBetti:
    """
    Homology of the Koszul complex strand by strand in internal degree, up to
    ``max_internal_degree``, over the rationals. Strands are independent and are
    spread over ``workers`` processes when there is more than one.

    Raises:
        BudgetExceeded: when a graded piece has more than ``budget`` basis elements
    """
    model.check_homogeneous()
    for w in range(max_internal_degree + 1):
        sizes = _piece_sizes(model, w)
        if any(size > budget for size in sizes):
            dims = {f"({a}, {w})": size for a, size in enumerate(sizes)}
            raise BudgetExceeded(f"Graded piece in internal degree {w} exceeds the budget of {budget}", dims)
    degrees_df = pd.DataFrame({"internal_degree": range(max_internal_degree + 1)})
    if workers > 1:
        pandarallel.initialize(nb_workers=workers, progress_bar=False, verbose=0)
        blocks_df = degrees_df.parallel_apply(_degree_block, axis=1, model=model)
    else:
        tqdm.pandas(unit="degrees", disable=None)
        blocks_df = degrees_df.progress_apply(_degree_block, axis=1, model=model)
    table = {}
    chain_dims = {}
    for w, betti, sizes in zip(degrees_df["internal_degree"], blocks_df["betti"], blocks_df["chain_dims"]):
        for a, (b, size) in enumerate(zip(betti, sizes)):
            table[(a, int(w))] = b
            chain_dims[(a, int(w))] = size
    return GradedBetti(table=table, chain_dims=chain_dims, max_internal_degree=max_internal_degree, model=model.name)


def hr_torus_closed_form(r: int, genus: int) -> tuple[int, ...]:
    """Ranks C(r, i) of HR_i(surface of genus g, rank r torus) as free modules over O(G^{2g})."""
    if r < 1 or genus < 1:
        raise ConfigError("Rank and genus must be at least 1")
    return tuple(math.comb(r, i) for i in range(r + 1))


def polynomial_piece_dim(n_vars: int, degree: int) -> int:
    if degree < 0:
        return 0
    return math.comb(n_vars + degree - 1, degree) if n_vars else int(degree == 0)


def koszul_chain_euler(model: KoszulModel, internal_degree: int) -> int:
    """sum_a (-1)^a dim(Lambda^a ⊗ polynomial piece), which the homology must reproduce."""
    return sum(
        (-1) ** a * math.comb(model.n_odd_vars, a) * polynomial_piece_dim(model.n_even_vars, internal_degree - a * model.odd_weight)
        for a in range(model.n_odd_vars + 1)
    )


def parse_model(text: str) -> KoszulModel:
    """
    Parse ``torus:<group>`` or ``surface:<group>,g=<genus>``.

    Raises:
        ConfigError: on malformed input
    """
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ConfigError(f'Expected "torus:<group>" or "surface:<group>,g=<genus>", got "{text}"', line=1, column=1)
    match kind.strip():
        case "torus":
            return torus_model(parse_group(rest))
        case "surface":
            group_text, _, genus_text = rest.partition(",")
            key, _, value = genus_text.partition("=")
            if key.strip() != "g":
                raise ConfigError("Surface models need g=<genus>", line=1, column=len(kind) + len(group_text) + 3)
            try:
                genus = int(value)
            except ValueError as error:
                raise ConfigError(f'Genus must be an integer, got "{value}"', line=1) from error
            return surface_model(parse_group(group_text), genus)
    raise ConfigError(f'Unknown model kind "{kind}"', line=1, column=1)


def model_summary(model: KoszulModel) -> dict:
    return {
        "model": model.name,
        "even_vars": model.n_even_vars,
        "odd_vars": model.n_odd_vars,
        "odd_weight": model.odd_weight,
        "relations": [str(r) for r in model.relations],
        "localized_dets": [str(d) for d in model.localized_dets],
        "notes": list(model.notes),
    }
