"""
Reductive groups built from GL(n), SL(n) and tori, their elements, and the
adjoint and coadjoint actions on the Lie algebra.

Lie algebra bases:

* gl(n): the matrix units E_ij in row-major order.
* sl(n): E_ij for i != j in row-major order, then H_i = E_ii - E_{i+1,i+1}.
* torus of rank r: the diagonal units.

A product group uses the concatenation of its factors' bases.
"""

import re
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import NamedTuple

from sympy.polys.matrices import DomainMatrix

from rephom.core import exact
from rephom.core.errors import ConfigError, NotInvertible
from rephom.core.exact import Field, Scalar
from rephom.core.log import get_logger

logger = get_logger()


class GroupKind(StrEnum):
    GL = "GL"
    SL = "SL"
    TORUS = "T"


@dataclass(frozen=True)
class GroupFactor:
    kind: GroupKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"Group size must be at least 1, got {self.n}")

    @property
    def dim(self) -> int:
        match self.kind:
            case GroupKind.GL:
                return self.n * self.n
            case GroupKind.SL:
                return self.n * self.n - 1
            case GroupKind.TORUS:
                return self.n

    @property
    def rank(self) -> int:
        return self.n - 1 if self.kind is GroupKind.SL else self.n

    @property
    def center_dim(self) -> int:
        match self.kind:
            case GroupKind.GL:
                return 1
            case GroupKind.SL:
                return 0
            case GroupKind.TORUS:
                return self.n

    @property
    def exponents(self) -> tuple[int, ...] | None:
        match self.kind:
            case GroupKind.GL:
                # The centre of GL(n) is not semisimple
                return None
            case GroupKind.SL:
                return tuple(range(1, self.n))
            case GroupKind.TORUS:
                return ()

    def __str__(self) -> str:
        if self.kind is GroupKind.TORUS:
            return f"T^{self.n}"
        return f"{self.kind}{self.n}"


@dataclass(frozen=True)
class AlgGroup:
    factors: tuple[GroupFactor, ...]

    def __post_init__(self):
        if not self.factors:
            raise ConfigError("A group needs at least one factor")

    @classmethod
    def gl(cls, n: int) -> "AlgGroup":
        return cls((GroupFactor(GroupKind.GL, n),))

    @classmethod
    def sl(cls, n: int) -> "AlgGroup":
        return cls((GroupFactor(GroupKind.SL, n),))

    @classmethod
    def torus(cls, r: int) -> "AlgGroup":
        return cls((GroupFactor(GroupKind.TORUS, r),))

    def __mul__(self, other: "AlgGroup") -> "AlgGroup":
        return AlgGroup(self.factors + other.factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def center_dim(self) -> int:
        return sum(f.center_dim for f in self.factors)

    @property
    def exponents(self) -> tuple[int, ...] | None:
        exponents = []
        for f in self.factors:
            if f.exponents is None:
                return None
            exponents.extend(f.exponents)
        return tuple(sorted(exponents))

    @property
    def size(self) -> int:
        """Size of the block diagonal matrices representing group elements."""
        return sum(f.n for f in self.factors)

    @property
    def block_offsets(self) -> list[int]:
        offsets = [0]
        for f in self.factors:
            offsets.append(offsets[-1] + f.n)
        return offsets

    @property
    def lie_offsets(self) -> list[int]:
        offsets = [0]
        for f in self.factors:
            offsets.append(offsets[-1] + f.dim)
        return offsets

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)


class GroupData(NamedTuple):
    dim: int
    rank: int
    center_dim: int
    exponents: tuple[int, ...] | None


def group_data(group: AlgGroup) -> GroupData:
    return GroupData(dim=group.dim, rank=group.rank, center_dim=group.center_dim, exponents=group.exponents)


_FACTOR_RE = re.compile(r"^(?:(GL|SL)\(?(\d+)\)?|(?:T|Torus)\^?\(?(\d+)\)?)$", re.IGNORECASE)


def parse_group(text: str) -> AlgGroup:
    """
    Parse a group descriptor such as ``GL2``, ``SL(3)``, ``T^2`` or ``GL2xT^1``.

    Raises:
        ConfigError: with the column of the first unreadable factor
    """
    factors = []
    column = 1
    for part in text.strip().split("x"):
        match = _FACTOR_RE.match(part.strip())
        if match is None:
            raise ConfigError(f'Unknown group factor "{part}", expected GL<n>, SL<n> or T^<r>', line=1, column=column)
        if match.group(1):
            factors.append(GroupFactor(GroupKind(match.group(1).upper()), int(match.group(2))))
        else:
            factors.append(GroupFactor(GroupKind.TORUS, int(match.group(3))))
        column += len(part) + 1
    return AlgGroup(tuple(factors))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """
    A point of G(k), held as one block diagonal matrix.

    Build instances through ``element`` or ``from_blocks`` so that membership
    in G is checked; products and inverses of members are members.
    """

    group: AlgGroup
    field: Field
    matrix: DomainMatrix

    def blocks(self) -> list[DomainMatrix]:
        offsets = self.group.block_offsets
        return [
            self.matrix.extract(list(range(a, b)), list(range(a, b))) for a, b in zip(offsets, offsets[1:])
        ]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.group, self.field, self.matrix * other.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.field, exact.inverse(self.matrix))

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = identity_element(self.group, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group == other.group and exact.equal(self.matrix, other.matrix)

    def is_identity(self) -> bool:
        return exact.equal(self.matrix, exact.identity(self.group.size, self.field))

    def to_rows(self) -> list[list[str]]:
        return [[self.field.format(v) for v in row] for row in self.matrix.to_dense().to_list()]


def identity_element(group: AlgGroup, field: Field) -> GroupElement:
    return GroupElement(group, field, exact.identity(group.size, field))


def element(group: AlgGroup, rows: Sequence[Sequence[Scalar]], field: Field) -> GroupElement:
    """
    A group element from its full block diagonal matrix.

    Raises:
        ConfigError: when the matrix has the wrong shape or non-zero entries off the blocks
        NotInvertible: when a block is singular, an SL block has determinant other than 1,
            or a torus block is not diagonal
    """
    size = group.size
    if len(rows) != size or any(len(row) != size for row in rows):
        raise ConfigError(f"Elements of {group} are {size}x{size} matrices")
    m = exact.matrix(rows, field)
    offsets = group.block_offsets
    block_of = [i for i, (a, b) in enumerate(zip(offsets, offsets[1:])) for _ in range(a, b)]
    for i, j in exact.entries(m):
        if block_of[i] != block_of[j]:
            raise ConfigError(f"Entry ({i + 1}, {j + 1}) lies outside the diagonal blocks of {group}")
    g = GroupElement(group, field, m)
    for factor, block in zip(group.factors, g.blocks()):
        _check_block(factor, block, field)
    return g


def from_blocks(group: AlgGroup, blocks: Sequence[Sequence[Sequence[Scalar]]], field: Field) -> GroupElement:
    if len(blocks) != len(group.factors):
        raise ConfigError(f"{group} has {len(group.factors)} factors, got {len(blocks)} blocks")
    m = exact.block_diagonal([exact.matrix(b, field) if b else exact.zeros(0, 0, field) for b in blocks], field)
    if m.shape != (group.size, group.size):
        raise ConfigError(f"Blocks do not fit {group}")
    return element(group, m.to_dense().to_list(), field)


def diagonal_element(group: AlgGroup, diagonal: Sequence[Scalar], field: Field) -> GroupElement:
    K = field.domain
    rows = [[diagonal[i] if i == j else K.zero for j in range(group.size)] for i in range(group.size)]
    return element(group, rows, field)


def _check_block(factor: GroupFactor, block: DomainMatrix, field: Field) -> None:
    det = block.to_dense().det()
    if not det:
        raise NotInvertible(f"The {factor} block is singular")
    if factor.kind is GroupKind.SL and det != field.domain.one:
        raise NotInvertible(f"The {factor} block has determinant {field.format(det)}, not 1")
    if factor.kind is GroupKind.TORUS and any(i != j for i, j in exact.entries(block)):
        raise NotInvertible(f"The {factor} block is not diagonal")


def lie_basis(factor: GroupFactor, field: Field) -> list[DomainMatrix]:
    K = field.domain
    n = factor.n
    shape = (n, n)
    match factor.kind:
        case GroupKind.GL:
            return [exact.from_entries({(i, j): K.one}, shape, field) for i in range(n) for j in range(n)]
        case GroupKind.SL:
            off_diagonal = [
                exact.from_entries({(i, j): K.one}, shape, field) for i in range(n) for j in range(n) if i != j
            ]
            cartan = [exact.from_entries({(i, i): K.one, (i + 1, i + 1): -K.one}, shape, field) for i in range(n - 1)]
            return off_diagonal + cartan
        case GroupKind.TORUS:
            return [exact.from_entries({(i, i): K.one}, shape, field) for i in range(n)]


def coordinates(factor: GroupFactor, x: DomainMatrix, field: Field) -> list[Scalar]:
    """Coordinates of a Lie algebra element in ``lie_basis(factor)``."""
    K = field.domain
    n = factor.n
    values = exact.entries(x)

    def entry(i: int, j: int) -> Scalar:
        return values.get((i, j), K.zero)

    match factor.kind:
        case GroupKind.GL:
            return [entry(i, j) for i in range(n) for j in range(n)]
        case GroupKind.SL:
            coords = [entry(i, j) for i in range(n) for j in range(n) if i != j]
            running = K.zero
            for i in range(n - 1):
                running += entry(i, i)
                coords.append(running)
            return coords
        case GroupKind.TORUS:
            return [entry(i, i) for i in range(n)]


def adjoint(g: GroupElement) -> DomainMatrix:
    """Matrix of Ad(g) on the Lie algebra in the fixed basis, dim G x dim G."""
    field = g.field
    blocks = []
    for factor, block in zip(g.group.factors, g.blocks()):
        if factor.kind is GroupKind.TORUS:
            blocks.append(exact.identity(factor.dim, field))
            continue
        block_inverse = exact.inverse(block) if factor.n else block
        columns = [coordinates(factor, block * u * block_inverse, field) for u in lie_basis(factor, field)]
        blocks.append(
            exact.from_entries(
                {(i, j): v for j, column in enumerate(columns) for i, v in enumerate(column)},
                (factor.dim, factor.dim),
                field,
            )
        )
    return exact.block_diagonal(blocks, field)


def coadjoint(g: GroupElement) -> DomainMatrix:
    """Ad*(g) = Ad(g^-1)^T on the dual of the Lie algebra in the dual basis."""
    return adjoint(g.inverse()).transpose()


def is_central(g: GroupElement) -> bool:
    return exact.equal(adjoint(g), exact.identity(g.group.dim, g.field))


def joint_fixed_dim(elements: Sequence[GroupElement], group: AlgGroup, field: Field) -> int:
    """Dimension of the subspace of the Lie algebra fixed by Ad of every element."""
    if not elements:
        return group.dim
    eye = exact.identity(group.dim, field)
    stacked = exact.vstack([adjoint(g) - eye for g in elements], group.dim, field)
    return group.dim - exact.rank(stacked)

