"""
Exact ground fields and sparse linear algebra over them.

Matrices are sympy ``DomainMatrix`` objects kept in sparse format over one of
three ground fields: the rationals, a prime field F_q, or the cyclotomic
field Q(zeta_N). Floating point never enters a rank computation.
"""

import functools
import typing
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from tokenize import TokenError

import numpy as np
from sympy import I, Matrix, Poly, Symbol, exp, fraction, pi, together
from sympy.core.sympify import SympifyError
from sympy.matrices.normalforms import smith_normal_form
from sympy.ntheory import isprime, primitive_root
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.polyerrors import BasePolynomialError

from rephom.core.errors import ComplexInvalid, ConfigError
from rephom.core.log import get_logger

logger = get_logger()

Scalar: typing.TypeAlias = typing.Any
SparseMatrix: typing.TypeAlias = DomainMatrix

# Below this size a rank computation is done on the dense representation
DENSE_THRESHOLD = 64

ROOT_SYMBOL = Symbol("z")


class FieldKind(StrEnum):
    RATIONAL = "Q"
    PRIME = "fq"
    CYCLOTOMIC = "cyclotomic"


@dataclass(frozen=True)
class Field:
    kind: FieldKind
    modulus: int | None = None
    order: int | None = None
    root: int | None = None

    def __post_init__(self):
        match self.kind:
            case FieldKind.RATIONAL:
                if self.modulus is not None or self.root is not None:
                    raise ConfigError("The rational field takes no modulus or root")
                if self.order not in (None, 1, 2):
                    raise ConfigError(f"Q contains no primitive {self.order}-th root of unity")
            case FieldKind.PRIME:
                if self.modulus is None or not isprime(self.modulus):
                    raise ConfigError(f"Prime field modulus must be prime, got {self.modulus}")
                if self.order is not None:
                    if self.order < 1 or (self.modulus - 1) % self.order:
                        raise ConfigError(
                            f"F_{self.modulus} has no primitive {self.order}-th root of unity (need q = 1 mod {self.order})"
                        )
                    if self.root is not None and not _is_primitive_root(self.root, self.order, self.modulus):
                        raise ConfigError(f"{self.root} is not a primitive {self.order}-th root of unity mod {self.modulus}")
                elif self.root is not None:
                    raise ConfigError("A root of unity needs its order")
            case FieldKind.CYCLOTOMIC:
                if self.order is None or self.order < 1:
                    raise ConfigError("The cyclotomic field needs an order N >= 1")
                if self.modulus is not None or self.root is not None:
                    raise ConfigError("The cyclotomic field takes no modulus or root")

    @classmethod
    def rational(cls) -> "Field":
        return cls(FieldKind.RATIONAL)

    @classmethod
    def prime(cls, modulus: int, order: int | None = None, root: int | None = None) -> "Field":
        return cls(FieldKind.PRIME, modulus=modulus, order=order, root=root)

    @classmethod
    def cyclotomic(cls, order: int) -> "Field":
        return cls(FieldKind.CYCLOTOMIC, order=order)

    @property
    def domain(self):
        return _domain(self)

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind is FieldKind.PRIME else 0

    @property
    def evidence(self) -> str:
        """Label attached to every result: exact in characteristic zero, modular evidence otherwise."""
        return "exact" if self.characteristic == 0 else "modular evidence"

    def __str__(self) -> str:
        match self.kind:
            case FieldKind.RATIONAL:
                return "Q"
            case FieldKind.PRIME:
                text = f"fq:{self.modulus}"
                if self.order is not None:
                    text += f",root={self.primitive_root_value()},order={self.order}"
                return text
            case FieldKind.CYCLOTOMIC:
                return f"cyclotomic:{self.order}"

    def primitive_root_value(self) -> int:
        """The integer standing for zeta_N in F_q."""
        if self.kind is not FieldKind.PRIME or self.order is None:
            raise ConfigError(f"{self} has no designated root of unity")
        if self.root is not None:
            return self.root
        return pow(int(primitive_root(self.modulus)), (self.modulus - 1) // self.order, self.modulus)

    def has_root_of_unity(self, p: int) -> bool:
        if p in (1, 2):
            return True
        return self.order is not None and self.order % p == 0

    def root_of_unity(self, p: int) -> Scalar:
        """
        A primitive p-th root of unity in the field.

        Raises:
            ConfigError: when the field does not contain one
        """
        K = self.domain
        if p == 1:
            return K.one
        if p == 2:
            return -K.one
        if not self.has_root_of_unity(p):
            raise ConfigError(f"{self} contains no primitive {p}-th root of unity")
        return self._zeta() ** (self.order // p)

    def _zeta(self) -> Scalar:
        K = self.domain
        match self.kind:
            case FieldKind.PRIME:
                return K(self.primitive_root_value())
            case FieldKind.CYCLOTOMIC:
                if self.order <= 2:
                    return K.one if self.order == 1 else -K.one
                return K([K.dom.one, K.dom.zero])
            case _:
                if self.order == 2:
                    return -K.one
                return K.one

    def scalar(self, value: int | Fraction) -> Scalar:
        K = self.domain
        value = Fraction(value)
        if self.kind is FieldKind.PRIME:
            if value.denominator % self.modulus == 0:
                raise ConfigError(f"{value} has no image in F_{self.modulus}")
            return K(value.numerator) / K(value.denominator)
        return K.convert_from(QQ(value.numerator, value.denominator), QQ)

    def parse_scalar(self, text: str) -> Scalar:
        """
        Parse a scalar literal.

        Rationals are accepted everywhere; the symbol ``z`` stands for the
        designated root of unity (``i`` as well when N = 4).

        Raises:
            ConfigError: on malformed input or a literal the field cannot hold
        """
        local_dict = {"z": ROOT_SYMBOL}
        if self.order == 4:
            local_dict["i"] = ROOT_SYMBOL
        try:
            expr = parse_expr(text, local_dict=local_dict, transformations=standard_transformations + (convert_xor,))
        except (SympifyError, SyntaxError, TokenError, TypeError, ValueError) as error:
            raise ConfigError(f'Cannot parse scalar "{text}"') from error
        if not expr.free_symbols <= {ROOT_SYMBOL}:
            raise ConfigError(f'Unknown symbols in scalar "{text}"')
        if ROOT_SYMBOL in expr.free_symbols and self.order is None:
            raise ConfigError(f'"{text}" uses z but {self} has no designated root of unity')
        numerator, denominator = fraction(together(expr))
        try:
            numerator_value = self._evaluate(Poly(numerator, ROOT_SYMBOL, domain=QQ))
            denominator_value = self._evaluate(Poly(denominator, ROOT_SYMBOL, domain=QQ))
        except BasePolynomialError as error:
            raise ConfigError(f'Scalar "{text}" is not a rational function of z') from error
        if not denominator_value:
            raise ConfigError(f'Scalar "{text}" has a vanishing denominator in {self}')
        return self.domain.quo(numerator_value, denominator_value)

    def _evaluate(self, poly: Poly) -> Scalar:
        K = self.domain
        zeta = self._zeta() if self.order is not None else K.one
        value = K.zero
        for coefficient in poly.all_coeffs():
            value = value * zeta + self.scalar(Fraction(int(coefficient.p), int(coefficient.q)))
        return value

    def format(self, x: Scalar) -> str:
        K = self.domain
        if self.kind is FieldKind.PRIME:
            return str(int(K.to_sympy(x)) % self.modulus)
        if K == QQ:
            return str(QQ.to_sympy(x))
        coefficients = x.to_list()
        degree = len(coefficients) - 1
        terms = []
        for i, c in enumerate(coefficients):
            if not c:
                continue
            power = degree - i
            c = QQ.to_sympy(c)
            if power == 0:
                terms.append(str(c))
                continue
            monomial = "z" if power == 1 else f"z^{power}"
            if c == 1:
                terms.append(monomial)
            elif c == -1:
                terms.append(f"-{monomial}")
            else:
                terms.append(f"{c}*{monomial}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


def _is_primitive_root(root: int, order: int, modulus: int) -> bool:
    if pow(root, order, modulus) != 1:
        return False
    return all(pow(root, order // d, modulus) != 1 for d in range(2, order + 1) if order % d == 0 and isprime(d))


@functools.lru_cache(maxsize=None)
def _domain(f: Field):
    match f.kind:
        case FieldKind.RATIONAL:
            return QQ
        case FieldKind.PRIME:
            return GF(f.modulus, symmetric=False)
        case FieldKind.CYCLOTOMIC:
            if f.order <= 2:
                return QQ
            logger.debug(f"Building cyclotomic field of order {f.order}")
            return QQ.algebraic_field(exp(2 * pi * I / f.order))


def parse_field(text: str) -> Field:
    """
    Parse ``Q``, ``fq:<q>[,root=<r>][,order=<N>]`` or ``cyclotomic:<N>``.

    Raises:
        ConfigError: on malformed input, with the column of the offending part
    """
    text = text.strip()
    if text in ("Q", "QQ", "rational"):
        return Field.rational()
    kind, _, rest = text.partition(":")
    if kind == "cyclotomic":
        try:
            return Field.cyclotomic(int(rest))
        except ValueError as error:
            raise ConfigError(f'Cyclotomic order must be an integer, got "{rest}"', line=1, column=len(kind) + 2) from error
    if kind != "fq":
        raise ConfigError(f'Unknown field "{text}", expected Q, fq:<q> or cyclotomic:<N>', line=1, column=1)
    parts = rest.split(",")
    column = len(kind) + 2
    options: dict[str, int] = {}
    for i, part in enumerate(parts):
        key, sep, value = part.partition("=")
        if not sep:
            key, value = ("modulus", key) if i == 0 else (key, "")
        try:
            options[key.strip()] = int(value)
        except ValueError as error:
            raise ConfigError(f'Expected an integer in "{part}"', line=1, column=column) from error
        column += len(part) + 1
    unknown = set(options) - {"modulus", "root", "order"}
    if unknown:
        raise ConfigError(f"Unknown field options: {', '.join(sorted(unknown))}", line=1)
    if "modulus" not in options:
        raise ConfigError("fq needs a modulus", line=1)
    return Field.prime(options["modulus"], order=options.get("order"), root=options.get("root"))


def matrix(rows: Sequence[Sequence[Scalar]], f: Field) -> DomainMatrix:
    """Sparse matrix from rows of field elements."""
    n_cols = len(rows[0]) if rows else 0
    return from_entries({(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)}, (len(rows), n_cols), f)


def from_entries(entries: Mapping[tuple[int, int], Scalar], shape: tuple[int, int], f: Field) -> DomainMatrix:
    sdm: dict[int, dict[int, Scalar]] = defaultdict(dict)
    for (i, j), v in entries.items():
        if v:
            sdm[i][j] = v
    return DomainMatrix(dict(sdm), shape, f.domain)


def entries(m: DomainMatrix) -> dict[tuple[int, int], Scalar]:
    return {(i, j): v for i, row in m.to_sparse().rep.items() for j, v in row.items()}


def identity(n: int, f: Field) -> DomainMatrix:
    return from_entries({(i, i): f.domain.one for i in range(n)}, (n, n), f)


def zeros(n_rows: int, n_cols: int, f: Field) -> DomainMatrix:
    return DomainMatrix({}, (n_rows, n_cols), f.domain)


def block_matrix(
    blocks: Mapping[tuple[int, int], DomainMatrix], row_sizes: Sequence[int], col_sizes: Sequence[int], f: Field
) -> DomainMatrix:
    """Assemble a matrix from blocks keyed by (block row, block column); missing blocks are zero."""
    row_offsets = np.concatenate(([0], np.cumsum(row_sizes, dtype=int))).tolist()
    col_offsets = np.concatenate(([0], np.cumsum(col_sizes, dtype=int))).tolist()
    assembled = {}
    for (bi, bj), block in blocks.items():
        if block.shape != (row_sizes[bi], col_sizes[bj]):
            raise ComplexInvalid(f"Block ({bi}, {bj}) has shape {block.shape}, expected {(row_sizes[bi], col_sizes[bj])}")
        for (i, j), v in entries(block).items():
            assembled[(row_offsets[bi] + i, col_offsets[bj] + j)] = v
    return from_entries(assembled, (row_offsets[-1], col_offsets[-1]), f)


def block_diagonal(blocks: Sequence[DomainMatrix], f: Field) -> DomainMatrix:
    return block_matrix(
        {(i, i): b for i, b in enumerate(blocks)}, [b.shape[0] for b in blocks], [b.shape[1] for b in blocks], f
    )


def vstack(matrices: Sequence[DomainMatrix], n_cols: int, f: Field) -> DomainMatrix:
    return block_matrix({(i, 0): m for i, m in enumerate(matrices)}, [m.shape[0] for m in matrices], [n_cols], f)


def inverse(m: DomainMatrix) -> DomainMatrix:
    return m.to_dense().inv().to_sparse()


def is_zero(m: DomainMatrix) -> bool:
    return not entries(m)


def equal(a: DomainMatrix, b: DomainMatrix) -> bool:
    return a.shape == b.shape and entries(a) == entries(b)


def rank(m: DomainMatrix) -> int:
    n_rows, n_cols = m.shape
    if n_rows == 0 or n_cols == 0 or is_zero(m):
        return 0
    if max(n_rows, n_cols) < DENSE_THRESHOLD:
        m = m.to_dense()
    return m.to_field().rank()


def kernel_basis(m: DomainMatrix, f: Field) -> DomainMatrix:
    """Columns spanning the right kernel of ``m``."""
    n_cols = m.shape[1]
    r = rank(m)
    if r == 0:
        return identity(n_cols, f)
    if r == n_cols:
        return zeros(n_cols, 0, f)
    return m.to_sparse().to_field().nullspace().transpose().to_sparse()


def dense_rank(rows: Sequence[Sequence[Scalar]], f: Field) -> int:
    """Textbook Gaussian elimination on a list of rows, kept independent of ``rank`` for cross-checks."""
    grid = [list(row) for row in rows]
    if not grid or not grid[0]:
        return 0
    n_rows, n_cols = len(grid), len(grid[0])
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if grid[i][c]), None)
        if pivot is None:
            continue
        grid[r], grid[pivot] = grid[pivot], grid[r]
        inv = f.domain.quo(f.domain.one, grid[r][c])
        grid[r] = [v * inv for v in grid[r]]
        for i in range(n_rows):
            if i != r and grid[i][c]:
                factor = grid[i][c]
                grid[i] = [a - factor * b for a, b in zip(grid[i], grid[r])]
        r += 1
        if r == n_rows:
            break
    return r


def snf_oracle(rows: Sequence[Sequence[int]]) -> list[int]:
    """Smith normal form diagonal of an integer matrix, zeros last."""
    if not rows or not rows[0]:
        return []
    if not any(any(row) for row in rows):
        return [0] * min(len(rows), len(rows[0]))
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    return [abs(int(snf[i, i])) for i in range(min(snf.shape))]


@dataclass(frozen=True)
class ChainComplex:
    """
    A bounded chain complex of finite dimensional vector spaces.

    ``differentials[n - 1]`` is d_n : C_n -> C_{n-1}, a ``dims[n-1] x dims[n]``
    matrix. ``weights``, when given, assigns an internal weight to every basis
    vector of every C_n and the differentials must preserve it.
    """

    field: Field
    dims: tuple[int, ...]
    differentials: tuple[DomainMatrix, ...]
    weights: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise ComplexInvalid(f"Negative chain dimension in {self.dims}")
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ComplexInvalid(f"{len(self.dims)} chain groups need {len(self.dims) - 1} differentials")
        for n, d in enumerate(self.differentials, start=1):
            if d.shape != (self.dims[n - 1], self.dims[n]):
                raise ComplexInvalid(f"d_{n} has shape {d.shape}, expected {(self.dims[n - 1], self.dims[n])}")
        if self.weights is not None:
            if [len(w) for w in self.weights] != list(self.dims):
                raise ComplexInvalid("Weight vectors do not match the chain dimensions")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def d(self, n: int) -> DomainMatrix:
        if 1 <= n <= self.top:
            return self.differentials[n - 1]
        rows = self.dims[n - 1] if 1 <= n <= self.top + 1 else 0
        cols = self.dims[n] if 0 <= n <= self.top else 0
        return zeros(rows, cols, self.field)

    def validate(self) -> None:
        for n in range(2, self.top + 1):
            if not is_zero(self.differentials[n - 2] * self.differentials[n - 1]):
                raise ComplexInvalid(f"d_{n - 1} d_{n} is not zero")
        if self.weights is not None:
            for n, d in enumerate(self.differentials, start=1):
                for i, j in entries(d):
                    if self.weights[n - 1][i] != self.weights[n][j]:
                        raise ComplexInvalid(f"d_{n} does not preserve the weight grading at entry ({i}, {j})")


@dataclass(frozen=True)
class HomologyReport:
    betti: tuple[int, ...]
    euler: int
    field: Field
    graded: dict[int, tuple[int, ...]] | None = None
    reliable_through: int | None = None
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = {
            "betti": list(self.betti),
            "euler": self.euler,
            "field": str(self.field),
            "evidence": self.field.evidence,
        }
        if self.graded is not None:
            d["graded"] = {str(w): list(b) for w, b in sorted(self.graded.items())}
        if self.reliable_through is not None:
            d["reliable_through"] = self.reliable_through
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def homology(complex_: ChainComplex) -> HomologyReport:
    """
    Betti numbers b_n = dim C_n - rank d_n - rank d_{n+1}.

    Raises:
        ComplexInvalid: when d∘d is not zero or a differential breaks the weight grading
    """
    complex_.validate()
    ranks = [0, *(rank(d) for d in complex_.differentials), 0]
    betti = tuple(dim - ranks[n] - ranks[n + 1] for n, dim in enumerate(complex_.dims))
    euler = sum((-1) ** n * dim for n, dim in enumerate(complex_.dims))
    if euler != sum((-1) ** n * b for n, b in enumerate(betti)):
        raise ComplexInvalid("Euler characteristic of chains and homology disagree")
    graded = _graded_homology(complex_) if complex_.weights is not None else None
    return HomologyReport(betti=betti, euler=euler, field=complex_.field, graded=graded)


def _graded_homology(complex_: ChainComplex) -> dict[int, tuple[int, ...]]:
    graded = {}
    for w in sorted({w for ws in complex_.weights for w in ws}):
        indices = [[i for i, v in enumerate(ws) if v == w] for ws in complex_.weights]
        ranks = [0]
        for n, d in enumerate(complex_.differentials, start=1):
            rows, cols = indices[n - 1], indices[n]
            ranks.append(rank(d.extract(rows, cols)) if rows and cols else 0)
        ranks.append(0)
        graded[w] = tuple(len(indices[n]) - ranks[n] - ranks[n + 1] for n in range(len(indices)))
    return graded


def random_unitriangular_change(n: int, f: Field, rng: np.random.Generator) -> DomainMatrix:
    """A random invertible L·U with unit diagonals and small integer entries."""
    lower = {(i, i): f.domain.one for i in range(n)}
    upper = dict(lower)
    for i in range(n):
        for j in range(i):
            lower[(i, j)] = f.scalar(int(rng.integers(-2, 3)))
            upper[(j, i)] = f.scalar(int(rng.integers(-2, 3)))
    return from_entries(lower, (n, n), f) * from_entries(upper, (n, n), f)


def randomize_basis(complex_: ChainComplex, seed: int) -> ChainComplex:
    """The same complex written in a random basis of every chain group; homology is unchanged."""
    rng = np.random.default_rng(seed)
    changes = [random_unitriangular_change(n, complex_.field, rng) for n in complex_.dims]
    differentials = tuple(
        changes[n - 1] * d * inverse(changes[n]) if d.shape[0] and d.shape[1] else d
        for n, d in enumerate(complex_.differentials, start=1)
    )
    return ChainComplex(field=complex_.field, dims=complex_.dims, differentials=differentials)
