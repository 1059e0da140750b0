"""
Space models, their fundamental group presentations and the templates their
cotangent complexes are built from.
"""

import math
import re
import typing
from dataclasses import dataclass

from rephom.core.errors import ConfigError, Unsupported
from rephom.core.fox import (
    BraidWord,
    Presentation,
    Word,
    artin_image,
    commutator,
    parse_braid,
    parse_word,
)
from rephom.core.log import get_logger

logger = get_logger()


@dataclass(frozen=True)
class Surface:
    genus: int
    orientable: bool = True

    def __post_init__(self):
        if self.genus < 1:
            raise ConfigError(f"Surface genus must be at least 1, got {self.genus}")
        if not self.orientable:
            raise Unsupported("Non-orientable surfaces are not modelled")


@dataclass(frozen=True)
class LinkComplement:
    braid: BraidWord

    def __post_init__(self):
        if self.braid.strands < 2:
            raise ConfigError("A link braid needs at least 2 strands")


@dataclass(frozen=True)
class LensSpace:
    p: int
    q: tuple[int, ...]

    def __post_init__(self):
        if self.p < 2:
            raise ConfigError(f"Lens space order must exceed 1, got {self.p}")
        if len(self.q) < 2:
            raise ConfigError("A lens space needs at least two rotation parameters")
        for q in self.q:
            if math.gcd(q, self.p) != 1:
                raise ConfigError(f"Lens parameter {q} is not coprime to {self.p}")

    @property
    def m(self) -> int:
        return len(self.q)


@dataclass(frozen=True)
class WedgeCircles:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"A wedge needs at least one circle, got {self.n}")


@dataclass(frozen=True)
class CyclicGroupSpace:
    p: int
    cutoff: int = 6

    def __post_init__(self):
        if self.p < 2:
            raise ConfigError(f"Cyclic group order must exceed 1, got {self.p}")
        if self.cutoff < 0:
            raise ConfigError("Cutoff must be non-negative")


@dataclass(frozen=True)
class FinitePresentation:
    presentation: Presentation
    euler: int | None = None


@dataclass(frozen=True)
class ComplexProjective:
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ConfigError(f"CP^r needs r >= 1, got {self.r}")


@dataclass(frozen=True)
class TorusKnot:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2 or self.q < 2 or math.gcd(self.p, self.q) != 1:
            raise ConfigError(f"A (p, q) torus knot needs coprime p, q >= 2, got ({self.p}, {self.q})")


SpaceModel: typing.TypeAlias = (
    Surface
    | LinkComplement
    | LensSpace
    | WedgeCircles
    | CyclicGroupSpace
    | FinitePresentation
    | ComplexProjective
    | TorusKnot
)


@dataclass(frozen=True)
class ConeTemplate:
    """Relator blocks in degree 1, generator blocks in degree 0."""

    presentation: Presentation


@dataclass(frozen=True)
class LinkConeTemplate:
    braid: BraidWord

    @property
    def n(self) -> int:
        return self.braid.strands


@dataclass(frozen=True)
class LensTemplate:
    p: int
    q: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.q)

    @property
    def inverse_exponents(self) -> tuple[int, ...]:
        """l_k in [1, p) with q_k l_k = 1 mod p."""
        return tuple(pow(q, -1, self.p) for q in self.q)


@dataclass(frozen=True)
class PeriodicTemplate:
    p: int
    cutoff: int


CotangentTemplate: typing.TypeAlias = ConeTemplate | LinkConeTemplate | LensTemplate | PeriodicTemplate


def surface_relator(genus: int) -> Word:
    """[a_1, b_1] ... [a_g, b_g] with a_i = x_{2i-1}, b_i = x_{2i}."""
    relator = Word()
    for i in range(genus):
        relator = relator * commutator(Word.generator(2 * i), Word.generator(2 * i + 1))
    return relator


def link_presentation(braid: BraidWord) -> Presentation:
    images = artin_image(braid)
    relators = tuple((Word.generator(i) * images[i].inverse()).normalize() for i in range(braid.strands))
    return Presentation(braid.strands, relators)


def torus_knot_presentation(p: int, q: int) -> Presentation:
    return Presentation(2, ((Word.generator(0, p) * Word.generator(1, -q)),))


def torus_knot_braid(p: int, q: int) -> BraidWord:
    """(sigma_1 ... sigma_{p-1})^q in B_p, whose closure is the (p, q) torus knot."""
    return BraidWord(p, tuple((i, 1) for i in range(1, p))).power(q)


def cyclic_presentation(p: int) -> Presentation:
    return Presentation(1, (Word.generator(0, p),))


def presentation_of(space: SpaceModel, allow_non_aspherical: bool = False) -> Presentation:
    """
    The fundamental group presentation of a space.

    Lens spaces and B Z_p only give <gamma | gamma^p> when ``allow_non_aspherical``
    is set: the presentation complex of Z_p is not a model of the space, so its
    cone must not be used as the cotangent complex.

    Raises:
        Unsupported: for CP^r, and for lens spaces or B Z_p unless allowed
    """
    match space:
        case Surface(genus=g):
            return Presentation(2 * g, (surface_relator(g),))
        case LinkComplement(braid=braid):
            return link_presentation(braid)
        case WedgeCircles(n=n):
            return Presentation(n, ())
        case FinitePresentation(presentation=presentation):
            return presentation
        case TorusKnot(p=p, q=q):
            return torus_knot_presentation(p, q)
        case LensSpace(p=p) | CyclicGroupSpace(p=p):
            if allow_non_aspherical:
                return cyclic_presentation(p)
            raise Unsupported(f"{format_space(space)} has fundamental group Z_{p} but is not modelled by its presentation")
        case ComplexProjective():
            raise Unsupported("CP^r is simply connected and served by closed forms only")
    raise Unsupported(f"No presentation for {space!r}")


def build_template(space: SpaceModel) -> CotangentTemplate:
    """
    Raises:
        Unsupported: for CP^r
    """
    match space:
        case LinkComplement(braid=braid):
            return LinkConeTemplate(braid)
        case LensSpace(p=p, q=q):
            return LensTemplate(p, q)
        case CyclicGroupSpace(p=p, cutoff=cutoff):
            return PeriodicTemplate(p, cutoff)
        case ComplexProjective():
            raise Unsupported("CP^r is served by the closed forms of the catalog, not by a cotangent template")
        case _:
            return ConeTemplate(presentation_of(space))


def template_dims(template: CotangentTemplate, dim: int) -> tuple[int, ...]:
    """Chain dimensions of a template instantiated for a group of dimension ``dim``."""
    match template:
        case ConeTemplate(presentation=presentation):
            if not presentation.relators:
                return (presentation.n_generators * dim,)
            return (presentation.n_generators * dim, len(presentation.relators) * dim)
        case LinkConeTemplate():
            return (template.n * dim, template.n * dim)
        case LensTemplate():
            return (dim,) * (2 * template.m - 1)
        case PeriodicTemplate(cutoff=cutoff):
            return (dim,) * (cutoff + 2)


def generator_count(space: SpaceModel) -> int:
    """Number of generator images a representation of the space needs."""
    match space:
        case LensSpace() | CyclicGroupSpace():
            return 1
        case LinkComplement(braid=braid):
            return braid.strands
        case ComplexProjective():
            return 0
        case _:
            return presentation_of(space).n_generators


def euler_top(space: SpaceModel) -> int:
    """
    Raises:
        Unsupported: for B Z_p, which has no finite model
    """
    match space:
        case Surface(genus=g):
            return 2 - 2 * g
        case LinkComplement() | LensSpace() | TorusKnot():
            return 0
        case WedgeCircles(n=n):
            return 1 - n
        case FinitePresentation(presentation=presentation, euler=declared):
            if declared is not None:
                return declared
            return 1 - presentation.n_generators + len(presentation.relators)
        case ComplexProjective(r=r):
            return r + 1
        case CyclicGroupSpace():
            raise Unsupported("B Z_p has no finite cell model, its Euler characteristic is undefined")
    raise Unsupported(f"No Euler characteristic for {space!r}")


def format_space(space: SpaceModel) -> str:
    """Inverse of ``parse_space``."""
    match space:
        case Surface(genus=g):
            return f"surface:g={g}"
        case LinkComplement(braid=braid):
            return f"link:braid={braid},strands={braid.strands}"
        case LensSpace(p=p, q=q):
            return f"lens:p={p},q={' '.join(str(v) for v in q)}"
        case WedgeCircles(n=n):
            return f"wedge:n={n}"
        case CyclicGroupSpace(p=p, cutoff=cutoff):
            return f"bz:p={p},cutoff={cutoff}"
        case FinitePresentation(presentation=presentation, euler=declared):
            text = f"pres:{presentation}"
            return text if declared is None else f"{text};chi={declared}"
        case ComplexProjective(r=r):
            return f"cp:r={r}"
        case TorusKnot(p=p, q=q):
            return f"torusknot:p={p},q={q}"
    return repr(space)


def _options(body: str, separator: str, offset: int) -> dict[str, tuple[str, int]]:
    """Split ``key=value`` pairs, remembering the column at which each value starts."""
    options = {}
    column = offset
    for part in body.split(separator):
        key, sep, value = part.partition("=")
        if not sep:
            raise ConfigError(f'Expected key=value, got "{part.strip()}"', line=1, column=column)
        leading = len(value) - len(value.lstrip())
        options[key.strip()] = (value.strip(), column + len(key) + 1 + leading)
        column += len(part) + 1
    return options


def _integer(options: dict[str, tuple[str, int]], key: str, default: int | None = None) -> int:
    if key not in options:
        if default is None:
            raise ConfigError(f'Missing option "{key}"', line=1)
        return default
    value, column = options[key]
    try:
        return int(value)
    except ValueError as error:
        raise ConfigError(f'Option "{key}" must be an integer, got "{value}"', line=1, column=column) from error


def _shifted(error: ConfigError, column: int) -> ConfigError:
    return ConfigError(error.message, line=1, column=(error.column or 1) + column - 1)


_KIND_RE = re.compile(r"^\s*([a-z]+)\s*:")


def parse_space(text: str) -> SpaceModel:
    """
    Parse a space such as ``surface:g=2``, ``link:braid=s1 s1 s1,strands=2``,
    ``lens:p=5,q=1 2``, ``wedge:n=3``, ``bz:p=7``, ``torusknot:p=2,q=3``,
    ``cp:r=2`` or ``pres:gens=3;rels=a b A B, a c A C, c b C B A[;chi=0]``.

    Raises:
        ConfigError: with line and column of the offending part
    """
    match = _KIND_RE.match(text)
    if match is None:
        raise ConfigError(f'Expected "<kind>:<options>", got "{text}"', line=1, column=1)
    kind = match.group(1)
    offset = match.end() + 1
    body = text[match.end() :]
    if kind == "pres":
        options = _options(body, ";", offset)
        n = _integer(options, "gens")
        relator_text, column = options.get("rels", ("", offset))
        relators = []
        position = column
        for chunk in relator_text.split(",") if relator_text else []:
            try:
                relators.append(parse_word(chunk, n))
            except ConfigError as error:
                raise _shifted(error, position) from error
            position += len(chunk) + 1
        declared = _integer(options, "chi") if "chi" in options else None
        return FinitePresentation(Presentation(n, tuple(relators)), declared)
    options = _options(body, ",", offset)
    match kind:
        case "surface":
            return Surface(_integer(options, "g"))
        case "link":
            strands = _integer(options, "strands")
            braid_text, column = options.get("braid", ("", offset))
            try:
                braid = parse_braid(braid_text, strands)
            except ConfigError as error:
                raise _shifted(error, column) from error
            return LinkComplement(braid)
        case "lens":
            q_text, column = options.get("q", ("", offset))
            try:
                q = tuple(int(v) for v in q_text.split())
            except ValueError as error:
                raise ConfigError(f'Lens parameters must be integers, got "{q_text}"', line=1, column=column) from error
            return LensSpace(_integer(options, "p"), q)
        case "wedge":
            return WedgeCircles(_integer(options, "n"))
        case "bz":
            return CyclicGroupSpace(_integer(options, "p"), _integer(options, "cutoff", 6))
        case "torusknot":
            return TorusKnot(_integer(options, "p"), _integer(options, "q"))
        case "cp":
            return ComplexProjective(_integer(options, "r"))
    raise ConfigError(
        f'Unknown space kind "{kind}", expected surface, link, lens, wedge, bz, pres, torusknot or cp', line=1, column=1
    )
