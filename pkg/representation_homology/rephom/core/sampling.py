"""
Seeded samplers for representations of the modelled fundamental groups.

Sample ``index`` under ``seed`` is drawn from the child ``SeedSequence(seed,
spawn_key=(index,))``, so it does not depend on how many samples are drawn or on
how they are spread over workers. Matrix entries come from a small integer box.
"""

import itertools
from collections.abc import Sequence
from enum import StrEnum

import numpy as np

from rephom.core import exact
from rephom.core.errors import ConfigError, Unsupported
from rephom.core.exact import Field
from rephom.core.fox import BraidWord, Word, artin_image, braid_permutation, word_image
from rephom.core.liegroups import (
    AlgGroup,
    GroupElement,
    GroupKind,
    element,
    from_blocks,
    identity_element,
    joint_fixed_dim,
)
from rephom.core.log import get_logger
from rephom.core.spaces import (
    CyclicGroupSpace,
    FinitePresentation,
    LensSpace,
    LinkComplement,
    SpaceModel,
    Surface,
    TorusKnot,
    WedgeCircles,
    generator_count,
)

logger = get_logger()

ENTRY_BOX = 3
MAX_ATTEMPTS = 200


class SamplerName(StrEnum):
    AUTO = "auto"
    TRIVIAL = "trivial"
    FREE = "free"
    COMMUTING = "commuting"
    SURFACE = "surface"
    SMOOTH = "smooth"
    FIXED_POINT = "fixed-point"
    NONABELIAN = "nonabelian"
    ROOTS = "roots"
    TORUS_KNOT = "torus-knot"


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _box(rng: np.random.Generator) -> int:
    return int(rng.integers(-ENTRY_BOX, ENTRY_BOX + 1))


def _nonzero(rng: np.random.Generator, field: Field):
    while True:
        value = field.scalar(_box(rng))
        if value:
            return value


def random_element(group: AlgGroup, field: Field, rng: np.random.Generator) -> GroupElement:
    """
    A random element with small integer entries: rejection on the determinant
    for GL, a product of unitriangular factors for SL, a diagonal for tori.
    """
    K = field.domain
    blocks = []
    for factor in group.factors:
        n = factor.n
        match factor.kind:
            case GroupKind.GL:
                for _ in range(MAX_ATTEMPTS):
                    rows = [[field.scalar(_box(rng)) for _ in range(n)] for _ in range(n)]
                    if exact.matrix(rows, field).to_dense().det():
                        break
                else:
                    raise Unsupported(f"No invertible matrix found for {factor} over {field}")
            case GroupKind.SL:
                lower = [[K.one if i == j else (field.scalar(_box(rng)) if j < i else K.zero) for j in range(n)] for i in range(n)]
                upper = [[K.one if i == j else (field.scalar(_box(rng)) if j > i else K.zero) for j in range(n)] for i in range(n)]
                rows = (exact.matrix(lower, field) * exact.matrix(upper, field)).to_dense().to_list()
            case GroupKind.TORUS:
                rows = [[_nonzero(rng, field) if i == j else K.zero for j in range(n)] for i in range(n)]
        blocks.append(rows)
    return from_blocks(group, blocks, field)


def random_torus_element(group: AlgGroup, field: Field, rng: np.random.Generator) -> GroupElement:
    """A random element of the diagonal maximal torus."""
    K = field.domain
    blocks = []
    for factor in group.factors:
        n = factor.n
        diagonal = [_nonzero(rng, field) for _ in range(n)]
        if factor.kind is GroupKind.SL:
            product = K.one
            for value in diagonal[:-1]:
                product *= value
            diagonal[-1] = K.quo(K.one, product)
        blocks.append([[diagonal[i] if i == j else K.zero for j in range(n)] for i in range(n)])
    return from_blocks(group, blocks, field)


def conjugate(elements: Sequence[GroupElement], h: GroupElement) -> list[GroupElement]:
    h_inverse = h.inverse()
    return [h * g * h_inverse for g in elements]


def commuting_tuple(group: AlgGroup, field: Field, count: int, rng: np.random.Generator) -> list[GroupElement]:
    """Elements of one maximal torus conjugated by a common random element."""
    torus = [random_torus_element(group, field, rng) for _ in range(count)]
    return conjugate(torus, random_element(group, field, rng))


def _commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b * a.inverse() * b.inverse()


def _factor_groups(group: AlgGroup) -> list[AlgGroup]:
    return [AlgGroup((factor,)) for factor in group.factors]


def _assemble(group: AlgGroup, field: Field, per_factor: Sequence[Sequence[GroupElement]]) -> list[GroupElement]:
    """Block diagonal elements of ``group`` from one list of images per factor."""
    return [
        from_blocks(group, [images[k].matrix.to_dense().to_list() for images in per_factor], field)
        for k in range(len(per_factor[0]))
    ]


def _is_abelian(factor_group: AlgGroup) -> bool:
    (factor,) = factor_group.factors
    return factor.kind is GroupKind.TORUS or factor.n == 1


def _diagonal(values: Sequence, field: Field):
    return exact.from_entries({(i, i): v for i, v in enumerate(values)}, (len(values), len(values)), field)


def _eigenvector(m, value, field: Field) -> list | None:
    kernel = exact.kernel_basis(m - _diagonal([value] * m.shape[0], field), field)
    if kernel.shape[1] != 1:
        return None
    return [row[0] for row in kernel.to_dense().to_list()]


def solve_commutator(
    factor_group: AlgGroup, target: GroupElement, field: Field, rng: np.random.Generator
) -> tuple[GroupElement, GroupElement] | None:
    """
    A pair (a, b) of a 2x2 factor with a b a^-1 b^-1 = target, or None when this
    draw gives none.

    b = lam I + (mu - lam) u v^T has eigenvalues lam != mu; v is fixed by
    v^T u = 1 and tr(target b) = tr(b), so target b has the same characteristic
    polynomial as b and is conjugate to it. a is the conjugating matrix Q E P^-1
    for eigenvector matrices P of b and Q of target b, with E diagonal chosen to
    give a the determinant the factor needs.
    """
    (factor,) = factor_group.factors
    K = field.domain
    d = target.matrix
    lam = _nonzero(rng, field)
    mu = K.quo(K.one, lam) if factor.kind is GroupKind.SL else _nonzero(rng, field)
    if lam == mu:
        return None
    u = [field.scalar(_box(rng)) for _ in range(2)]
    du = [row[0] for row in (d * exact.matrix([[u[0]], [u[1]]], field)).to_dense().to_list()]
    system = exact.matrix([u, du], field)
    if not system.to_dense().det():
        return None
    d_rows = d.to_dense().to_list()
    s = K.quo(lam + mu - lam * (d_rows[0][0] + d_rows[1][1]), mu - lam)
    v = [row[0] for row in (exact.inverse(system) * exact.matrix([[K.one], [s]], field)).to_dense().to_list()]
    b_rows = [[(lam if i == j else K.zero) + (mu - lam) * u[i] * v[j] for j in range(2)] for i in range(2)]
    b = exact.matrix(b_rows, field)
    columns = [
        _eigenvector(b, lam, field),
        _eigenvector(b, mu, field),
        _eigenvector(d * b, lam, field),
        _eigenvector(d * b, mu, field),
    ]
    if any(c is None for c in columns):
        return None
    p_lam, p_mu, q_lam, q_mu = columns
    P = exact.matrix([[p_lam[0], p_mu[0]], [p_lam[1], p_mu[1]]], field)
    Q = exact.matrix([[q_lam[0], q_mu[0]], [q_lam[1], q_mu[1]]], field)
    e1 = _nonzero(rng, field)
    if factor.kind is GroupKind.SL:
        e2 = K.quo(P.to_dense().det(), e1 * Q.to_dense().det())
    else:
        e2 = _nonzero(rng, field)
    a_matrix = Q * _diagonal([e1, e2], field) * exact.inverse(P)
    pair = (element(factor_group, a_matrix.to_dense().to_list(), field), element(factor_group, b_rows, field))
    if _commutator(*pair) != target:
        return None
    return pair


def _mirrored_surface_tuple(factor_group: AlgGroup, field: Field, genus: int, rng: np.random.Generator) -> list[GroupElement]:
    """
    (a, b, b, a) for each two genus slots, whose commutators cancel, a commuting
    pair for an odd genus, all conjugated by one random element.
    """
    images: list[GroupElement] = []
    for _ in range(genus // 2):
        a, b = random_element(factor_group, field, rng), random_element(factor_group, field, rng)
        images.extend([a, b, b, a])
    if genus % 2:
        images.extend(commuting_tuple(factor_group, field, 2, rng))
    return conjugate(images, random_element(factor_group, field, rng))


def _surface_factor_tuple(factor_group: AlgGroup, field: Field, genus: int, rng: np.random.Generator) -> list[GroupElement]:
    (factor,) = factor_group.factors
    if _is_abelian(factor_group):
        return [random_element(factor_group, field, rng) for _ in range(2 * genus)]
    if factor.n != 2:
        return _mirrored_surface_tuple(factor_group, field, genus, rng)
    images = [random_element(factor_group, field, rng) for _ in range(2 * genus - 2)]
    product = identity_element(factor_group, field)
    for a, b in zip(images[::2], images[1::2]):
        product = product * _commutator(a, b)
    target = product.inverse()
    if target.is_identity():
        return images + commuting_tuple(factor_group, field, 2, rng)
    for _ in range(MAX_ATTEMPTS):
        pair = solve_commutator(factor_group, target, field, rng)
        if pair is not None:
            return images + list(pair)
    logger.debug(f"No last commutator pair found in {factor}, using mirrored pairs")
    return _mirrored_surface_tuple(factor_group, field, genus, rng)


def surface_tuple(group: AlgGroup, field: Field, genus: int, rng: np.random.Generator) -> list[GroupElement]:
    """
    A solution of [a_1, b_1] ... [a_g, b_g] = 1, factor by factor.

    In a 2x2 factor a_1 .. b_{g-1} are free and (a_g, b_g) is solved against
    the product of their commutators. Abelian factors take any tuple. Larger
    factors, and 2x2 factors where solving fails, use mirrored pairs.
    """
    if genus == 1:
        return commuting_tuple(group, field, 2, rng)
    per_factor = [_surface_factor_tuple(factor_group, field, genus, rng) for factor_group in _factor_groups(group)]
    return _assemble(group, field, per_factor)


def smooth_surface_tuple(group: AlgGroup, field: Field, genus: int, rng: np.random.Generator) -> list[GroupElement]:
    """A surface representation whose joint fixed space in the Lie algebra is only the centre."""
    if genus == 1 and group.dim != group.center_dim:
        raise Unsupported("Representations of the torus are reducible, the smooth sampler needs genus >= 2")
    for _ in range(MAX_ATTEMPTS):
        images = surface_tuple(group, field, genus, rng)
        if joint_fixed_dim(images, group, field) == group.center_dim:
            return images
    raise Unsupported(f"No representation with trivial centraliser found for {group} in {MAX_ATTEMPTS} attempts")


def link_fixed_point(
    group: AlgGroup, field: Field, permutation: Sequence[int], rng: np.random.Generator
) -> list[GroupElement]:
    """
    Images constant along every cycle of the braid permutation and pairwise
    commuting, so every x_i and beta(x_i) have the same image.
    """
    cycle_of = [-1] * len(permutation)
    cycles = 0
    for start in range(len(permutation)):
        if cycle_of[start] >= 0:
            continue
        k = start
        while cycle_of[k] < 0:
            cycle_of[k] = cycles
            k = permutation[k]
        cycles += 1
    values = commuting_tuple(group, field, cycles, rng)
    return [values[c] for c in cycle_of]


def is_full_twist_power(braid: BraidWord) -> bool:
    """Whether beta acts on the free group as conjugation by a power of x_1 ... x_n."""
    n = braid.strands
    exponent_sum = sum(e for _, e in braid.letters)
    if n < 2 or exponent_sum % (n * (n - 1)):
        return False
    k = exponent_sum // (n * (n - 1))
    product = Word(tuple((i, 1) for i in range(n)))
    images = artin_image(braid)
    for power in (product.power(k), product.power(-k)):
        if all(images[i] == (power * Word.generator(i) * power.inverse()).normalize() for i in range(n)):
            return True
    return False


def is_trefoil_braid(braid: BraidWord) -> bool:
    """Whether beta acts like sigma_1^3 or its inverse in B_2."""
    if braid.strands != 2:
        return False
    images = artin_image(braid)
    return any(images == artin_image(BraidWord(2, ((1, e),) * 3)) for e in (1, -1))


def _central_element(factor_group: AlgGroup, field: Field, rng: np.random.Generator) -> GroupElement:
    (factor,) = factor_group.factors
    if factor.kind is GroupKind.SL:
        return identity_element(factor_group, field)
    return from_blocks(factor_group, [_diagonal([_nonzero(rng, field)] * factor.n, field).to_dense().to_list()], field)


def _braid_relation_pair(factor_group: AlgGroup, field: Field, rng: np.random.Generator) -> list[GroupElement]:
    """
    Non-commuting A, B with A B A = B A B: the unipotent pair [[1, t], [0, 1]]
    and [[1, 0], [-1/t, 1]] in the top left corner, scaled in GL, then conjugated.
    """
    (factor,) = factor_group.factors
    K = field.domain
    n = factor.n
    t = _nonzero(rng, field)
    scale = K.one if factor.kind is GroupKind.SL else _nonzero(rng, field)
    corners = ({(0, 1): t}, {(1, 0): -K.quo(K.one, t)})
    pair = []
    for corner in corners:
        rows = [[scale if i == j else K.zero for j in range(n)] for i in range(n)]
        for (i, j), v in corner.items():
            rows[i][j] = scale * v
        pair.append(element(factor_group, rows, field))
    return conjugate(pair, random_element(factor_group, field, rng))


def link_nonabelian_point(
    group: AlgGroup, field: Field, braid: BraidWord, rng: np.random.Generator
) -> list[GroupElement]:
    """
    A representation fixed by beta that is not abelian on the non-abelian factors.

    For powers of the full twist, x_1 .. x_{n-1} are free and x_n makes the
    product x_1 ... x_n central. For the trefoil braid the two images satisfy the
    braid relation without commuting. Abelian factors use cycle-constant images.

    Raises:
        Unsupported: for other braids
    """
    if is_full_twist_power(braid):
        construction = "full twist"
    elif is_trefoil_braid(braid):
        construction = "trefoil"
    else:
        raise Unsupported(f"No non-abelian fixed points are known for the braid {braid}")
    permutation = braid_permutation(braid)
    per_factor = []
    for factor_group in _factor_groups(group):
        if _is_abelian(factor_group):
            per_factor.append(link_fixed_point(factor_group, field, permutation, rng))
        elif construction == "trefoil":
            per_factor.append(_braid_relation_pair(factor_group, field, rng))
        else:
            images = [random_element(factor_group, field, rng) for _ in range(braid.strands - 1)]
            product = identity_element(factor_group, field)
            for g in images:
                product = product * g
            per_factor.append([*images, product.inverse() * _central_element(factor_group, field, rng)])
    images = _assemble(group, field, per_factor)
    for i, w in enumerate(artin_image(braid)):
        if word_image(w, images) != images[i]:
            raise Unsupported(f"The {construction} construction is not fixed by {braid}")
    return images


def torus_knot_pair(group: AlgGroup, field: Field, p: int, q: int, rng: np.random.Generator) -> list[GroupElement]:
    """(t^q, t^p) for a random torus element t conjugated by a random element, so x^p = y^q."""
    t = random_torus_element(group, field, rng)
    return conjugate([t**q, t**p], random_element(group, field, rng))


def root_exponent_tuples(group: AlgGroup, p: int) -> list[tuple[tuple[int, ...], ...]]:
    """
    Exponents e of the diagonal matrices diag(zeta_p^e_1, ...) per factor, one
    per conjugacy class: multisets for GL and SL (SL also needs sum e = 0 mod p),
    all tuples for tori.
    """
    per_factor = []
    for factor in group.factors:
        match factor.kind:
            case GroupKind.GL:
                choices = list(itertools.combinations_with_replacement(range(p), factor.n))
            case GroupKind.SL:
                choices = [e for e in itertools.combinations_with_replacement(range(p), factor.n) if sum(e) % p == 0]
            case GroupKind.TORUS:
                choices = list(itertools.product(range(p), repeat=factor.n))
        per_factor.append(choices)
    return list(itertools.product(*per_factor))


def root_element(group: AlgGroup, field: Field, p: int, exponents: tuple[tuple[int, ...], ...]) -> GroupElement:
    K = field.domain
    zeta = field.root_of_unity(p)
    blocks = [
        [[zeta**e[i] if i == j else K.zero for j in range(len(e))] for i in range(len(e))] for e in exponents
    ]
    return from_blocks(group, blocks, field)


def resolve_sampler(space: SpaceModel, sampler: SamplerName) -> SamplerName:
    if sampler is not SamplerName.AUTO:
        return sampler
    match space:
        case Surface(genus=1):
            return SamplerName.COMMUTING
        case Surface():
            return SamplerName.SURFACE
        case LinkComplement():
            return SamplerName.FIXED_POINT
        case TorusKnot():
            return SamplerName.TORUS_KNOT
        case LensSpace() | CyclicGroupSpace():
            return SamplerName.ROOTS
        case WedgeCircles():
            return SamplerName.FREE
        case FinitePresentation():
            return SamplerName.COMMUTING
    raise Unsupported(f"No sampler for {space!r}")


def sample_count(space: SpaceModel, group: AlgGroup, sampler: SamplerName, requested: int) -> int:
    """The root sampler enumerates every class; the other samplers draw ``requested`` points."""
    if resolve_sampler(space, sampler) is SamplerName.ROOTS:
        if not isinstance(space, LensSpace | CyclicGroupSpace):
            raise Unsupported(f"Sampler roots does not apply to {type(space).__name__}")
        return len(root_exponent_tuples(group, space.p))
    return requested


def sample_assignment(
    space: SpaceModel, group: AlgGroup, field: Field, sampler: SamplerName, seed: int, index: int
) -> list[GroupElement]:
    """
    Generator images of sample ``index``.

    Raises:
        Unsupported: when the sampler does not apply to the space
        ConfigError: when the field lacks the roots of unity the sampler needs
    """
    sampler = resolve_sampler(space, sampler)
    n = generator_count(space)
    rng = sample_rng(seed, index)
    match sampler, space:
        case SamplerName.TRIVIAL, _:
            return [identity_element(group, field)] * n
        case SamplerName.FREE, _:
            return [random_element(group, field, rng) for _ in range(n)]
        case SamplerName.COMMUTING, _:
            return commuting_tuple(group, field, n, rng)
        case SamplerName.SURFACE, Surface(genus=g):
            return surface_tuple(group, field, g, rng)
        case SamplerName.SMOOTH, Surface(genus=g):
            return smooth_surface_tuple(group, field, g, rng)
        case SamplerName.FIXED_POINT, LinkComplement(braid=braid):
            return link_fixed_point(group, field, braid_permutation(braid), rng)
        case SamplerName.NONABELIAN, LinkComplement(braid=braid):
            return link_nonabelian_point(group, field, braid, rng)
        case SamplerName.TORUS_KNOT, TorusKnot(p=p, q=q):
            return torus_knot_pair(group, field, p, q, rng)
        case SamplerName.ROOTS, LensSpace(p=p) | CyclicGroupSpace(p=p):
            if not field.has_root_of_unity(p):
                raise ConfigError(f"The roots sampler needs a primitive {p}-th root of unity, {field} has none")
            classes = root_exponent_tuples(group, p)
            return [root_element(group, field, p, classes[index % len(classes)])]
    raise Unsupported(f"Sampler {sampler} does not apply to {type(space).__name__}")
