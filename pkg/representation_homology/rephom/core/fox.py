"""
Free group words, the integral group ring, Fox derivatives and the Artin
action of braids on free groups.

Products are read left to right: ``u * v`` is u followed by v, and the image of
a word under a representation is the product of the images of its letters in
the same order.
"""

import re
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from sympy.polys.matrices import DomainMatrix

from rephom.core import exact
from rephom.core.errors import ConfigError, MissingGenerator, RelatorViolated
from rephom.core.liegroups import GroupElement, adjoint, identity_element
from rephom.core.log import get_logger

logger = get_logger()

Letter = tuple[int, int]


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for generator, exponent in self.letters:
            if generator < 0 or exponent not in (1, -1):
                raise ConfigError(f"Invalid letter ({generator}, {exponent})")

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "Word":
        return cls(((index, 1 if exponent > 0 else -1),)).power(abs(exponent))

    def normalize(self) -> "Word":
        """Free reduction."""
        stack: list[Letter] = []
        for letter in self.letters:
            if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
                stack.pop()
            else:
                stack.append(letter)
        return Word(tuple(stack))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def power(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __len__(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.normalize().letters

    @property
    def generators_used(self) -> int:
        """One more than the largest generator index appearing, 0 for the empty word."""
        return max((g + 1 for g, _ in self.letters), default=0)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        use_letters = self.generators_used <= 26
        tokens = []
        for g, e in self.letters:
            if use_letters:
                letter = chr(ord("a") + g)
                tokens.append(letter if e > 0 else letter.upper())
            else:
                tokens.append(f"x{g + 1}" if e > 0 else f"X{g + 1}")
        return " ".join(tokens)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


def cyclically_reduce(w: Word) -> Word:
    letters = list(w.normalize().letters)
    while len(letters) > 1 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
        letters = letters[1:-1]
    return Word(tuple(letters))


def are_conjugate(u: Word, v: Word) -> bool:
    """Conjugacy in the free group: cyclic reductions agree up to rotation."""
    a, b = cyclically_reduce(u).letters, cyclically_reduce(v).letters
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    return any(doubled[i : i + len(b)] == b for i in range(len(a)))


@dataclass(frozen=True)
class GroupRingElement:
    """A finite Z-linear combination of reduced words, zero terms dropped."""

    terms: tuple[tuple[Word, int], ...] = ()

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[Word, int]]) -> "GroupRingElement":
        combined: dict[Word, int] = defaultdict(int)
        for word, coefficient in pairs:
            combined[word.normalize()] += coefficient
        kept = [(w, c) for w, c in combined.items() if c]
        kept.sort(key=lambda t: (len(t[0]), t[0].letters))
        return cls(tuple(kept))

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls(((Word(), 1),))

    @classmethod
    def of_word(cls, w: Word) -> "GroupRingElement":
        return cls.from_terms([(w, 1)])

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement.from_terms(self.terms + other.terms)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement.from_terms((u * v, a * b) for u, a in self.terms for v, b in other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def augmentation(self) -> int:
        return sum(c for _, c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*({w})" for w, c in self.terms)


def fox_derivative(w: Word, i: int) -> GroupRingElement:
    """
    The left Fox derivative d w / d x_i.

    For w = y_1 ... y_k, a letter y_j = x_i contributes +y_1...y_{j-1} and a
    letter y_j = x_i^-1 contributes -y_1...y_{j-1} x_i^-1.
    """
    prefix = Word()
    pairs = []
    for letter in w.normalize().letters:
        generator, exponent = letter
        if generator == i:
            if exponent > 0:
                pairs.append((prefix, 1))
            else:
                pairs.append((prefix * Word((letter,)), -1))
        prefix = prefix * Word((letter,))
    return GroupRingElement.from_terms(pairs)


def word_image(w: Word, images: Sequence[GroupElement]) -> GroupElement:
    if not images:
        raise MissingGenerator(f"No generator images to evaluate {w}")
    if w.generators_used > len(images):
        raise MissingGenerator(f"{w} uses generator {w.generators_used} but only {len(images)} images are given")
    result = identity_element(images[0].group, images[0].field)
    inverses: dict[int, GroupElement] = {}
    for g, e in w.letters:
        if e > 0:
            result = result * images[g]
        else:
            if g not in inverses:
                inverses[g] = images[g].inverse()
            result = result * inverses[g]
    return result


class AdjointTable:
    """Ad of each generator image and of its inverse, computed once."""

    def __init__(self, images: Sequence[GroupElement]):
        if not images:
            raise MissingGenerator("A representation needs at least one generator image")
        self.images = list(images)
        self.group = images[0].group
        self.field = images[0].field
        self._cache: dict[Letter, DomainMatrix] = {}

    def letter(self, letter: Letter) -> DomainMatrix:
        if letter not in self._cache:
            g, e = letter
            if g >= len(self.images):
                raise MissingGenerator(f"Generator {g + 1} has no image, only {len(self.images)} are given")
            image = self.images[g] if e > 0 else self.images[g].inverse()
            self._cache[letter] = adjoint(image)
        return self._cache[letter]

    def word(self, w: Word) -> DomainMatrix:
        result = exact.identity(self.group.dim, self.field)
        for letter in w.letters:
            result = result * self.letter(letter)
        return result


def evaluate(x: GroupRingElement, table: AdjointTable) -> DomainMatrix:
    """The matrix of Ad∘rho extended linearly to the group ring."""
    result = exact.zeros(table.group.dim, table.group.dim, table.field)
    for w, c in x.terms:
        result = result + table.word(w).scalarmul(table.field.scalar(c))
    return result


@dataclass(frozen=True)
class Presentation:
    n_generators: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        for index, r in enumerate(self.relators):
            if r.generators_used > self.n_generators:
                raise ConfigError(f"Relator {index} uses a generator beyond {self.n_generators}")

    def __str__(self) -> str:
        return f"gens={self.n_generators};rels={', '.join(str(r) for r in self.relators)}"


def first_violated_relator(presentation: Presentation, images: Sequence[GroupElement]) -> int | None:
    if len(images) != presentation.n_generators:
        raise MissingGenerator(f"Expected {presentation.n_generators} generator images, got {len(images)}")
    for index, r in enumerate(presentation.relators):
        if not word_image(r, images).is_identity():
            return index
    return None


def check_representation(presentation: Presentation, images: Sequence[GroupElement]) -> bool:
    """
    Whether every relator maps to the identity.

    Raises:
        MissingGenerator: when the number of images does not match the generators
    """
    return first_violated_relator(presentation, images) is None


def fox_jacobian(presentation: Presentation, images: Sequence[GroupElement]) -> DomainMatrix:
    """
    The (#relators · dim G) x (#generators · dim G) matrix whose (j, i) block is
    Ad∘rho(d r_j / d x_i).
    """
    index = first_violated_relator(presentation, images)
    if index is not None:
        raise RelatorViolated(index, str(presentation.relators[index]))
    table = AdjointTable(images)
    dim = table.group.dim
    blocks = {}
    for j, r in enumerate(presentation.relators):
        for i in range(presentation.n_generators):
            derivative = fox_derivative(r, i)
            if not derivative.is_zero():
                blocks[(j, i)] = evaluate(derivative, table)
    logger.debug(f"Fox Jacobian with {len(presentation.relators)} relators and {presentation.n_generators} generators")
    return exact.block_matrix(
        blocks, [dim] * len(presentation.relators), [dim] * presentation.n_generators, table.field
    )


@dataclass(frozen=True)
class BraidWord:
    """A braid on ``strands`` strands as letters (i, ±1) standing for sigma_i^{±1}, 1 <= i < strands."""

    strands: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ConfigError("A braid needs at least one strand")
        for i, e in self.letters:
            if not 1 <= i < self.strands or e not in (1, -1):
                raise ConfigError(f"sigma_{i}^{e} is not a generator of B_{self.strands}")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ConfigError("Braids on different numbers of strands")
        return BraidWord(self.strands, self.letters + other.letters)

    def power(self, k: int) -> "BraidWord":
        letters = self.letters if k >= 0 else tuple((i, -e) for i, e in reversed(self.letters))
        return BraidWord(self.strands, letters * abs(k))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"s{i}" if e > 0 else f"S{i}" for i, e in self.letters)


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Replace every generator x_i in ``w`` by ``images[i]``."""
    result = Word()
    for g, e in w.letters:
        result = result * (images[g] if e > 0 else images[g].inverse())
    return result.normalize()


def _artin_letter(strands: int, i: int, exponent: int) -> list[Word]:
    x = [Word.generator(k) for k in range(strands)]
    a, b = x[i - 1], x[i]
    if exponent > 0:
        x[i - 1], x[i] = (a * b * a.inverse()).normalize(), a
    else:
        x[i - 1], x[i] = b, (b.inverse() * a * b).normalize()
    return x


def artin_image(braid: BraidWord) -> tuple[Word, ...]:
    """
    Images beta(x_1), ..., beta(x_n) under the Artin action, reduced.

    sigma_i sends x_i to x_i x_{i+1} x_i^-1 and x_{i+1} to x_i; a braid word
    acts as the composite of its letters, leftmost outermost.
    """
    images = [Word.generator(k) for k in range(braid.strands)]
    for i, e in braid.letters:
        letter_images = _artin_letter(braid.strands, i, e)
        images = [substitute(letter_images_k, images) for letter_images_k in letter_images]
    return tuple(images)


def braid_permutation(braid: BraidWord) -> tuple[int, ...]:
    """The permutation pi with beta(x_i) conjugate to x_{pi(i)}."""
    perm = list(range(braid.strands))
    for i, _ in braid.letters:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def cycle_count(braid: BraidWord) -> int:
    """Number of cycles of the underlying permutation, the number of link components."""
    perm = braid_permutation(braid)
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
    return cycles


_WORD_TOKEN = re.compile(r"^(?:([xX])(\d+)|([a-zA-Z]))(?:\^(-?\d+))?$")
_BRAID_TOKEN = re.compile(r"^([sS])(\d+)(?:\^(-?\d+))?$")


def _tokens(text: str) -> Iterable[tuple[str, int]]:
    for match in re.finditer(r"[^\s*·]+", text):
        yield match.group(0), match.start() + 1


def parse_word(text: str, n_generators: int | None = None, line: int = 1) -> Word:
    """
    Parse a word such as ``a b A B``, ``a^3 b^-1`` or ``x1 x2 X1``.

    A lowercase letter is a generator, the uppercase letter its inverse.

    Raises:
        ConfigError: with line and column of the first bad token
    """
    letters: list[Letter] = []
    if text.strip() in ("", "1"):
        return Word()
    for token, column in _tokens(text):
        match = _WORD_TOKEN.match(token)
        if match is None:
            raise ConfigError(f'Cannot read "{token}" as a generator', line=line, column=column)
        if match.group(1):
            index = int(match.group(2)) - 1
            sign = 1 if match.group(1) == "x" else -1
            if index < 0:
                raise ConfigError("Generators are numbered from x1", line=line, column=column)
        else:
            letter = match.group(3)
            index = ord(letter.lower()) - ord("a")
            sign = 1 if letter.islower() else -1
        if n_generators is not None and index >= n_generators:
            raise ConfigError(
                f'"{token}" refers to generator {index + 1} but there are {n_generators}', line=line, column=column
            )
        exponent = int(match.group(4)) if match.group(4) else 1
        letters.extend(Word.generator(index, sign * exponent).letters)
    return Word(tuple(letters))


def parse_braid(text: str, strands: int, line: int = 1) -> BraidWord:
    """
    Parse a braid word such as ``s1 s2 S1`` or ``s1^3``; ``S<i>`` is the inverse of ``s<i>``.

    Raises:
        ConfigError: with line and column of the first bad token
    """
    letters: list[Letter] = []
    if text.strip() in ("", "1"):
        return BraidWord(strands)
    for token, column in _tokens(text):
        match = _BRAID_TOKEN.match(token)
        if match is None:
            raise ConfigError(f'Cannot read "{token}" as a braid generator', line=line, column=column)
        i = int(match.group(2))
        if not 1 <= i < strands:
            raise ConfigError(f"s{i} is not a generator of B_{strands}", line=line, column=column)
        sign = 1 if match.group(1) == "s" else -1
        exponent = sign * (int(match.group(3)) if match.group(3) else 1)
        letters.extend([(i, 1 if exponent > 0 else -1)] * abs(exponent))
    return BraidWord(strands, tuple(letters))
