import numpy as np
import pytest

from rephom.core import exact
from rephom.core.errors import ConfigError, MissingGenerator, RelatorViolated
from rephom.core.fox import (
    AdjointTable,
    BraidWord,
    GroupRingElement,
    Presentation,
    Word,
    are_conjugate,
    artin_image,
    braid_permutation,
    check_representation,
    commutator,
    cycle_count,
    evaluate,
    fox_derivative,
    fox_jacobian,
    parse_braid,
    parse_word,
    word_image,
)
from rephom.core.liegroups import adjoint
from tests.conftest import make_element


def _random_word(rng: np.random.Generator, n_generators: int, max_length: int) -> Word:
    length = int(rng.integers(0, max_length + 1))
    letters = tuple((int(rng.integers(0, n_generators)), int(rng.choice([-1, 1]))) for _ in range(length))
    return Word(letters)


@pytest.mark.parametrize("n_generators", [1, 2, 3, 4])
def test_fundamental_identity_on_random_words(n_generators):
    rng = np.random.default_rng(2024 + n_generators)
    x = [GroupRingElement.of_word(Word.generator(i)) for i in range(n_generators)]
    one = GroupRingElement.one()
    for _ in range(200):
        w = _random_word(rng, n_generators, 20)
        total = GroupRingElement()
        for i in range(n_generators):
            total = total + fox_derivative(w, i) * (x[i] - one)
        assert total == GroupRingElement.of_word(w) - one, str(w)


def test_fox_derivative_values():
    a, b = Word.generator(0), Word.generator(1)
    r = commutator(a, b)
    assert fox_derivative(r, 0) == GroupRingElement.one() - GroupRingElement.of_word(a * b * a.inverse())
    assert fox_derivative(r, 1) == GroupRingElement.of_word(a) - GroupRingElement.of_word(r)
    assert fox_derivative(Word.generator(0, 3), 0).augmentation() == 3
    assert fox_derivative(Word.generator(0, -2), 0).augmentation() == -2
    assert fox_derivative(a, 1).is_zero()


def test_word_reduction_and_conjugacy():
    a, b = Word.generator(0), Word.generator(1)
    assert (a * b * b.inverse() * a.inverse()).is_identity()
    assert are_conjugate(a * b, b * a)
    assert are_conjugate(b * a * b.inverse(), a)
    assert not are_conjugate(a * b, a * b.inverse())
    assert str(commutator(a, b)) == "a b A B"


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a b A B", ((0, 1), (1, 1), (0, -1), (1, -1))),
        ("a^3", ((0, 1), (0, 1), (0, 1))),
        ("x1 X2^2", ((0, 1), (1, -1), (1, -1))),
        ("1", ()),
    ],
)
def test_parse_word(text, expected):
    assert parse_word(text).letters == expected


def test_parse_word_reports_column():
    with pytest.raises(ConfigError) as error:
        parse_word("a b ?", n_generators=2)
    assert error.value.column == 5
    with pytest.raises(ConfigError) as error:
        parse_word("a c", n_generators=2)
    assert error.value.column == 3


def test_torus_jacobian_closed_form(rationals, gl2):
    x = make_element(gl2, [[2, 1], [1, 1]], rationals)
    y = x**2
    presentation = Presentation(2, (commutator(Word.generator(0), Word.generator(1)),))
    jacobian = fox_jacobian(presentation, [x, y])
    eye = exact.identity(4, rationals)
    expected = exact.block_matrix({(0, 0): eye - adjoint(y), (0, 1): -(eye - adjoint(x))}, [4], [4, 4], rationals)
    assert exact.equal(jacobian, expected)


def test_fox_jacobian_checks_relators(rationals, gl2):
    x = make_element(gl2, [[1, 1], [0, 1]], rationals)
    y = make_element(gl2, [[1, 0], [1, 1]], rationals)
    presentation = Presentation(2, (commutator(Word.generator(0), Word.generator(1)),))
    assert not check_representation(presentation, [x, y])
    assert check_representation(presentation, [x, x])
    with pytest.raises(RelatorViolated):
        fox_jacobian(presentation, [x, y])
    with pytest.raises(MissingGenerator):
        check_representation(presentation, [x])


def test_evaluate_is_linear(rationals, sl2):
    g = make_element(sl2, [[1, 1], [0, 1]], rationals)
    table = AdjointTable([g])
    a = Word.generator(0)
    element = GroupRingElement.from_terms([(a, 2), (Word(), -1)])
    expected = adjoint(g).scalarmul(rationals.scalar(2)) - exact.identity(3, rationals)
    assert exact.equal(evaluate(element, table), expected)


def test_word_image(rationals, sl2):
    g = make_element(sl2, [[1, 1], [0, 1]], rationals)
    h = make_element(sl2, [[1, 0], [1, 1]], rationals)
    assert word_image(parse_word("a b A"), [g, h]) == g * h * g.inverse()
    with pytest.raises(MissingGenerator):
        word_image(parse_word("a c"), [g, h])


def test_artin_action():
    x1, x2 = Word.generator(0), Word.generator(1)
    assert artin_image(BraidWord(2, ((1, 1),))) == ((x1 * x2 * x1.inverse()).normalize(), x1)
    assert artin_image(BraidWord(2, ((1, 1), (1, -1)))) == (x1, x2)


def test_artin_action_preserves_boundary_word():
    rng = np.random.default_rng(5)
    for _ in range(20):
        letters = tuple((int(rng.integers(1, 4)), int(rng.choice([-1, 1]))) for _ in range(6))
        images = artin_image(BraidWord(4, letters))
        product = Word()
        for w in images:
            product = product * w
        assert product.normalize() == parse_word("a b c d")


@pytest.mark.parametrize(
    "text, strands, components",
    [("s1", 2, 1), ("s1 s1", 2, 2), ("s1^3", 2, 1), ("s1 s2 s1 s2 s1 s2", 3, 3), ("s1 s2", 3, 1), ("", 3, 3)],
)
def test_cycle_count(text, strands, components):
    assert cycle_count(parse_braid(text, strands)) == components


def test_braid_permutation_matches_artin_image():
    braid = parse_braid("s1 s2 S1", 3)
    permutation = braid_permutation(braid)
    for i, w in enumerate(artin_image(braid)):
        assert are_conjugate(w, Word.generator(permutation[i]))


def test_parse_braid_rejects():
    with pytest.raises(ConfigError) as error:
        parse_braid("s1 s3", 3)
    assert error.value.column == 4
    with pytest.raises(ConfigError):
        parse_braid("t1", 2)
