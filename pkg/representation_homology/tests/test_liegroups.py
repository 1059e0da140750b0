import pytest

from rephom.core import exact
from rephom.core.errors import ConfigError, NotInvertible
from rephom.core.exact import Field
from rephom.core.liegroups import (
    AlgGroup,
    adjoint,
    coadjoint,
    group_data,
    identity_element,
    is_central,
    joint_fixed_dim,
    parse_group,
)
from tests.conftest import make_element


@pytest.mark.parametrize(
    "text, dim, rank, center_dim, exponents",
    [
        ("GL2", 4, 2, 1, None),
        ("SL2", 3, 1, 0, (1,)),
        ("SL(3)", 8, 2, 0, (1, 2)),
        ("T^2", 2, 2, 2, ()),
        ("GL1", 1, 1, 1, None),
        ("SL2xT^1", 4, 2, 1, (1,)),
    ],
)
def test_parse_group(text, dim, rank, center_dim, exponents):
    group = parse_group(text)
    assert tuple(group_data(group)) == (dim, rank, center_dim, exponents)
    assert parse_group(str(group)) == group


@pytest.mark.parametrize("text", ["U2", "GL0", "SLx", ""])
def test_parse_group_rejects(text):
    with pytest.raises(ConfigError):
        parse_group(text)


def test_element_membership(rationals, sl2):
    with pytest.raises(NotInvertible):
        make_element(sl2, [[2, 0], [0, 1]], rationals)
    with pytest.raises(NotInvertible):
        make_element(AlgGroup.gl(2), [[1, 2], [2, 4]], rationals)
    with pytest.raises(ConfigError):
        make_element(parse_group("GL2xT^1"), [[1, 0, 1], [0, 1, 0], [0, 0, 1]], rationals)
    with pytest.raises(NotInvertible):
        make_element(AlgGroup.torus(2), [[1, 1], [0, 1]], rationals)


def test_adjoint_of_diagonal(rationals, gl2):
    g = make_element(gl2, [[2, 0], [0, 1]], rationals)
    # Ad(g) E_ij = g_i / g_j E_ij
    diagonal = [rationals.parse_scalar(v) for v in ["1", "2", "1/2", "1"]]
    expected = exact.from_entries({(i, i): v for i, v in enumerate(diagonal)}, (4, 4), rationals)
    assert exact.equal(adjoint(g), expected)


@pytest.mark.parametrize("group_text", ["GL2", "SL2", "SL3"])
def test_adjoint_is_a_homomorphism(rationals, group_text):
    group = parse_group(group_text)
    n = group.size
    upper = [[1 if i == j else (2 if j == i + 1 else 0) for j in range(n)] for i in range(n)]
    lower = [[1 if i == j else (-1 if i == j + 1 else 0) for j in range(n)] for i in range(n)]
    g, h = make_element(group, upper, rationals), make_element(group, lower, rationals)
    assert exact.equal(adjoint(g * h), adjoint(g) * adjoint(h))
    assert exact.equal(coadjoint(g * h), coadjoint(g) * coadjoint(h))
    assert exact.equal(adjoint(g.inverse()) * adjoint(g), exact.identity(group.dim, rationals))


def test_centre_acts_trivially(rationals, gl2, sl2):
    assert is_central(make_element(gl2, [[3, 0], [0, 3]], rationals))
    assert is_central(make_element(sl2, [[-1, 0], [0, -1]], rationals))
    assert not is_central(make_element(sl2, [[1, 1], [0, 1]], rationals))


def test_powers(rationals, sl2):
    g = make_element(sl2, [[1, 1], [0, 1]], rationals)
    assert g**3 == g * g * g
    assert g**-1 == g.inverse()
    assert (g**0).is_identity()
    assert (g**3).to_rows() == [["1", "3"], ["0", "1"]]


def test_joint_fixed_dim(rationals, gl2, sl2):
    assert joint_fixed_dim([make_element(gl2, [[2, 0], [0, 1]], rationals)], gl2, rationals) == 2
    beta = make_element(sl2, [[2, 0], [0, "1/2"]], rationals)
    gamma = make_element(sl2, [[0, -1], [1, 0]], rationals)
    assert joint_fixed_dim([beta], sl2, rationals) == 1
    assert joint_fixed_dim([beta, gamma], sl2, rationals) == 0
    assert joint_fixed_dim([], sl2, rationals) == 3
    assert joint_fixed_dim([identity_element(sl2, rationals)], sl2, rationals) == 3


def test_torus_adjoint_is_trivial():
    f = Field.rational()
    torus = AlgGroup.torus(2)
    t = make_element(torus, [[2, 0], [0, 3]], f)
    assert exact.equal(adjoint(t), exact.identity(2, f))
