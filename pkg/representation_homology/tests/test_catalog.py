import pytest

from rephom.core.catalog import (
    BoundStatus,
    cpr_char_homology,
    cpr_cotangent_homology,
    cpr_generator_degrees,
    cpr_local_system_homology,
    global_bounds,
    markdown_table,
    resolve_exponents,
)
from rephom.core.errors import ConfigError, Unsupported
from rephom.core.liegroups import AlgGroup, parse_group
from rephom.core.spaces import LensSpace, LinkComplement, Surface, TorusKnot, WedgeCircles, torus_knot_braid


def test_cp1_for_sl2():
    series = cpr_char_homology(resolve_exponents(AlgGroup.sl(2), None), 1, 3)
    assert series.dims == (1, 0, 0, 1)
    assert series.generators == (3,)
    assert series.nonzero() == {0: 1, 3: 1}


def test_cp2_generators():
    assert cpr_generator_degrees((1,), 2) == (5, 7)
    series = cpr_char_homology((1,), 2, 12)
    assert series.nonzero() == {0: 1, 5: 1, 7: 1, 12: 1}
    assert cpr_cotangent_homology((1,), 2) == {5: 1, 7: 1}


def test_sl3_generators_are_sorted():
    assert resolve_exponents(parse_group("SL3"), None) == (1, 2)
    assert cpr_generator_degrees((1, 2), 1) == (3, 5)
    assert cpr_char_homology((1, 2), 1, 8).dims == (1, 0, 0, 1, 0, 1, 0, 0, 1)


def test_exponents():
    with pytest.raises(ConfigError):
        resolve_exponents(AlgGroup.gl(2), None)
    assert resolve_exponents(AlgGroup.gl(2), [1, 2]) == (1, 2)
    with pytest.raises(ConfigError):
        resolve_exponents(None, [0])
    with pytest.raises(ConfigError):
        cpr_generator_degrees((1,), 0)


def test_local_system_homology():
    assert cpr_local_system_homology(AlgGroup.gl(2), 1) == {1: 4}
    assert cpr_local_system_homology(AlgGroup.sl(2), 2) == {1: 3, 3: 3}


def _by_status(bounds):
    return {b.status: b.bound for b in bounds}


@pytest.mark.parametrize(
    "space, group, expected",
    [
        (Surface(2), AlgGroup.sl(2), {BoundStatus.PROVEN: 3, BoundStatus.CONJECTURAL: 0, BoundStatus.LOCAL: 0}),
        (Surface(1), AlgGroup.gl(2), {BoundStatus.PROVEN: 4, BoundStatus.CONJECTURAL: 2, BoundStatus.LOCAL: 2}),
        (Surface(3), AlgGroup.gl(2), {BoundStatus.PROVEN: 4, BoundStatus.CONJECTURAL: 1, BoundStatus.LOCAL: 1}),
        (TorusKnot(2, 3), AlgGroup.sl(2), {BoundStatus.PROVEN: 6, BoundStatus.LOCAL: 3}),
        (LinkComplement(torus_knot_braid(3, 2)), AlgGroup.gl(2), {BoundStatus.PROVEN: 12, BoundStatus.LOCAL: 4}),
        (WedgeCircles(3), AlgGroup.gl(2), {BoundStatus.PROVEN: 0}),
    ],
)
def test_global_bounds(space, group, expected):
    assert _by_status(global_bounds(space, group)) == expected


def test_bounds_for_lens_spaces_are_unknown():
    with pytest.raises(Unsupported):
        global_bounds(LensSpace(5, (1, 2)), AlgGroup.gl(2))


def test_markdown_table():
    table = markdown_table(b.to_dict() for b in global_bounds(WedgeCircles(2), AlgGroup.sl(2)))
    lines = table.splitlines()
    assert lines[0].split("|")[1].strip() == "bound"
    assert "PROVEN" in lines[2]
    assert markdown_table([]) == ""
