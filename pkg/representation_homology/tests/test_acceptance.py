import numpy as np
import pytest

from rephom.core import exact
from rephom.core.cotangent import (
    RepPoint,
    cotangent_complex,
    cotangent_homology,
    cyclic_cohomology,
    euler_check,
    expected_euler,
    tangent_dims,
    trivial_rep,
    vanishing_certificate,
)
from rephom.core.exact import Field, parse_field
from rephom.core.fox import check_representation, cycle_count, parse_braid
from rephom.core.liegroups import AlgGroup, joint_fixed_dim, parse_group
from rephom.core.sampling import SamplerName, root_element, root_exponent_tuples, sample_assignment, sample_count
from rephom.core.specseq import degeneration_report, e2_page
from rephom.core.spaces import LensSpace, LinkComplement, Surface, TorusKnot, parse_space, presentation_of
from tests.conftest import make_element

GROUPS = ["GL1", "GL2", "SL2", "T^2"]


def _sampled(space, group, field, sampler=SamplerName.AUTO, count=20, seed=0):
    for index in range(sample_count(space, group, sampler, count)):
        yield RepPoint(group, field, tuple(sample_assignment(space, group, field, sampler, seed, index)))


@pytest.mark.parametrize("genus", [1, 2, 3])
@pytest.mark.parametrize("group_text", GROUPS)
def test_euler_characteristic_is_independent_of_the_representation(genus, group_text):
    space, group, f = Surface(genus), parse_group(group_text), Field.rational()
    expected = (1 - (2 - 2 * genus)) * group.dim
    assert expected_euler(space, group) == expected
    for rep in _sampled(space, group, f):
        assert euler_check(space, rep).to_dict() == {"chi": expected, "expected": expected, "pass": True}


@pytest.mark.parametrize("p, q", [(5, (1, 2)), (7, (1, 3, 2)), (3, (1, 1))])
def test_lens_homology_is_concentrated(p, q):
    space, group, f = LensSpace(p, q), AlgGroup.gl(2), parse_field(f"cyclotomic:{p}")
    top = 2 * len(q) - 2
    reps = list(_sampled(space, group, f))
    assert len(reps) == len(root_exponent_tuples(group, p))
    for rep in reps:
        betti = cotangent_homology(space, rep).betti
        assert len(betti) == top + 1
        assert all(b == 0 for i, b in enumerate(betti) if i not in (0, top))
        assert betti[top] > 0
        page = e2_page({i: b for i, b in enumerate(betti) if b}, 3, 3 * top)
        assert page.lacunary_modulus == top
        report = degeneration_report(page)
        assert report.degenerate
        assert report.predicted_nonzero_degrees == tuple(range(0, 3 * top + 1, top))


@pytest.mark.parametrize("field_text", ["cyclotomic:4", "fq:13,root=5,order=4"])
def test_heisenberg_representation_is_good(field_text):
    space = parse_space("pres:gens=3;rels=a b A B, a c A C, c b C B A")
    group, f = AlgGroup.sl(2), parse_field(field_text)
    images = (
        make_element(group, [[-1, 0], [0, -1]], f),
        make_element(group, [["i", 0], [0, "-i"]], f),
        make_element(group, [[0, -1], [1, 0]], f),
    )
    assert check_representation(presentation_of(space), images)
    dims = tangent_dims(space, RepPoint(group, f, images))
    assert dims.h0_group == 0
    assert dims.h1_group == 0
    assert dims.z1 == group.dim


@pytest.mark.parametrize("genus", [1, 2])
@pytest.mark.parametrize("group_text", GROUPS)
def test_h1_is_bounded_by_the_group_dimension(genus, group_text):
    space, group, f = Surface(genus), parse_group(group_text), Field.rational()
    trivial = trivial_rep(space, group, f)
    assert cotangent_homology(space, trivial).betti[1] == group.dim
    for rep in _sampled(space, group, f):
        h1 = cotangent_homology(space, rep).betti[1]
        assert h1 <= group.dim
        central = joint_fixed_dim(rep.assignment, group, f) == group.dim
        assert (h1 == group.dim) == central


def test_regular_commuting_pair_reaches_the_rank(rationals, gl2):
    rep = RepPoint(gl2, rationals, (make_element(gl2, [[2, 0], [0, 1]], rationals), make_element(gl2, [[3, 0], [0, 1]], rationals)))
    assert cotangent_homology(Surface(1), rep).betti[1] == 2 == gl2.rank


def test_smooth_genus_two_representations_have_no_h1(rationals, sl2):
    space = Surface(2)
    for rep in _sampled(space, sl2, rationals, SamplerName.SMOOTH, count=10):
        certificate = vanishing_certificate(space, rep, local_dim=9)
        assert certificate.vanishing_bound == 0
        assert certificate.smooth_flag


@pytest.mark.parametrize("p", range(2, 8))
@pytest.mark.parametrize("group_text", ["GL2", "SL2"])
def test_cyclic_groups_have_no_higher_cohomology(p, group_text):
    group, f = parse_group(group_text), parse_field(f"cyclotomic:{p}")
    for exponents in root_exponent_tuples(group, p):
        dims = cyclic_cohomology(p, root_element(group, f, p, exponents), 6)
        assert dims[0] > 0
        assert dims[1:] == (0,) * 6


def test_torus_knot_tangent_space(rationals, sl2):
    space = TorusKnot(2, 3)
    assert tangent_dims(space, trivial_rep(space, sl2, rationals)).z1 == 3
    for rep in _sampled(space, sl2, rationals, count=10):
        assert tangent_dims(space, rep).z1 <= 2 * sl2.dim


@pytest.mark.parametrize(
    "braid_text, strands, sampler",
    [
        ("s1", 2, SamplerName.FIXED_POINT),
        ("s1 s2 s1 s2 s1 s2", 3, SamplerName.FIXED_POINT),
        ("s1 s1 s1", 2, SamplerName.FIXED_POINT),
        ("s1 s2 s1 s2 s1 s2", 3, SamplerName.NONABELIAN),
        ("s1 s1 s1", 2, SamplerName.NONABELIAN),
    ],
)
def test_link_complements(braid_text, strands, sampler, gl2, rationals):
    braid = parse_braid(braid_text, strands)
    space = LinkComplement(braid)
    trivial = cotangent_homology(space, trivial_rep(space, gl2, rationals))
    assert trivial.betti[1] == gl2.dim * cycle_count(braid)
    for rep in _sampled(space, gl2, rationals, sampler, count=10):
        report = cotangent_homology(space, rep)
        assert report.euler == 0
        assert report.betti[0] == report.betti[1] <= strands * gl2.dim
        # the x_i beta(x_i)^-1 presentation sees the same tangent space
        assert tangent_dims(space, rep).z1 == report.betti[0]


def test_sparse_rank_agrees_with_smith_normal_form(rationals):
    rng = np.random.default_rng(11)
    for _ in range(100):
        n_rows, n_cols = rng.integers(1, 31, size=2)
        inner = rng.integers(1, min(n_rows, n_cols) + 1)
        rows = (rng.integers(-3, 4, size=(n_rows, inner)) @ rng.integers(-3, 4, size=(inner, n_cols))).tolist()
        divisors = exact.snf_oracle(rows)
        m = exact.matrix([[rationals.scalar(v) for v in row] for row in rows], rationals)
        assert exact.rank(m) == sum(1 for d in divisors if d)


@pytest.mark.parametrize(
    "space_text, group_text, field_text, sampler",
    [
        ("surface:g=2", "SL2", "Q", SamplerName.SURFACE),
        ("surface:g=1", "GL2", "Q", SamplerName.COMMUTING),
        ("lens:p=7,q=1 3 2", "GL2", "cyclotomic:7", SamplerName.ROOTS),
        ("link:braid=s1 s2 s1 s2 s1 s2,strands=3", "GL2", "Q", SamplerName.FIXED_POINT),
        ("link:braid=s1 s1 s1,strands=2", "SL2", "Q", SamplerName.NONABELIAN),
        ("torusknot:p=2,q=3", "SL2", "Q", SamplerName.TORUS_KNOT),
    ],
)
def test_homology_survives_a_change_of_basis(space_text, group_text, field_text, sampler):
    space, group, f = parse_space(space_text), parse_group(group_text), parse_field(field_text)
    for index in range(3):
        rep = RepPoint(group, f, tuple(sample_assignment(space, group, f, sampler, 7, index)))
        complex_ = cotangent_complex(space, rep)
        complex_.validate()
        changed = exact.randomize_basis(complex_, seed=index)
        changed.validate()
        assert exact.homology(changed).betti == exact.homology(complex_).betti
