import pytest

from rephom.core import exact
from rephom.core.errors import ComplexInvalid, ConfigError
from rephom.core.exact import ChainComplex, Field, FieldKind, homology, parse_field


def _rational_matrix(rows):
    f = Field.rational()
    return exact.matrix([[f.scalar(v) for v in row] for row in rows], f)


@pytest.mark.parametrize(
    "text, kind, evidence",
    [
        ("Q", FieldKind.RATIONAL, "exact"),
        ("cyclotomic:5", FieldKind.CYCLOTOMIC, "exact"),
        ("fq:13,root=5,order=4", FieldKind.PRIME, "modular evidence"),
        ("fq:101", FieldKind.PRIME, "modular evidence"),
    ],
)
def test_parse_field(text, kind, evidence):
    f = parse_field(text)
    assert f.kind is kind
    assert f.evidence == evidence
    assert str(f) == text


@pytest.mark.parametrize("text", ["fq:12", "fq:13,order=5", "fq:13,root=3,order=4", "cyclotomic:x", "R"])
def test_parse_field_rejects(text):
    with pytest.raises(ConfigError):
        parse_field(text)


def test_cyclotomic_root_symbol():
    f = parse_field("cyclotomic:4")
    i = f.parse_scalar("i")
    assert i == f.parse_scalar("z")
    assert i**2 == -f.domain.one
    assert f.root_of_unity(4) == i
    assert f.root_of_unity(2) == -f.domain.one


def test_prime_field_root_symbol():
    f = parse_field("fq:13,root=5,order=4")
    assert f.format(f.parse_scalar("i")) == "5"
    assert f.format(f.parse_scalar("i^2")) == "12"
    assert f.format(f.parse_scalar("1/2")) == "7"


def test_scalar_format():
    f = parse_field("cyclotomic:5")
    assert f.format(f.parse_scalar("z^2 + 1")) == "z^2 + 1"
    assert f.format(f.parse_scalar("z^5")) == "1"
    assert Field.rational().format(Field.rational().parse_scalar("-3/6")) == "-1/2"


def test_scalar_rejects_unknown_symbols():
    with pytest.raises(ConfigError):
        Field.rational().parse_scalar("y + 1")
    with pytest.raises(ConfigError):
        Field.rational().parse_scalar("z")


def test_rank_and_kernel():
    f = Field.rational()
    m = _rational_matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert exact.rank(m) == 2
    kernel = exact.kernel_basis(m, f)
    assert kernel.shape == (3, 1)
    assert exact.is_zero(m * kernel)
    assert exact.rank(exact.zeros(3, 4, f)) == 0


def test_dense_rank_matches_sparse_rank():
    f = parse_field("fq:7")
    rows = [[f.scalar(v) for v in row] for row in [[1, 2, 3], [4, 5, 6], [7, 8, 9], [2, 4, 6]]]
    assert exact.dense_rank(rows, f) == exact.rank(exact.matrix(rows, f)) == 2


def test_snf_oracle():
    assert exact.snf_oracle([[2, 4], [6, 8]]) == [2, 4]
    assert exact.snf_oracle([[1, 2], [2, 4]]) == [1, 0]


def test_block_matrix_shapes():
    f = Field.rational()
    block = _rational_matrix([[1, 2], [3, 4]])
    assembled = exact.block_matrix({(0, 1): block}, [2], [2, 2], f)
    assert assembled.shape == (2, 4)
    assert exact.entries(assembled) == {(0, 2): f.scalar(1), (0, 3): f.scalar(2), (1, 2): f.scalar(3), (1, 3): f.scalar(4)}
    with pytest.raises(ComplexInvalid):
        exact.block_matrix({(0, 0): block}, [3], [2], f)


def test_homology_of_triangle_boundary():
    f = Field.rational()
    # edges 01, 12, 20 on vertices 0, 1, 2
    d1 = _rational_matrix([[-1, 0, 1], [1, -1, 0], [0, 1, -1]])
    report = homology(ChainComplex(field=f, dims=(3, 3), differentials=(d1,)))
    assert report.betti == (1, 1)
    assert report.euler == 0


def test_homology_of_single_group():
    report = homology(ChainComplex(field=Field.rational(), dims=(9,), differentials=()))
    assert report.betti == (9,)
    assert report.euler == 9


def test_complex_validation():
    f = Field.rational()
    one = _rational_matrix([[1]])
    with pytest.raises(ComplexInvalid):
        homology(ChainComplex(field=f, dims=(1, 1, 1), differentials=(one, one)))
    with pytest.raises(ComplexInvalid):
        ChainComplex(field=f, dims=(2, 1), differentials=(one,))
    with pytest.raises(ComplexInvalid):
        ChainComplex(field=f, dims=(1, 1), differentials=())


def test_graded_homology():
    f = Field.rational()
    d1 = _rational_matrix([[1, 0], [0, 0]])
    complex_ = ChainComplex(field=f, dims=(2, 2), differentials=(d1,), weights=((0, 1), (0, 1)))
    report = homology(complex_)
    assert report.betti == (1, 1)
    assert report.graded == {0: (0, 0), 1: (1, 1)}


def test_weights_must_be_preserved():
    f = Field.rational()
    d1 = _rational_matrix([[1]])
    with pytest.raises(ComplexInvalid):
        homology(ChainComplex(field=f, dims=(1, 1), differentials=(d1,), weights=((0,), (1,))))


def test_randomize_basis_keeps_homology():
    f = Field.rational()
    d1 = _rational_matrix([[1, 1, 0], [0, 0, 0]])
    d2 = _rational_matrix([[1], [-1], [0]])
    complex_ = ChainComplex(field=f, dims=(2, 3, 1), differentials=(d1, d2))
    changed = exact.randomize_basis(complex_, seed=7)
    assert homology(changed).betti == homology(complex_).betti == (1, 1, 0)
