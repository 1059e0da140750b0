import math

import pandas as pd
import pytest

from rephom.core.errors import BudgetExceeded, ConfigError, Unsupported
from rephom.core.koszul import (
    hr_torus_closed_form,
    koszul_chain_euler,
    model_summary,
    parse_model,
    polynomial_piece_dim,
    surface_model,
    torus_model,
    truncated_homology,
)
from rephom.core.liegroups import AlgGroup


def test_gl1_torus_model():
    model = parse_model("torus:GL1")
    betti = truncated_homology(model, 4)
    assert list(betti.to_frame().index) == [0, 1]
    assert [betti.table[(0, w)] for w in range(5)] == [1, 2, 3, 4, 5]
    assert [betti.table[(1, w)] for w in range(2, 5)] == [1, 2, 3]


@pytest.mark.parametrize("r", [1, 2, 3])
def test_abelian_models_match_closed_form(r):
    closed = hr_torus_closed_form(r, 1)
    assert closed == tuple(math.comb(r, i) for i in range(r + 1))
    model = torus_model(AlgGroup.torus(r))
    betti = truncated_homology(model, 2 * r)
    assert max(a for a, _ in betti.table) <= r
    for (a, w), dim in betti.table.items():
        assert dim == math.comb(r, a) * polynomial_piece_dim(2 * r, w - 2 * a)
    # generators of the free module sit in internal degree 2a
    assert tuple(betti.table[(a, 2 * a)] for a in range(r + 1)) == closed


def test_gl2_commuting_variety():
    betti = truncated_homology(parse_model("torus:GL2"), 3)
    # the trace of [X, Y] vanishes, so one odd generator is a cycle
    assert betti.table[(1, 2)] == 1
    assert betti.table[(0, 2)] == 36 - 3
    for w in range(4):
        assert betti.euler(w) == betti.chain_euler(w) == koszul_chain_euler(parse_model("torus:GL2"), w)


def test_sl2_coordinates_are_independent():
    betti = truncated_homology(parse_model("torus:SL2"), 2)
    assert betti.table[(1, 2)] == 0
    assert betti.table[(0, 2)] == 36 - 3


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded) as error:
        truncated_homology(parse_model("torus:GL2"), 4, budget=10)
    assert error.value.to_dict()["error"]["code"] == "budget_exceeded"
    assert error.value.dims


def test_surface_models():
    torus = torus_model(AlgGroup.gl(2))
    genus_one = surface_model(AlgGroup.gl(2), 1)
    assert [str(r) for r in genus_one.relations] == [str(r) for r in torus.relations]
    genus_two = surface_model(AlgGroup.gl(2), 2)
    assert genus_two.odd_weight == 6
    assert genus_two.n_even_vars == 16
    genus_two.check_homogeneous()
    assert all(not r for r in surface_model(AlgGroup.gl(1), 2).relations)


@pytest.mark.parametrize("text", ["torus", "surface:GL2,h=2", "cube:GL1", "surface:GL2,g=x"])
def test_parse_model_rejects(text):
    with pytest.raises(ConfigError):
        parse_model(text)


def test_surface_models_need_gl():
    with pytest.raises(Unsupported):
        parse_model("surface:SL2,g=2")


def test_summary_and_payload():
    model = parse_model("torus:GL1")
    summary = model_summary(model)
    assert summary["even_vars"] == 2
    assert summary["odd_vars"] == 1
    payload = truncated_homology(model, 2).to_dict()
    assert payload["pre_localization"] is True
    assert {"homological_degree": 1, "internal_degree": 2, "dim": 1} in payload["entries"]


def test_budget_is_checked_before_any_strand_is_computed(monkeypatch):
    from rephom.core import koszul

    def fail(*args, **kwargs):
        raise AssertionError("no strand should be computed")

    monkeypatch.setattr(koszul, "_degree_block", fail)
    with pytest.raises(BudgetExceeded) as error:
        truncated_homology(parse_model("torus:GL2"), 4, budget=10)
    assert error.value.dims == {"(0, 2)": 36, "(1, 2)": 4}


def test_worker_pool_gives_the_same_table(monkeypatch):
    from rephom.core import koszul

    calls = []

    def parallel_apply(frame, func, axis=0, **kwargs):
        calls.append(len(frame))
        return frame.apply(func, axis=axis, **kwargs)

    monkeypatch.setattr(koszul.pandarallel, "initialize", lambda **kwargs: None)
    monkeypatch.setattr(pd.DataFrame, "parallel_apply", parallel_apply, raising=False)
    model = parse_model("torus:GL2")
    serial = truncated_homology(model, 3)
    pooled = truncated_homology(model, 3, workers=3)
    assert calls == [4]
    assert pooled.table == serial.table
    assert pooled.chain_dims == serial.chain_dims
