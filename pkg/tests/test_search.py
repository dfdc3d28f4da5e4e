import time

import pytest

from gdd4.design import dumps
from gdd4.development import develop, loads_system
from gdd4.grouptype import parse_type
from gdd4.search import (BUDGET_EXCEEDED, CERTIFIED, COUNTEREXAMPLE, EXHAUSTED, FOUND, CyclicLayout,
                         SearchError, SearchProblem, candidate_blocks, canonical_groups, find_design,
                         layout_hints, prove_nonexistence, search, search_base_blocks)
from gdd4.verifier import verify


def test_five_four_found():
    out = search(SearchProblem(parse_type("5^4"), seed=3))
    assert out.status == FOUND and len(out.design.blocks) == 25
    assert verify(out.design).passed and out.design.provenance == "searched"


def test_seeded_runs_repeat():
    a = search(SearchProblem(parse_type("5^4"), seed=11))
    b = search(SearchProblem(parse_type("5^4"), seed=11))
    assert a.stats.nodes == b.stats.nodes and dumps(a.design) == dumps(b.design)


def test_two_four_exhausted():
    out = search(SearchProblem(parse_type("2^4"), exhaustive=True))
    assert out.status == EXHAUSTED and out.design is None


def test_small_types():
    for text in ("2^7", "3^4", "1^4"):
        out = search(SearchProblem(parse_type(text), node_budget=200_000))
        assert out.found and verify(out.design).passed


def test_threads_still_find():
    out = search(SearchProblem(parse_type("2^7"), threads=3, seed=1))
    assert out.found


def test_budgets():
    out = search(SearchProblem(parse_type("2^6 5^1"), node_budget=500))
    assert out.status == BUDGET_EXCEEDED
    t0 = time.perf_counter()
    out = search(SearchProblem(parse_type("2^3 5^4"), time_budget=0.5))
    assert out.status == BUDGET_EXCEEDED and time.perf_counter() - t0 < 5


@pytest.mark.parametrize("kwargs", [{"node_budget": 0}, {"time_budget": -1.0}, {"threads": 0}])
def test_problem_validation(kwargs):
    with pytest.raises(SearchError):
        SearchProblem(parse_type("5^4"), **kwargs)


def test_infeasible_type_rejected():
    with pytest.raises(SearchError):
        search(SearchProblem(parse_type("5^3 2^1")))


def test_layout_must_tile_type():
    layout = loads_system("modulus: 7\nclasses: a b\ngroups:\nacross a b\n")
    with pytest.raises(SearchError):
        search(SearchProblem(parse_type("2^10"), symmetry=CyclicLayout(layout)))


def test_cyclic_search_returns_system():
    hint = next(h for h in layout_hints(parse_type("2^10")))
    out, system = search_base_blocks(SearchProblem(parse_type("2^10"), symmetry=hint))
    assert out.found and len(out.design.blocks) == 30
    assert dumps(develop(system)) == dumps(out.design.with_provenance("developed"))


def test_find_design_uses_layouts():
    for text in ("2^10", "2^13", "2^9 5^1"):
        out = find_design(parse_type(text), time_budget=30)
        assert out.found and verify(out.design).passed


def test_candidates_meet_groups_once():
    gt = parse_type("2^2 3^2")
    groups = canonical_groups(gt)
    pg = [0] * gt.v
    for gi, g in enumerate(groups):
        for p in g:
            pg[p] = gi
    import numpy as np

    cands = candidate_blocks(np.asarray(pg), 4)
    assert len(cands) == 2 * 2 * 3 * 3
    assert all(len({pg[p] for p in b}) == 4 for b in cands)


def test_prove_nonexistence():
    assert prove_nonexistence(parse_type("2^4")).status == CERTIFIED
    res = prove_nonexistence(parse_type("5^4"))
    assert res.status == COUNTEREXAMPLE and verify(res.design).passed
    with pytest.raises(SearchError):
        prove_nonexistence(parse_type("2^17"))


@pytest.mark.slow
def test_two_six_five_one_certified():
    assert prove_nonexistence(parse_type("2^6 5^1")).status == CERTIFIED


@pytest.mark.slow
def test_six_four_certified():
    assert prove_nonexistence(parse_type("6^4"), time_budget=3600).status == CERTIFIED
