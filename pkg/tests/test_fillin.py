import pytest

from gdd4.design import Design
from gdd4.fillin import FillInError, fill_in
from gdd4.fixtures import build_fixture
from gdd4.grouptype import GroupType, format_type, parse_type
from gdd4.recipes import Recipe, recipe_result_type
from gdd4.search import SearchProblem, find_design, search
from gdd4.verifier import verify

T = parse_type


@pytest.fixture(scope="module")
def small():
    return {t: find_design(T(t), time_budget=30).design for t in ("2^7", "2^10", "5^4", "3^5")}


def test_five_eight_master(small):
    master = build_fixture("58141201")
    fills = (T("2^7"),) + (T("5"),) * 8
    recipe = Recipe((14,) + (5,) * 8 + (20,), 0, fills, T("2^10"))
    d = fill_in(master, recipe, [small["2^7"]] + [None] * 8, small["2^10"])
    assert d.v == 74 and format_type(d.group_type) == "5^8 2^17"
    assert verify(d).passed and d.provenance == "fill-in"
    assert d.group_type == recipe_result_type(recipe)


def test_identity(small):
    master = small["5^4"]
    recipe = Recipe((5, 5, 5, 5), 0, (T("5"),) * 3, None)
    d = fill_in(master, recipe, [None] * 3, None)
    assert d.blocks == master.blocks and sorted(d.groups) == sorted(master.groups)


def test_shared_new_points(small):
    # 3^5 with u = 1: each group plus the new point carries one block (type 1^4)
    k4 = Design.create(4, [[0], [1], [2], [3]], [[0, 1, 2, 3]])
    recipe = Recipe((3,) * 5, 1, (T("1^3"),) * 4, T("1^4"))
    d = fill_in(small["3^5"], recipe, [k4] * 4, k4)
    assert d.v == 16 and d.group_type == T("1^16") == recipe_result_type(recipe)
    assert len(d.blocks) == 20


def test_new_points_kept_with_last_group(small):
    k4 = Design.create(4, [[0], [1], [2], [3]], [[0, 1, 2, 3]])
    recipe = Recipe((3,) * 5, 1, (T("1^3"),) * 4, None)
    d = fill_in(small["3^5"], recipe, [k4] * 4, None)
    assert d.group_type == T("4^1 1^12")


def test_errors(small):
    master = build_fixture("58141201")
    fills = (T("2^7"),) + (T("5"),) * 8
    recipe = Recipe((14,) + (5,) * 8 + (20,), 0, fills, T("2^10"))
    with pytest.raises(FillInError):
        fill_in(master, recipe, [small["2^10"]] + [None] * 8, small["2^10"])
    with pytest.raises(FillInError):
        fill_in(master, recipe, [small["2^7"]] + [None] * 8, None)
    with pytest.raises(FillInError):
        fill_in(small["5^4"], recipe, [small["2^7"]] + [None] * 8, small["2^10"])
    broken = Design.unchecked(14, small["2^7"].groups, small["2^7"].blocks[1:])
    with pytest.raises(FillInError, match="verification"):
        fill_in(master, recipe, [broken] + [None] * 8, small["2^10"])


def test_missing_u_group(small):
    k4 = Design.create(4, [[0, 1], [2], [3]], [])
    recipe = Recipe((3,) * 5, 1, (T("1^3"),) * 4, None)
    with pytest.raises(FillInError):
        fill_in(small["3^5"], recipe, [k4] * 4, None)
