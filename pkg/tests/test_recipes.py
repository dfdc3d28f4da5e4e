import pytest

from gdd4.grouptype import GroupType, format_type, parse_type, type_2t5s
from gdd4.recipes import (Recipe, RecipeError, match_recipe, parse_rows, recipe_result_type, row_index,
                          shipped_rows)

T = parse_type


def test_result_type_examples():
    r = Recipe((24, 24, 24, 24), 2, (T("2^12"),) * 3, T("2^13"))
    assert format_type(recipe_result_type(r)) == "2^49"
    r = Recipe((24, 24, 24, 24), 2, (T("2^12"), T("2^12"), T("2^2 5^4")), T("2^13"))
    assert format_type(recipe_result_type(r)) == "5^4 2^39"
    r = Recipe((20, 20, 20, 20), 0, (T("5^4"), T("2^10"), T("2^10")), T("2^10"))
    assert format_type(recipe_result_type(r)) == "5^4 2^30"
    kept = Recipe((20, 20, 20, 20), 0, (T("5^4"), T("2^10"), T("2^10")), None)
    assert format_type(recipe_result_type(kept)) == "20^1 5^4 2^20"


def test_invariants():
    with pytest.raises(RecipeError):
        Recipe((24, 24), 0, (T("2^11"),), None)
    with pytest.raises(RecipeError):
        Recipe((24, 24), 2, (T("2^12"),), T("2^12"))
    with pytest.raises(RecipeError):
        Recipe((5, 24), 2, (T("5"),), None)
    with pytest.raises(RecipeError):
        Recipe((24,), 0, (T("2^12"),), None)


def test_fill_design_types():
    r = Recipe((18,) * 5, 2, (T("2^9"),) * 4, T("5^4"))
    assert r.fill_design_type(0) == T("2^10")
    assert format_type(recipe_result_type(r)) == "5^4 2^36"
    assert T("2^10") in r.ingredient_types() and T("5^4") in r.ingredient_types()


def test_matcher_row_98():
    r = row_index()[(39, 4)].recipe_for(39, 4)
    assert r.groups == (24,) * 4 and r.u == 2
    assert sorted(format_type(f) for f in r.fills) == ["2^12", "2^12", "5^4 2^2"]
    assert r.final_fill == T("2^13")


def test_matcher_row_107_is_deterministic():
    row = row_index()[(21, 13)]
    r1, r2 = row.recipe_for(21, 13), row.recipe_for(21, 13)
    assert r1 == r2 and recipe_result_type(r1) == type_2t5s(21, 13)


def test_every_row_matches():
    n = 0
    for row in shipped_rows():
        if row.unknown:
            continue
        for t, s in row.targets:
            assert recipe_result_type(row.recipe_for(t, s)) == type_2t5s(t, s)
            n += 1
    assert n >= 300


def test_unknown_rows():
    unknown = {ts for row in shipped_rows() if row.unknown for ts in row.targets}
    assert unknown == {(11, 17), (4, 21)}


def test_match_failure():
    assert match_recipe(T("2^40"), T("24^4"), 2, [T("2^13")]) is None
    assert match_recipe(T("2^49"), T("24^4"), 2, [T("2^13")]).final_fill == T("2^13")


def test_parse_rows_ranges():
    rows = parse_rows("range 98: 2^49 .. 2^29 5^8 | 24^4 | 2 | 2^13, 2^3 5^4\n")
    assert rows[0].targets == ((49, 0), (39, 4), (29, 8))
    with pytest.raises(RecipeError):
        parse_rows("nonsense row\n")
