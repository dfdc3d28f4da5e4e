from itertools import combinations

from hypothesis import given, strategies as st

from gdd4.feasibility import check_feasible, enumerate_feasible, feasible_2t5s, is_feasible
from gdd4.grouptype import GroupType, format_type, parse_type, type_2t5s
from gdd4.regression import small_feasible_reference


def test_examples():
    assert check_feasible(parse_type("2^2 5^5")).feasible
    assert check_feasible(parse_type("1^4")).feasible
    r = check_feasible(parse_type("5^3 2^1"))
    assert not r.feasible and {3, 5} <= set(r.failed())
    r = check_feasible(parse_type("6^1 3^4"))
    assert not r.feasible and 6 in r.failed()


def test_failures_carry_witnesses():
    r = check_feasible(parse_type("8^1 2^4"))
    assert 4 in r.failed()
    c4 = next(c for c in r.conditions if c.index == 4)
    assert c4.witness is not None


def test_report_has_eight_entries():
    r = check_feasible(parse_type("2^7"))
    assert [c.index for c in r.conditions] == list(range(1, 9))
    assert r.to_dict()["verdict"] == "feasible"


def test_congruences():
    assert feasible_2t5s(2, 5)
    assert not feasible_2t5s(3, 3)
    assert feasible_2t5s(4, 0)


def test_enumerate_small():
    assert [format_type(t) for t in enumerate_feasible(4)] == ["1^4"]
    assert enumerate_feasible(3) == []


def test_enumerate_thirty_matches_reference():
    got = {format_type(t) for t in enumerate_feasible(30)}
    want = {format_type(t) for t in small_feasible_reference()}
    assert len(want) == 54 and got == want


@given(st.integers(0, 60), st.integers(0, 30))
def test_2t5s_congruences_are_necessary(t, s):
    if t + s >= 4 and is_feasible(type_2t5s(t, s)):
        assert feasible_2t5s(t, s)


def _brute_conditions_1_to_4(gt: GroupType) -> bool:
    g, v = gt.groups, gt.v
    if len(g) < 4 or any((v - x) % 3 for x in g):
        return False
    if sum(x * (v - x) for x in g) % 12:
        return False
    return all(3 * a + b <= v for i, a in enumerate(g) for j, b in enumerate(g) if i != j)


@given(st.lists(st.integers(1, 12), min_size=4, max_size=9))
def test_feasible_implies_basic_conditions(sizes):
    gt = GroupType(tuple(sizes))
    if is_feasible(gt):
        assert _brute_conditions_1_to_4(gt)

