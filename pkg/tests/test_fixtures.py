import pytest

from gdd4.fixtures import (FIXTURE_NAMES, FIXTURE_TYPES, UnknownFixture, build_fixture, fixture_for_type,
                           load_fixture)
from gdd4.grouptype import expected_block_count, format_type, parse_type

COUNTS = {"2255": 59, "21455": 219, "2459": 214, "21854": 247, "2858": 242, "21755": 274, "21158": 300,
          "22055": 335, "21458": 364, "22655": 475, "21659": 470, "26513": 465, "21959": 549,
          "58141201": 390}


def test_registry():
    assert len(FIXTURE_NAMES) == 14 and set(COUNTS) == set(FIXTURE_NAMES)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_builds_with_expected_counts(name):
    d = load_fixture(name)
    assert d.group_type == parse_type(FIXTURE_TYPES[name])
    assert len(d.blocks) == COUNTS[name] == expected_block_count(d.group_type)
    assert fixture_for_type(d.group_type) == name


def test_named_examples():
    assert load_fixture("2255").v == 29
    assert format_type(load_fixture("58141201").group_type) == "20^1 14^1 5^8"
    assert load_fixture("21959").v == 83


def test_unknown():
    with pytest.raises(UnknownFixture):
        load_fixture("999")
    assert fixture_for_type(parse_type("2^7")) is None


def test_provenance():
    assert build_fixture("2858").provenance == "shipped-table"
