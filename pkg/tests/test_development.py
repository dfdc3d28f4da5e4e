import pytest

from gdd4.design import dumps
from gdd4.development import (BaseBlockSystem, DevelopmentError, IncidenceTable, blocks_from_incidence,
                              develop, dumps_system, incidence_of, loads_system, shift_block,
                              stabilizer_orbit)
from gdd4.fixtures import build_fixture, fixture_text, load_system_fixture
from gdd4.grouptype import format_type

SMALL = """\
name: demo
modulus: 4
classes: a c d inf
groups:
across a c d
set inf
base_blocks:
orbit=4: {a0,c1,d2,inf}
"""


def test_shift_fixes_infinite_points():
    sys = loads_system(SMALL)
    cm = sys.class_map()
    blk = (("a", 0), ("c", 1), ("d", 2), ("inf", 1))
    assert shift_block(blk, 1, cm) == (("a", 1), ("c", 2), ("d", 3), ("inf", 1))


def test_subclass_modulus():
    sys = load_system_fixture("21755")
    cm = sys.class_map()
    assert cm["y"].modulus == 5
    assert shift_block((("a", 0), ("a", 2), ("b", 5), ("y", 1)), 5, cm) == (
        ("a", 5), ("a", 7), ("b", 0), ("y", 1))


def test_short_orbit_blocks():
    sys = load_system_fixture("2858")
    bb = next(b for b in sys.base_blocks if b.orbit == 2)
    assert stabilizer_orbit(bb.points, sys) == 2
    d = develop(sys)
    labels = sys.labels()
    named = {frozenset(labels[p] for p in b) for b in d.blocks}
    assert frozenset({"a0", "a2", "a4", "a6"}) in named
    assert frozenset({"a1", "a3", "a5", "a7"}) in named


def test_full_development_counts():
    assert len(develop(load_system_fixture("21455")).blocks) == 219
    assert format_type(develop(load_system_fixture("2858")).group_type) == "5^8 2^8"


def test_declared_orbit_must_match():
    bad = SMALL.replace("orbit=4", "orbit=2")
    with pytest.raises(DevelopmentError):
        develop(loads_system(bad))


def test_duplicate_block_rejected():
    dup = SMALL + "orbit=4: {a1,c2,d3,inf}\n"
    with pytest.raises(DevelopmentError):
        develop(loads_system(dup))


def test_type_header_checked():
    with pytest.raises(DevelopmentError):
        develop(loads_system("type: 2^3\n" + SMALL))


def test_system_roundtrip():
    for name in ("2858", "21755", "58141201"):
        sys = load_system_fixture(name)
        again = loads_system(dumps_system(sys))
        assert dumps(develop(again)) == dumps(develop(sys))


def test_develop_is_byte_identical():
    sys = load_system_fixture("21959")
    assert dumps(develop(sys)) == dumps(develop(sys))


def test_incidence_examples():
    d = build_fixture("2255")
    one = sorted(d.labels[p] for p in d.blocks[0])
    assert sorted(map(int, one)) == [1, 6, 11, 16]
    last = sorted(int(d.labels[p]) for p in d.blocks[58])
    assert last == [17, 21, 26, 29]
    assert blocks_from_incidence(IncidenceTable(1, {1: (1,), 2: (1,), 3: (1,), 4: (1,)})) == [(1, 2, 3, 4)]


def test_incidence_roundtrip_and_errors():
    blocks = [(0, 1, 2, 3), (0, 4, 5, 6)]
    assert blocks_from_incidence(incidence_of(blocks)) == blocks
    with pytest.raises(DevelopmentError):
        IncidenceTable(1, {1: (2,)})
    with pytest.raises(DevelopmentError):
        blocks_from_incidence(IncidenceTable(2, {1: (1,), 2: (1,), 3: (1,), 4: (2,)}))


def test_unknown_class_in_block():
    with pytest.raises(DevelopmentError):
        loads_system(SMALL + "orbit=4: {z0,c1,d2,inf}\n")
