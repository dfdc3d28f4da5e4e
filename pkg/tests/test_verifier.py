import random

import pytest

from gdd4.design import Design
from gdd4.fixtures import FIXTURE_NAMES, build_fixture
from gdd4.verifier import FixtureVerificationError, verify, verify_all_fixtures


def _without_block(d: Design, i: int) -> Design:
    blocks = d.blocks[:i] + d.blocks[i + 1:]
    return Design.create(d.v, d.groups, blocks, labels=d.labels)


def test_table_one_passes_with_replication():
    d = build_fixture("2255")
    r = verify(d)
    assert r.passed and r.block_count == 59
    by_label = {int(d.labels[p]): r.replication[p] for p in range(d.v)}
    assert all(by_label[p] == 8 for p in range(1, 26))
    assert all(by_label[p] == 9 for p in range(26, 30))
    assert r.replication_ok


def test_deleting_a_block_uncovers_six_pairs():
    d = build_fixture("2255")
    r = verify(_without_block(d, 0))
    missing = sorted(tuple(sorted(int(d.labels[p]) for p in v.pair)) for v in r.violations)
    assert [v.kind for v in r.violations] == ["pair-missing"] * 6
    assert missing == [(1, 6), (1, 11), (1, 16), (6, 11), (6, 16), (11, 16)]


def test_block_inside_a_group():
    d = Design.create(8, [[0, 1], [2, 3], [4, 5], [6, 7]], [[0, 1, 2, 4]])
    r = verify(d)
    assert r.count("block-meets-group-twice") == 1


def test_wrong_block_size_reported():
    d = Design.unchecked(8, [[0, 1], [2, 3], [4, 5], [6, 7]], [[0, 2, 4]])
    r = verify(d)
    assert r.count("wrong-block-size") == 1


def test_swap_mutation_repeats_and_misses():
    d = build_fixture("2858")
    blocks = [list(b) for b in d.blocks]
    blk = blocks[3]
    g = d.point_group
    used = {int(g[p]) for p in blk}
    q = next(p for p in range(d.v) if int(g[p]) not in used)
    blk[0] = q
    r = verify(Design.unchecked(d.v, d.groups, blocks))
    assert r.count("pair-repeated") >= 1 and r.count("pair-missing") >= 1


def test_mutations_are_rejected():
    rng = random.Random(7)
    d = build_fixture("21455")
    for _ in range(200):
        blocks = [list(b) for b in d.blocks]
        bi = rng.randrange(len(blocks))
        pos = rng.randrange(4)
        old = blocks[bi][pos]
        blocks[bi][pos] = rng.choice([p for p in range(d.v) if p != old])
        assert not verify(Design.unchecked(d.v, d.groups, blocks)).passed


def test_verify_all_fixtures():
    out = verify_all_fixtures()
    assert list(out) == list(FIXTURE_NAMES) and set(out.values()) == {"pass"}
    assert verify_all_fixtures([]) == {}


def test_report_serializes():
    r = verify(build_fixture("2255"))
    data = r.to_dict()
    assert data["verdict"] == "pass" and data["block_count"] == 59
    assert "pass" in r.render()


def test_fixture_failure_is_named(monkeypatch):
    import gdd4.fixtures as fx

    broken = _without_block(build_fixture("2459"), 5)
    monkeypatch.setattr(fx, "build_fixture", lambda name: broken if name == "2459" else build_fixture(name))
    with pytest.raises(FixtureVerificationError) as exc:
        verify_all_fixtures(["2255", "2459"])
    assert exc.value.name == "2459"
