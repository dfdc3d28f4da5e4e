"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Reference values here are typed in by hand from the published results or
computed independently in this file, never read back from package data.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time
from collections import Counter

import pytest

from gdd4 import planner, realize as realize_mod
from gdd4.design import Design, dumps
from gdd4.development import develop
from gdd4.feasibility import check_feasible, enumerate_feasible
from gdd4.fixtures import FIXTURE_NAMES, build_fixture, fixture_text, load_system_fixture
from gdd4.grouptype import GroupType, format_type, parse_type
from gdd4.planner import (DEFINITE_NONEXISTENCE, EXISTS, POSSIBLE_EXCEPTION, decide_range, plan,
                          validate_certificate)
from gdd4.realize import PartialResult, realize
from gdd4.search import SearchProblem, prove_nonexistence, search
from gdd4.verifier import verify


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def _clear_caches() -> None:
    build_fixture.cache_clear()
    load_system_fixture.cache_clear()
    realize_mod._searched.clear()
    plan.cache_clear()
    planner._validated.clear()


# Feasible types on at most 30 points, transcribed in published order.
SMALL_TYPES = """
1^4; 2^4; 3^4; 1^13; 1^9 4^1; 2^7; 3^5; 1^16; 1^12 4^1; 1^8 4^2; 1^4 4^3; 4^4; 2^6 5^1;
2^10; 5^4; 3^5 6^1; 1^15 7^1; 2^9 5^1; 3^8; 3^4 6^2; 6^4; 1^25; 1^21 4^1; 1^17 4^2;
1^13 4^3; 1^9 4^4; 1^5 4^5; 1^1 4^6; 2^13; 2^3 5^4; 2^9 8^1; 3^9; 3^5 6^2; 3^1 6^4; 1^28;
1^24 4^1; 1^20 4^2; 1^16 4^3; 1^12 4^4; 1^8 4^5; 1^4 4^6; 4^7; 1^14 7^2; 1^10 4^1 7^2;
1^6 4^2 7^2; 1^2 4^3 7^2; 7^4; 2^12 5^1; 2^2 5^5; 2^8 5^1 8^1; 3^8 6^1; 3^4 6^3; 6^5; 3^7 9^1
"""

# Pairs (t, s) left open by the published classification, grouped by v.
OPEN_PAIRS = {
    (4, 12),
    (23, 5), (13, 9), (3, 13),
    (29, 5),
    (23, 8),
    (22, 9), (12, 13), (2, 17),
    (26, 8), (16, 12), (6, 16),
    (25, 9), (15, 13), (5, 17),
    (11, 17),
    (4, 21),
}
NONEXISTENT_PAIRS = {(4, 0), (6, 1)}


def test_criterion_1_enumeration(report):
    want = [format_type(parse_type(x)) for x in SMALL_TYPES.replace("\n", " ").split(";")]
    assert len(want) == 54 == len(set(want))
    t0 = time.perf_counter()
    got = [format_type(t) for t in enumerate_feasible(30)]
    elapsed = time.perf_counter() - t0
    ok = set(got) == set(want) and len(got) == len(want) and elapsed < 5
    report(1, ok, f"enumerate_feasible(30): {len(got)} types, {elapsed:.2f}s")
    assert set(got) == set(want)
    assert len(got) == len(want)
    assert elapsed < 5


def _block_count(groups: list[int]) -> int:
    v = sum(groups)
    num = sum(g * (v - g) for g in groups)
    assert num % 12 == 0
    return num // 12


def test_criterion_2_fixtures(report):
    _clear_caches()
    spot = {"2255": 59, "21455": 219, "2858": 242}
    t0 = time.perf_counter()
    bad = []
    for name in FIXTURE_NAMES:
        d = build_fixture(name)
        r = verify(d)
        want = _block_count(list(d.group_type.groups))
        if not r.passed or len(d.blocks) != want or spot.get(name, want) != len(d.blocks):
            bad.append(f"{name}: {r.verdict}, {len(d.blocks)} blocks, expected {want}")
    elapsed = time.perf_counter() - t0
    ok = not bad and len(FIXTURE_NAMES) == 14 and elapsed < 2
    report(2, ok, f"{14 - len(bad)}/14 fixtures verify with expected block counts, {elapsed:.2f}s")
    assert not bad, bad
    assert len(FIXTURE_NAMES) == 14
    assert elapsed < 2


def test_criterion_3_fill_in(report):
    _clear_caches()
    t0 = time.perf_counter()
    details, ok = [], True
    for (t, s), ingredient in (((17, 8), "2^10"), ((7, 12), "5^4")):
        cert = plan(t, s)
        leaves = {format_type(l.target) for l in cert.leaves()}
        d = realize(cert)
        good = (not isinstance(d, PartialResult) and verify(d).passed
                and d.group_type == parse_type(f"2^{t} 5^{s}") and d.v == 2 * t + 5 * s
                and format_type(parse_type("5^8 14^1 20^1")) in leaves
                and format_type(parse_type(ingredient)) in leaves)
        ok &= good
        details.append(f"2^{t} 5^{s} {'verified' if good else 'FAILED'}")
    assert format_type(parse_type("2^7")) in {format_type(l.target) for l in plan(17, 8).leaves()}
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    report(3, ok, f"{', '.join(details)}, {elapsed:.2f}s")
    assert ok


def test_criterion_4_nonexistence(report):
    t0 = time.perf_counter()
    res = prove_nonexistence("2^4")
    elapsed = time.perf_counter() - t0
    ok = res.certified and elapsed < 60
    report(4, ok, f"prove_nonexistence(2^4): {res.status}, {elapsed:.2f}s")
    assert res.certified
    assert elapsed < 60


def test_criterion_5_decisions(report):
    _clear_caches()
    t0 = time.perf_counter()
    decisions = decide_range(1000)
    elapsed = time.perf_counter() - t0

    # independent cross-check of the feasible pair set
    feasible = {(t, s) for t in range(501) for s in range(201)
                if 2 * t + 5 * s <= 1000 and t + s >= 4 and check_feasible(GroupType((2,) * t + (5,) * s)).feasible}
    verdicts = Counter(d.verdict for d in decisions.values())
    open_ = {ts for ts, d in decisions.items() if d.verdict == POSSIBLE_EXCEPTION}
    none = {ts for ts, d in decisions.items() if d.verdict == DEFINITE_NONEXISTENCE}
    exists = [d for d in decisions.values() if d.verdict == EXISTS]
    for d in exists:
        validate_certificate(d.certificate)

    # large pairs: existence exactly when t + s = 1 (mod 3) and s = 0, 1 (mod 4)
    large = [ts for ts in decisions if sum(ts) >= 8]
    congruence_ok = all(
        (decisions[ts].verdict == EXISTS)
        == ((sum(ts) % 3 == 1 and ts[1] % 4 in (0, 1)) and ts not in OPEN_PAIRS)
        for ts in large
    )
    ok = (set(decisions) == feasible and open_ == OPEN_PAIRS and none == NONEXISTENT_PAIRS
          and len(exists) + len(open_) + len(none) == len(decisions) and congruence_ok
          and elapsed < 30)
    report(5, ok, f"{len(decisions)} feasible pairs: {verdicts[EXISTS]} exist, "
                  f"{len(open_)} possible exceptions, {len(none)} nonexistent, {elapsed:.2f}s")
    assert set(decisions) == feasible
    assert open_ == OPEN_PAIRS
    assert none == NONEXISTENT_PAIRS
    assert len(exists) + len(open_) + len(none) == len(decisions)
    assert congruence_ok
    assert elapsed < 30


def test_criterion_6_mutations(report):
    t0 = time.perf_counter()
    false_passes, total = 0, 0
    for name in FIXTURE_NAMES:
        d = build_fixture(name)
        rng = random.Random(name)
        for _ in range(1000):
            blocks = list(d.blocks)
            bi, pos = rng.randrange(len(blocks)), rng.randrange(d.k)
            block = list(blocks[bi])
            block[pos] = rng.choice([p for p in range(d.v) if p != block[pos]])
            blocks[bi] = tuple(block)
            mutant = Design.unchecked(d.v, d.groups, blocks, k=d.k)
            false_passes += verify(mutant).passed
            total += 1
    elapsed = time.perf_counter() - t0
    ok = false_passes == 0 and total == 14000 and elapsed < 30
    report(6, ok, f"{total} mutations, {false_passes} false passes, {elapsed:.2f}s")
    assert false_passes == 0
    assert elapsed < 30


def _develop_in_subprocess(path: str) -> str:
    code = ("import sys; from gdd4.development import develop, load_system; "
            "from gdd4.design import dumps; sys.stdout.write(dumps(develop(load_system(sys.argv[1]))))")
    return subprocess.run([sys.executable, "-c", code, path], check=True,
                          capture_output=True, text=True).stdout


def test_criterion_7_determinism(report, tmp_path):
    runs = [search(SearchProblem("5^4", seed=11, threads=1)) for _ in range(2)]
    same_search = (all(r.found for r in runs) and runs[0].stats.nodes == runs[1].stats.nodes
                   and dumps(runs[0].design) == dumps(runs[1].design))

    path = tmp_path / "21455.bbs"
    path.write_text(fixture_text("21455"), encoding="utf-8")
    load_system_fixture.cache_clear()
    in_process = dumps(develop(load_system_fixture("21455")))
    same_develop = in_process == _develop_in_subprocess(str(path)) == _develop_in_subprocess(str(path))

    ok = same_search and same_develop
    report(7, ok, f"search 5^4 seed 11: {runs[0].stats.nodes} nodes twice, "
                  f"develop byte-identical: {same_develop}")
    assert same_search
    assert same_develop
