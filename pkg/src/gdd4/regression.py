"""End-to-end regression run over fixtures, feasibility, decisions and one construction."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from importlib import resources

from .feasibility import enumerate_feasible
from .fixtures import FIXTURE_NAMES, build_fixture, fixture_type
from .grouptype import GroupType, expected_block_count, format_type, parse_type
from .planner import (DEFINITE_NONEXISTENCE, EXISTS, OPEN_CASES, POSSIBLE_EXCEPTION,
                      decide_range, plan)
from .realize import PartialResult, realize
from .verifier import verify


@dataclass
class StageResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_dict(self) -> dict:
        return {"stage": self.name, "passed": self.passed, "detail": self.detail,
                "seconds": round(self.seconds, 3)}


@dataclass
class RegressionSummary:
    stages: list[StageResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stages)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "stages": [s.to_dict() for s in self.stages]}

    def render(self) -> str:
        lines = [f"{'PASS' if s.passed else 'FAIL'}  {s.name:<18} {s.seconds:7.2f}s  {s.detail}"
                 for s in self.stages]
        lines.append("regression " + ("passed" if self.passed else "FAILED"))
        return "\n".join(lines)


def small_feasible_reference() -> list[GroupType]:
    text = resources.files("gdd4").joinpath("data/small_types.txt").read_text("utf-8")
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_type(line.replace(" none", "")))
    return out


def _fixtures() -> str:
    bad = []
    for name in FIXTURE_NAMES:
        d = build_fixture(name)
        report = verify(d)
        if not report.passed or d.group_type != fixture_type(name):
            bad.append(f"{name}: {report.verdict}")
    if bad:
        raise AssertionError("; ".join(bad))
    return f"{len(FIXTURE_NAMES)}/{len(FIXTURE_NAMES)} fixtures verify"


def _block_counts() -> str:
    bad = []
    for name in FIXTURE_NAMES:
        d = build_fixture(name)
        want = expected_block_count(d.group_type)
        if len(d.blocks) != want:
            bad.append(f"{name}: {len(d.blocks)} blocks, expected {want}")
    if bad:
        raise AssertionError("; ".join(bad))
    return "block counts match b = sum g(v-g) / 12"


def _enumeration() -> str:
    got = {format_type(t) for t in enumerate_feasible(30)}
    want = {format_type(t) for t in small_feasible_reference()}
    if got != want:
        raise AssertionError(f"extra {sorted(got - want)}, missing {sorted(want - got)}")
    return f"{len(got)} feasible types on at most 30 points"


def _decisions(v_max: int = 1000) -> str:
    decisions = decide_range(v_max)
    open_ = {ts for ts, d in decisions.items() if d.verdict == POSSIBLE_EXCEPTION}
    none = {ts for ts, d in decisions.items() if d.verdict == DEFINITE_NONEXISTENCE}
    problems = []
    if open_ != set(OPEN_CASES):
        problems.append(f"open cases differ: {sorted(open_ ^ set(OPEN_CASES))}")
    if none != {(4, 0), (6, 1)}:
        problems.append(f"nonexistence set {sorted(none)}")
    stray = [ts for ts, d in decisions.items()
             if d.verdict not in (EXISTS, POSSIBLE_EXCEPTION, DEFINITE_NONEXISTENCE)]
    if stray:
        problems.append(f"unexpected verdicts at {stray[:5]}")
    if problems:
        raise AssertionError("; ".join(problems))
    exists = sum(d.verdict == EXISTS for d in decisions.values())
    return f"{len(decisions)} feasible pairs with v <= {v_max}, {exists} constructed"


def _construction() -> str:
    result = realize(plan(17, 8))
    if isinstance(result, PartialResult):
        raise AssertionError(result.render())
    report = verify(result)
    if not report.passed or result.group_type != parse_type("2^17 5^8"):
        raise AssertionError(report.render())
    return f"2^17 5^8 on {result.v} points, {len(result.blocks)} blocks"


STAGES = (
    ("fixtures", _fixtures),
    ("block-counts", _block_counts),
    ("enumerate-30", _enumeration),
    ("decide-sweep", _decisions),
    ("realize-2^17 5^8", _construction),
)


def run_regression() -> RegressionSummary:
    summary = RegressionSummary()
    for name, stage in STAGES:
        t0 = time.perf_counter()
        try:
            detail, ok = stage(), True
        except Exception as exc:  # a stage failure is reported, not raised
            detail, ok = f"{type(exc).__name__}: {exc}", False
        summary.stages.append(StageResult(name, ok, detail, time.perf_counter() - t0))
    return summary
