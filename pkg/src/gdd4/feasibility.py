"""Necessary conditions for the existence of a 4-GDD of a given type."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field

from .grouptype import GroupType, as_type, format_type

CONDITION_NAMES = {
    1: "at least four groups",
    2: "v - g_i divisible by 3",
    3: "sum g_i(v - g_i) divisible by 4",
    4: "3 g_i + g_j <= v",
    5: "four groups must be equal",
    6: "five groups: type h^4 n^1 with n <= 3h/2",
    7: "3 g_1 + g_2 = v with g_1 > g_2 forces g_3 <= 2 g_1 / 3",
    8: "3 h_1 + h_2 = v shape needs >= 6 groups (equal products when 6)",
}


@dataclass(frozen=True)
class ConditionResult:
    index: int
    passed: bool
    vacuous: bool = False
    witness: tuple | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "condition": self.index,
            "name": CONDITION_NAMES[self.index],
            "status": "pass-vacuous" if self.vacuous else ("pass" if self.passed else "fail"),
            "witness": list(self.witness) if self.witness is not None else None,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class FeasibilityReport:
    group_type: GroupType
    conditions: tuple[ConditionResult, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def feasible(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def failed(self) -> list[int]:
        return [c.index for c in self.conditions if not c.passed]

    def to_dict(self) -> dict:
        return {
            "type": format_type(self.group_type),
            "verdict": self.verdict,
            "conditions": [c.to_dict() for c in self.conditions],
            "notes": list(self.notes),
        }

    def render(self) -> str:
        lines = [f"{format_type(self.group_type)}: {self.verdict}"]
        for c in self.conditions:
            status = "pass (vacuous)" if c.vacuous else ("pass" if c.passed else "FAIL")
            extra = f"  witness={c.witness}" if c.witness is not None else ""
            detail = f"  {c.detail}" if c.detail else ""
            lines.append(f"  [{c.index}] {CONDITION_NAMES[c.index]}: {status}{extra}{detail}")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def _shape8(g: tuple[int, ...], v: int, *, lenient: bool) -> tuple[bool, tuple[int, ...]]:
    """Guard of the h_1 h_2 h_3 ... h_n shape condition.

    Strict reading: g_1 occurs once, g_2 occurs once, 3 g_1 + g_2 = v.
    Lenient reading drops the requirement that g_1 > g_2.
    Returns (guard applies, the groups h_3..h_n).
    """
    if len(g) < 3 or 3 * g[0] + g[1] != v or g[1] <= g[2]:
        return False, ()
    if not lenient and g[0] <= g[1]:
        return False, ()
    return True, g[2:]


def _condition8(g: tuple[int, ...], v: int, lenient: bool = False) -> ConditionResult:
    applies, rest = _shape8(g, v, lenient=lenient)
    if not applies:
        return ConditionResult(8, True, vacuous=True)
    n = len(g)
    if n < 6:
        return ConditionResult(8, False, witness=("n", n), detail=f"shape applies with n={n} < 6")
    if n == 6:
        h2 = g[1]
        products = [h * (h2 - h) for h in rest]
        if len(set(products)) > 1:
            i = next(i for i, p in enumerate(products) if p != products[0])
            return ConditionResult(
                8, False, witness=(3, 3 + i),
                detail=f"h_3(h_2-h_3)={products[0]} != h_{3 + i}(h_2-h_{3 + i})={products[i]}",
            )
    return ConditionResult(8, True)


def check_feasible(gt: GroupType | str) -> FeasibilityReport:
    gt = as_type(gt)
    g = gt.groups
    m, v = gt.m, gt.v
    results: list[ConditionResult] = []

    results.append(ConditionResult(1, m >= 4, witness=None if m >= 4 else ("m", m)))

    bad = next((i for i, x in enumerate(g) if (v - x) % 3), None)
    results.append(ConditionResult(2, bad is None, witness=None if bad is None else (bad + 1,)))

    total = sum(x * (v - x) for x in g)
    ok3 = total % 4 == 0
    results.append(ConditionResult(3, ok3, witness=None if ok3 else ("sum", total),
                                   detail="" if ok3 else f"sum = {total}, mod 4 = {total % 4}"))

    # 3 g_i + g_j is largest for the two largest groups.
    if m >= 2 and 3 * g[0] + g[1] > v:
        results.append(ConditionResult(4, False, witness=(1, 2), detail=f"3*{g[0]}+{g[1]} > {v}"))
    else:
        results.append(ConditionResult(4, True, vacuous=m < 2))

    if m == 4:
        ok = len(set(g)) == 1
        results.append(ConditionResult(5, ok, witness=None if ok else (1, 4)))
    else:
        results.append(ConditionResult(5, True, vacuous=True))

    if m == 5:
        counts = Counter(g)
        h = next((size for size, c in counts.items() if c >= 4), None)
        if h is None:
            results.append(ConditionResult(6, False, witness=("shape",), detail="not of the form h^4 n^1"))
        else:
            n = v - 4 * h
            ok = 2 * n <= 3 * h
            results.append(ConditionResult(6, ok, witness=None if ok else ("n", n, "h", h),
                                           detail="" if ok else f"n={n} > 3h/2={3 * h / 2}"))
    else:
        results.append(ConditionResult(6, True, vacuous=True))

    if m >= 3 and 3 * g[0] + g[1] == v and g[0] > g[1]:
        ok = 3 * g[2] <= 2 * g[0]
        results.append(ConditionResult(7, ok, witness=None if ok else (3,),
                                       detail="" if ok else f"g_3={g[2]} > 2g_1/3"))
    else:
        results.append(ConditionResult(7, True, vacuous=True))

    strict = _condition8(g, v)
    results.append(strict)
    notes: list[str] = []
    lenient = _condition8(g, v, lenient=True)
    if lenient.passed != strict.passed:
        notes.append(
            "condition 8 verdict depends on whether h_1 may equal h_2 "
            f"(strict reading: {'pass' if strict.passed else 'fail'}, "
            f"lenient reading: {'pass' if lenient.passed else 'fail'})"
        )
    return FeasibilityReport(gt, tuple(results), tuple(notes))


def is_feasible(gt: GroupType | str) -> bool:
    return check_feasible(gt).feasible


def feasible_2t5s(t: int, s: int) -> bool:
    """Congruence conditions for type 2^t 5^s (necessary only)."""
    return (s + t) % 3 == 1 and s % 4 in (0, 1)


def _partitions(n: int, largest: int, residue: int) -> Iterator[tuple[int, ...]]:
    # parts restricted to one residue class mod 3
    if n == 0:
        yield ()
        return
    start = min(n, largest)
    start -= (start - residue) % 3
    for p in range(start, 0, -3):
        for rest in _partitions(n - p, p, residue):
            yield (p,) + rest


def enumerate_feasible(v_max: int) -> list[GroupType]:
    """All feasible types on 4..v_max points, ordered by (v, notation).

    Condition 2 forces every g_i to be congruent to v mod 3, so only parts of
    that residue are generated.
    """
    found: list[GroupType] = []
    for v in range(4, v_max + 1):
        residue = v % 3
        batch = []
        for parts in _partitions(v, v, residue if residue else 3):
            if len(parts) < 4:
                continue
            gt = GroupType(parts)
            if check_feasible(gt).feasible:
                batch.append(gt)
        batch.sort(key=format_type)
        found.extend(batch)
    return found
