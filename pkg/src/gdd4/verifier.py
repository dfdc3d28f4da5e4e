"""Exact certification of the k-GDD axioms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .design import Design
from .grouptype import format_type
from .kernels import pair_counts

VIOLATION_KINDS = ("wrong-block-size", "block-meets-group-twice", "pair-missing", "pair-repeated")


@dataclass(frozen=True)
class Violation:
    kind: str
    block: int | None = None
    pair: tuple[int, int] | None = None
    count: int | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.block is not None:
            out["block"] = self.block
        if self.pair is not None:
            out["pair"] = list(self.pair)
        if self.count is not None:
            out["count"] = self.count
        return out

    def __str__(self) -> str:
        parts = [self.kind]
        if self.block is not None:
            parts.append(f"block {self.block}")
        if self.pair is not None:
            parts.append(f"pair {self.pair}")
        if self.count is not None:
            parts.append(f"x{self.count}")
        return " ".join(parts)


@dataclass(frozen=True)
class VerificationReport:
    type_text: str
    k: int
    violations: tuple[Violation, ...]
    block_count: int
    replication: tuple[int, ...]
    replication_ok: bool | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def count(self, kind: str) -> int:
        return sum(1 for v in self.violations if v.kind == kind)

    def to_dict(self) -> dict:
        return {
            "type": self.type_text,
            "k": self.k,
            "verdict": self.verdict,
            "block_count": self.block_count,
            "replication": list(self.replication),
            "replication_ok": self.replication_ok,
            "violations": [v.to_dict() for v in self.violations],
            "notes": list(self.notes),
        }

    def render(self, limit: int = 20) -> str:
        lines = [f"{self.type_text}: {self.verdict} ({self.block_count} blocks, k={self.k})"]
        reps = sorted(set(self.replication))
        lines.append(f"  replication numbers: {', '.join(map(str, reps))}")
        if self.violations:
            by_kind = {kind: self.count(kind) for kind in VIOLATION_KINDS if self.count(kind)}
            lines.append("  violations: " + ", ".join(f"{k}={n}" for k, n in by_kind.items()))
            lines.extend(f"    {v}" for v in self.violations[:limit])
            if len(self.violations) > limit:
                lines.append(f"    ... {len(self.violations) - limit} more")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


@lru_cache(maxsize=64)
def _pairs(v: int) -> tuple[np.ndarray, np.ndarray]:
    jj, ii = np.tril_indices(v, -1)
    jj.flags.writeable = False
    ii.flags.writeable = False
    return jj, ii


def verify(design: Design, k: int | None = None) -> VerificationReport:
    """Check block sizes, group intersections and exact pair coverage.

    Blocks of the wrong size are reported and left out of the pair count,
    so that one bad block does not also show up as a dozen pair defects.
    """
    k = design.k if k is None else k
    v = design.point_count
    pg = design.point_group
    violations: list[Violation] = []

    blocks = design.blocks
    if all(len(b) == k for b in blocks):
        full = np.asarray(blocks, dtype=np.int64).reshape(-1, k)
        srt = np.sort(full, axis=1)
        valid = (srt[:, 0] >= 0) & (srt[:, -1] < v) & ~(srt[:, 1:] == srt[:, :-1]).any(axis=1)
    else:
        valid = np.array([len(b) == k and len(set(b)) == k and min(b) >= 0 and max(b) < v
                          for b in blocks], dtype=bool)
        full = np.asarray([b for b, ok in zip(blocks, valid) if ok], dtype=np.int64).reshape(-1, k)
    for bi in np.nonzero(~valid)[0]:
        violations.append(Violation("wrong-block-size", block=int(bi), count=len(set(blocks[bi]))))

    good_index = np.nonzero(valid)[0]
    arr = (full[valid] if len(full) == len(blocks) else full).astype(np.int32)
    replication = np.bincount(arr.ravel(), minlength=v) if v else np.zeros(0, np.int64)
    if arr.size:
        gsets = pg[arr]
        gsets.sort(axis=1)
        bad = np.nonzero((gsets[:, 1:] == gsets[:, :-1]).any(axis=1))[0]
        for gi in bad:
            violations.append(Violation("block-meets-group-twice", block=int(good_index[gi])))

    counts = pair_counts(np.ascontiguousarray(arr), v) if v >= 2 else np.zeros(0, np.int32)
    if v >= 2:
        jj, ii = _pairs(v)
        # tril_indices enumerates (j, i) with i < j in row-major order, which
        # is exactly the triangular index order j*(j-1)/2 + i
        cross = pg[ii] != pg[jj]
        missing = np.nonzero(cross & (counts == 0))[0]
        repeated = np.nonzero(cross & (counts > 1))[0]
        for idx in missing:
            violations.append(Violation("pair-missing", pair=(int(ii[idx]), int(jj[idx]))))
        for idx in repeated:
            violations.append(Violation("pair-repeated", pair=(int(ii[idx]), int(jj[idx])),
                                        count=int(counts[idx])))

    notes: list[str] = []
    replication_ok = None
    if not violations:
        sizes = np.array([len(g) for g in design.groups], dtype=np.int64)[pg] if v else np.zeros(0, np.int64)
        num = v - sizes
        if (num % (k - 1)).any():
            replication_ok = False
            notes.append("replication (v - g)/(k - 1) is not integral")
        else:
            replication_ok = bool((num // (k - 1) == replication).all())
            if not replication_ok:
                notes.append("replication numbers disagree with (v - g)/(k - 1)")
    return VerificationReport(
        type_text=format_type(design.group_type) if design.groups else "",
        k=k,
        violations=tuple(violations),
        block_count=len(design.blocks),
        replication=tuple(int(x) for x in replication),
        replication_ok=replication_ok,
        notes=tuple(notes),
    )


class FixtureVerificationError(RuntimeError):
    def __init__(self, name: str, report: VerificationReport):
        super().__init__(f"fixture {name} fails verification:\n{report.render()}")
        self.name = name
        self.report = report


def verify_all_fixtures(names=None) -> dict[str, str]:
    """Verify shipped fixtures; raises on the first failure."""
    from .fixtures import FIXTURE_NAMES, build_fixture

    result: dict[str, str] = {}
    for name in FIXTURE_NAMES if names is None else names:
        design = build_fixture(name)
        report = verify(design)
        if not report.passed:
            raise FixtureVerificationError(name, report)
        result[name] = report.verdict
    return result
