"""Concrete designs and the canonical design file format.

A design file is UTF-8 text with LF line endings::

    type: 5^5 2^2
    provenance: shipped-table
    groups:
    0 1 2 3 4
    ...
    blocks:
    0 5 10 15
    ...
    labels:
    0 a0
    ...

``type`` is informational and must agree with the groups. ``provenance`` and
``labels`` are optional. Blank lines and lines starting with ``#`` are
ignored. Sections appear in the order written by :func:`dumps`; the reader
accepts any order.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grouptype import GroupType, format_type, parse_type

PROVENANCES = ("shipped-table", "developed", "searched", "fill-in", "manual")


class DesignError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Design:
    """Point set ``0..point_count-1``, a group partition and a block list.

    Construction checks that the groups partition the points and that each
    block consists of ``k`` distinct in-range points. Use
    :meth:`Design.unchecked` to hold a malformed design for diagnostics.
    """

    point_count: int
    groups: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, ...], ...]
    k: int = 4
    provenance: str = "manual"
    labels: tuple[str, ...] | None = None
    _point_group: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        groups = tuple(tuple(sorted(int(p) for p in g)) for g in self.groups)
        blocks = tuple(tuple(sorted(int(p) for p in b)) for b in self.blocks)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "blocks", blocks)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
        pg = np.full(self.point_count, -1, dtype=np.int64)
        for gi, g in enumerate(groups):
            for p in g:
                if 0 <= p < self.point_count:
                    pg[p] = gi
        object.__setattr__(self, "_point_group", pg)

    @classmethod
    def create(
        cls,
        point_count: int,
        groups: Iterable[Iterable[int]],
        blocks: Iterable[Iterable[int]],
        *,
        k: int = 4,
        provenance: str = "manual",
        labels: Sequence[str] | None = None,
    ) -> Design:
        design = cls(
            point_count,
            tuple(tuple(g) for g in groups),
            tuple(tuple(b) for b in blocks),
            k=k,
            provenance=provenance,
            labels=tuple(labels) if labels is not None else None,
        )
        design.check_structure()
        return design

    @classmethod
    def unchecked(
        cls,
        point_count: int,
        groups: Iterable[Iterable[int]],
        blocks: Iterable[Iterable[int]],
        *,
        k: int = 4,
        provenance: str = "manual",
        labels: Sequence[str] | None = None,
    ) -> Design:
        return cls(
            point_count,
            tuple(tuple(g) for g in groups),
            tuple(tuple(b) for b in blocks),
            k=k,
            provenance=provenance,
            labels=tuple(labels) if labels is not None else None,
        )

    def check_structure(self) -> None:
        """Raise DesignError unless the structural invariants hold."""
        if self.k < 2:
            raise DesignError(f"block size {self.k} < 2")
        if self.provenance not in PROVENANCES:
            raise DesignError(f"unknown provenance {self.provenance!r}")
        seen = [False] * self.point_count
        for g in self.groups:
            if not g:
                raise DesignError("empty group")
            for p in g:
                if not 0 <= p < self.point_count:
                    raise DesignError(f"group point {p} out of range")
                if seen[p]:
                    raise DesignError(f"point {p} lies in two groups")
                seen[p] = True
        if not all(seen):
            raise DesignError(f"point {seen.index(False)} lies in no group")
        for i, b in enumerate(self.blocks):
            if len(b) != self.k or len(set(b)) != self.k:
                raise DesignError(f"block {i} {b} does not have {self.k} distinct points")
            if b[0] < 0 or b[-1] >= self.point_count:
                raise DesignError(f"block {i} {b} has a point out of range")
        if self.labels is not None and len(self.labels) != self.point_count:
            raise DesignError("label map does not cover every point")

    @property
    def v(self) -> int:
        return self.point_count

    @property
    def point_group(self) -> np.ndarray:
        """Group index of each point (read-only view)."""
        view = self._point_group.view()
        view.flags.writeable = False
        return view

    @property
    def group_type(self) -> GroupType:
        return type_of(self)

    def block_array(self) -> np.ndarray:
        """Blocks as a ``(b, k)`` int32 array; ragged block lists raise."""
        if not self.blocks:
            return np.zeros((0, self.k), dtype=np.int32)
        return np.asarray(self.blocks, dtype=np.int32)

    def label(self, p: int) -> str:
        return self.labels[p] if self.labels is not None else str(p)

    def with_provenance(self, provenance: str) -> Design:
        return Design(self.point_count, self.groups, self.blocks, self.k, provenance, self.labels)

    def key(self) -> tuple:
        return (self.point_count, self.groups, self.blocks, self.k, self.provenance, self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Design):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (
            f"Design(type={format_type(self.group_type)}, v={self.point_count}, "
            f"blocks={len(self.blocks)}, provenance={self.provenance!r})"
        )


def type_of(design: Design) -> GroupType:
    return GroupType(tuple(len(g) for g in design.groups))


# -- canonical file format ---------------------------------------------------

_SECTIONS = ("groups", "blocks", "labels")


def dumps(design: Design) -> str:
    lines = [f"type: {format_type(type_of(design))}", f"provenance: {design.provenance}"]
    if design.k != 4:
        lines.append(f"k: {design.k}")
    lines.append("groups:")
    lines.extend(" ".join(map(str, g)) for g in design.groups)
    lines.append("blocks:")
    lines.extend(" ".join(map(str, b)) for b in design.blocks)
    if design.labels is not None:
        lines.append("labels:")
        lines.extend(f"{p} {lab}" for p, lab in enumerate(design.labels))
    return "\n".join(lines) + "\n"


def loads(text: str, *, strict: bool = True) -> Design:
    """Parse a design file. With ``strict=False`` block-level defects are
    kept so that the verifier can report them."""
    header: dict[str, str] = {}
    sections: dict[str, list[str]] = {name: [] for name in _SECTIONS}
    present: set[str] = set()
    current: str | None = None
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.endswith(":") and line[:-1] in _SECTIONS:
            current = line[:-1]
            present.add(current)
            continue
        if current is None or (":" in line and line.split(":", 1)[0] in ("type", "provenance", "k")):
            key, sep, value = line.partition(":")
            if not sep:
                raise DesignError(f"line {lineno}: expected 'key: value', got {line!r}")
            header[key.strip()] = value.strip()
            current = None
            continue
        sections[current].append(line)
    if "groups" not in present or "blocks" not in present:
        raise DesignError("design file needs 'groups:' and 'blocks:' sections")
    try:
        groups = [tuple(int(x) for x in ln.split()) for ln in sections["groups"]]
        blocks = [tuple(int(x) for x in ln.split()) for ln in sections["blocks"]]
    except ValueError as exc:
        raise DesignError(f"non-integer point index: {exc}") from None
    point_count = sum(len(g) for g in groups)
    labels = None
    if "labels" in present:
        table: dict[int, str] = {}
        for ln in sections["labels"]:
            idx, _, lab = ln.partition(" ")
            table[int(idx)] = lab.strip()
        labels = tuple(table.get(p, str(p)) for p in range(point_count))
    k = int(header.get("k", "4"))
    provenance = header.get("provenance", "manual")
    if strict:
        design = Design.create(point_count, groups, blocks, k=k, provenance=provenance, labels=labels)
    else:
        design = Design.unchecked(point_count, groups, blocks, k=k, provenance=provenance, labels=labels)
    if "type" in header and parse_type(header["type"]) != type_of(design):
        raise DesignError(
            f"declared type {header['type']!r} disagrees with groups ({format_type(type_of(design))})"
        )
    return design


def save(design: Design, path: str | Path) -> None:
    Path(path).write_bytes(dumps(design).encode("utf-8"))


def load(path: str | Path, *, strict: bool = True) -> Design:
    return loads(Path(path).read_bytes().decode("utf-8"), strict=strict)
