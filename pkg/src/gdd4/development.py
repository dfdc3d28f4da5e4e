"""Base-block systems over cyclic groups and their development into designs.

Base-block file format (text, LF line endings)::

    name: 2858
    type: 2^8 5^8
    modulus: 8
    classes: a b c d e p q
    groups:
    across a b c d e
    coset p q step=4
    base_blocks:
    orbit=2: {a0,a2,a4,a6}
    orbit=8: {a0,a1,e2,q0}
    pre_blocks:
    {c0,c5,inf1,inf3}

``classes`` tokens: ``a`` is a class of ``modulus`` points a0..a{n-1};
``y/5`` is a class developed modulo 5; ``inf`` is a single fixed point and
``inf*4`` four fixed points inf1..inf4.

Group patterns, one per line:

* ``across a b c`` - groups {a_i, b_i, c_i} for every subscript i;
* ``coset p q step=4`` - groups {w_i, w_{i+4}, w_{i+8}, ...} for each listed
  class w and i in 0..3;
* ``set f* inf`` - one explicit group; ``f*`` stands for the whole class.

A point with subscript i in a class of modulus n moves to subscript
(i + j) mod n under the shift by j; fixed points never move.
``type:`` and ``name:`` are optional headers; a ``type:`` header is checked
against the expanded groups.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .design import Design
from .grouptype import GroupType, format_type, parse_type


class DevelopmentError(ValueError):
    pass


@dataclass(frozen=True)
class PointClass:
    """A class of points; ``modulus`` is None for fixed (infinite) points."""

    label: str
    modulus: int | None
    size: int

    @property
    def infinite(self) -> bool:
        return self.modulus is None

    def token(self, i: int) -> str:
        if self.infinite:
            return self.label if self.size == 1 else f"{self.label}{i + 1}"
        return f"{self.label}{i}"


@dataclass(frozen=True)
class GroupPattern:
    kind: str  # across | coset | set
    classes: tuple[str, ...] = ()
    step: int = 0
    points: tuple[str, ...] = ()


@dataclass(frozen=True)
class BaseBlock:
    points: tuple[tuple[str, int], ...]  # (class label, subscript / fixed index)
    orbit: int


@dataclass(frozen=True)
class BaseBlockSystem:
    modulus: int
    classes: tuple[PointClass, ...]
    group_spec: tuple[GroupPattern, ...]
    base_blocks: tuple[BaseBlock, ...]
    pre_blocks: tuple[tuple[tuple[str, int], ...], ...] = ()
    name: str = ""
    declared_type: GroupType | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        by_label = {}
        for c in self.classes:
            if c.label in by_label:
                raise DevelopmentError(f"class {c.label!r} declared twice")
            if c.modulus is not None and (c.modulus <= 0 or self.modulus % c.modulus):
                raise DevelopmentError(
                    f"class {c.label} modulus {c.modulus} does not divide {self.modulus}"
                )
            by_label[c.label] = c
        for bb in self.base_blocks:
            if bb.orbit <= 0 or self.modulus % bb.orbit:
                raise DevelopmentError(f"orbit length {bb.orbit} does not divide {self.modulus}")

    def class_map(self) -> dict[str, PointClass]:
        return {c.label: c for c in self.classes}

    def offsets(self) -> dict[str, int]:
        out, pos = {}, 0
        for c in self.classes:
            out[c.label] = pos
            pos += c.size
        return out

    @property
    def point_count(self) -> int:
        return sum(c.size for c in self.classes)

    def labels(self) -> tuple[str, ...]:
        return tuple(c.token(i) for c in self.classes for i in range(c.size))


# -- development --------------------------------------------------------------


def shift_block(
    block: Sequence[tuple[str, int]], j: int, classes: Mapping[str, PointClass]
) -> tuple[tuple[str, int], ...]:
    out = []
    for label, i in block:
        c = classes[label]
        out.append((label, i) if c.modulus is None else (label, (i + j) % c.modulus))
    return tuple(out)


def stabilizer_orbit(block: Sequence[tuple[str, int]], sys: BaseBlockSystem) -> int:
    """Length of the orbit of ``block`` under the cyclic group."""
    classes = sys.class_map()
    base = frozenset(block)
    for d in range(1, sys.modulus + 1):
        if sys.modulus % d == 0 and frozenset(shift_block(block, d, classes)) == base:
            return d
    return sys.modulus


def expand_groups(sys: BaseBlockSystem) -> list[list[int]]:
    classes = sys.class_map()
    offset = sys.offsets()
    groups: list[list[int]] = []
    for pat in sys.group_spec:
        for label in pat.classes:
            if label not in classes:
                raise DevelopmentError(f"group pattern names unknown class {label!r}")
        if pat.kind == "across":
            mods = {classes[c].modulus for c in pat.classes}
            if len(mods) != 1 or None in mods:
                raise DevelopmentError(f"'across' needs finite classes of one modulus: {pat.classes}")
            (mod,) = mods
            for i in range(mod):
                groups.append([offset[c] + i for c in pat.classes])
        elif pat.kind == "coset":
            for c in pat.classes:
                mod = classes[c].modulus
                if mod is None or pat.step <= 0 or mod % pat.step:
                    raise DevelopmentError(f"bad coset step {pat.step} for class {c}")
                for i in range(pat.step):
                    groups.append([offset[c] + j for j in range(i, mod, pat.step)])
        elif pat.kind == "set":
            members: list[int] = []
            for tok in pat.points:
                if tok.endswith("*"):
                    c = tok[:-1]
                    if c not in classes:
                        raise DevelopmentError(f"unknown class {c!r}")
                    members.extend(offset[c] + i for i in range(classes[c].size))
                else:
                    label, i = parse_point(tok, classes)
                    members.append(point_index(label, i, classes, offset))
            groups.append(members)
        else:
            raise DevelopmentError(f"unknown group pattern {pat.kind!r}")
    flat = sorted(p for g in groups for p in g)
    if flat != list(range(sys.point_count)):
        raise DevelopmentError("group patterns do not partition the point set")
    return groups


def point_index(label: str, i: int, classes: Mapping[str, PointClass], offset: Mapping[str, int]) -> int:
    c = classes[label]
    if not 0 <= i < c.size:
        raise DevelopmentError(f"subscript {i} out of range for class {label}")
    return offset[label] + i


def develop(sys: BaseBlockSystem, *, provenance: str = "developed") -> Design:
    """Develop every base block over its declared orbit length.

    Blocks come out ordered by (base block, shift); explicit pre-blocks are
    appended afterwards. The declared orbit length of each base block must
    equal its true orbit length, and no block may be produced twice.
    """
    classes = sys.class_map()
    offset = sys.offsets()
    groups = expand_groups(sys)
    blocks: list[tuple[int, ...]] = []
    seen: dict[frozenset, int] = {}

    def emit(pts: Iterable[tuple[str, int]], origin: int) -> None:
        idx = tuple(point_index(lab, i, classes, offset) for lab, i in pts)
        key = frozenset(idx)
        if len(key) != len(idx):
            raise DevelopmentError(f"block {origin} repeats a point")
        if key in seen:
            raise DevelopmentError(f"base block {origin} duplicates a block of base block {seen[key]}")
        seen[key] = origin
        blocks.append(idx)

    for n, bb in enumerate(sys.base_blocks):
        actual = stabilizer_orbit(bb.points, sys)
        if actual != bb.orbit:
            raise DevelopmentError(
                f"base block {n} {format_block(bb.points, classes)} declared orbit {bb.orbit}, "
                f"actual orbit {actual}"
            )
        for j in range(bb.orbit):
            emit(shift_block(bb.points, j, classes), n)
    for n, pb in enumerate(sys.pre_blocks):
        emit(pb, -1 - n)
    design = Design.create(
        sys.point_count, groups, blocks, provenance=provenance, labels=sys.labels()
    )
    if sys.declared_type is not None and design.group_type != sys.declared_type:
        raise DevelopmentError(
            f"groups expand to {format_type(design.group_type)}, "
            f"header says {format_type(sys.declared_type)}"
        )
    return design


# -- text format ----------------------------------------------------------------

_POINT = re.compile(r"^([A-Za-z]+?)(\d*)$")


def parse_point(token: str, classes: Mapping[str, PointClass]) -> tuple[str, int]:
    token = token.strip()
    if token in classes and classes[token].infinite and classes[token].size == 1:
        return token, 0
    m = _POINT.match(token)
    if not m or not m.group(2):
        raise DevelopmentError(f"malformed point {token!r}")
    label, num = m.group(1), int(m.group(2))
    c = classes.get(label)
    if c is None:
        raise DevelopmentError(f"point {token!r} names unknown class {label!r}")
    if c.infinite:
        if not 1 <= num <= c.size:
            raise DevelopmentError(f"fixed point {token!r} out of range")
        return label, num - 1
    return label, num % c.modulus


def format_block(block: Sequence[tuple[str, int]], classes: Mapping[str, PointClass]) -> str:
    return "{" + ",".join(classes[lab].token(i) for lab, i in block) + "}"


def _parse_block(text: str, classes: Mapping[str, PointClass]) -> tuple[tuple[str, int], ...]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise DevelopmentError(f"block must be written as {{...}}: {text!r}")
    return tuple(parse_point(t, classes) for t in text[1:-1].split(","))


def _parse_classes(spec: str, modulus: int) -> list[PointClass]:
    out = []
    for tok in spec.replace(",", " ").split():
        if "*" in tok:
            label, count = tok.split("*")
            out.append(PointClass(label, None, int(count)))
        elif "/" in tok:
            label, mod = tok.split("/")
            out.append(PointClass(label, int(mod), int(mod)))
        elif tok == "inf":
            out.append(PointClass("inf", None, 1))
        else:
            out.append(PointClass(tok, modulus, modulus))
    return out


def _parse_group_line(line: str) -> GroupPattern:
    words = line.split()
    kind = words[0]
    if kind == "across":
        return GroupPattern("across", classes=tuple(words[1:]))
    if kind == "coset":
        step = None
        names = []
        for w in words[1:]:
            if w.startswith("step="):
                step = int(w[5:])
            else:
                names.append(w)
        if step is None:
            raise DevelopmentError(f"coset pattern needs step=: {line!r}")
        return GroupPattern("coset", classes=tuple(names), step=step)
    if kind == "set":
        return GroupPattern(
            "set",
            classes=tuple(w[:-1] for w in words[1:] if w.endswith("*")),
            points=tuple(words[1:]),
        )
    raise DevelopmentError(f"unknown group pattern {line!r}")


_ORBIT = re.compile(r"^orbit\s*=\s*(\d+)\s*:\s*(\{.*\})$")


def loads_system(text: str) -> BaseBlockSystem:
    header: dict[str, str] = {}
    section = None
    group_lines: list[str] = []
    block_lines: list[str] = []
    pre_lines: list[str] = []
    notes: list[str] = []
    for raw in text.split("\n"):
        line = raw.split("#", 1)[0].strip()
        if raw.strip().startswith("# note:"):
            notes.append(raw.strip()[len("# note:"):].strip())
        if not line:
            continue
        if line in ("groups:", "base_blocks:", "pre_blocks:"):
            section = line[:-1]
            continue
        if section is None:
            key, sep, value = line.partition(":")
            if not sep:
                raise DevelopmentError(f"expected 'key: value': {line!r}")
            key = key.strip()
            if key == "classes" and key in header:
                header[key] += " " + value.strip()
            else:
                header[key] = value.strip()
        elif section == "groups":
            group_lines.append(line)
        elif section == "base_blocks":
            block_lines.append(line)
        else:
            pre_lines.append(line)
    try:
        modulus = int(header["modulus"])
        class_spec = header["classes"]
    except KeyError as exc:
        raise DevelopmentError(f"missing header {exc}") from None
    classes = _parse_classes(class_spec, modulus)
    cmap = {c.label: c for c in classes}
    base_blocks = []
    for line in block_lines:
        m = _ORBIT.match(line)
        if m is None:
            raise DevelopmentError(f"expected 'orbit=<n>: {{...}}': {line!r}")
        base_blocks.append(BaseBlock(_parse_block(m.group(2), cmap), int(m.group(1))))
    return BaseBlockSystem(
        modulus=modulus,
        classes=tuple(classes),
        group_spec=tuple(_parse_group_line(g) for g in group_lines),
        base_blocks=tuple(base_blocks),
        pre_blocks=tuple(_parse_block(p, cmap) for p in pre_lines),
        name=header.get("name", ""),
        declared_type=parse_type(header["type"]) if "type" in header else None,
        notes=tuple(notes),
    )


def dumps_system(sys: BaseBlockSystem) -> str:
    cmap = sys.class_map()
    toks = []
    for c in sys.classes:
        if c.infinite:
            toks.append(c.label if (c.size == 1 and c.label == "inf") else f"{c.label}*{c.size}")
        elif c.modulus != sys.modulus:
            toks.append(f"{c.label}/{c.modulus}")
        else:
            toks.append(c.label)
    lines = []
    if sys.name:
        lines.append(f"name: {sys.name}")
    if sys.declared_type is not None:
        lines.append(f"type: {format_type(sys.declared_type)}")
    lines += [f"modulus: {sys.modulus}", f"classes: {' '.join(toks)}", "groups:"]
    for pat in sys.group_spec:
        if pat.kind == "across":
            lines.append("across " + " ".join(pat.classes))
        elif pat.kind == "coset":
            lines.append("coset " + " ".join(pat.classes) + f" step={pat.step}")
        else:
            lines.append("set " + " ".join(pat.points))
    lines.append("base_blocks:")
    lines += [f"orbit={bb.orbit}: {format_block(bb.points, cmap)}" for bb in sys.base_blocks]
    if sys.pre_blocks:
        lines.append("pre_blocks:")
        lines += [format_block(pb, cmap) for pb in sys.pre_blocks]
    return "\n".join(lines) + "\n"


def load_system(path: str | Path) -> BaseBlockSystem:
    return loads_system(Path(path).read_text(encoding="utf-8"))


# -- incidence tables -------------------------------------------------------------


@dataclass(frozen=True)
class IncidenceTable:
    """For each point, the (1-based) indices of the blocks containing it."""

    num_blocks: int
    per_point_lists: Mapping[int, tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "per_point_lists",
            {int(p): tuple(sorted(ls)) for p, ls in self.per_point_lists.items()},
        )
        for p, ls in self.per_point_lists.items():
            if any(not 1 <= j <= self.num_blocks for j in ls):
                raise DevelopmentError(f"point {p} lists a block index outside 1..{self.num_blocks}")


def blocks_from_incidence(table: IncidenceTable, k: int = 4) -> list[tuple[int, ...]]:
    """Invert an incidence table: block j is the set of points listing j."""
    total = sum(len(ls) for ls in table.per_point_lists.values())
    if total != table.num_blocks * k:
        raise DevelopmentError(f"incidence lists hold {total} entries, expected {table.num_blocks * k}")
    members: list[list[int]] = [[] for _ in range(table.num_blocks)]
    for p in sorted(table.per_point_lists):
        for j in table.per_point_lists[p]:
            members[j - 1].append(p)
    for j, pts in enumerate(members, 1):
        if len(pts) != k:
            raise DevelopmentError(f"block {j} receives {len(pts)} points, expected {k}")
    return [tuple(pts) for pts in members]


def incidence_of(blocks: Sequence[Sequence[int]]) -> IncidenceTable:
    lists: dict[int, list[int]] = {}
    for j, b in enumerate(blocks, 1):
        for p in b:
            lists.setdefault(p, []).append(j)
    return IncidenceTable(len(blocks), {p: tuple(ls) for p, ls in lists.items()})


def loads_incidence(text: str) -> tuple[dict[str, str], list[list[int]], IncidenceTable]:
    """Parse an incidence fixture: headers, ``groups:`` and ``incidence:``."""
    header: dict[str, str] = {}
    section = None
    groups: list[list[int]] = []
    lists: dict[int, tuple[int, ...]] = {}
    for raw in text.split("\n"):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("groups:", "incidence:"):
            section = line[:-1]
            continue
        if section is None:
            key, _, value = line.partition(":")
            header[key.strip()] = value.strip()
        elif section == "groups":
            groups.append([int(x) for x in line.split()])
        else:
            point, _, rest = line.partition(":")
            lists[int(point)] = tuple(int(x) for x in rest.replace(",", " ").split())
    return header, groups, IncidenceTable(int(header["blocks"]), lists)
