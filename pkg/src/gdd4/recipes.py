"""Fill-in recipes: data model, the stored recipe rows and fill matching."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .grouptype import GroupType, as_type, format_type, parse_type


class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class Recipe:
    """Fill in the groups of a master design, the last one possibly with u extra points.

    ``groups`` lists the master group sizes in construction order; the last
    entry is the group that absorbs the ``u`` new points. ``fills[i]`` is the
    type that replaces ``groups[i]`` (the fill design itself has one more
    group, of size ``u``, when ``u > 0``). ``final_fill`` is the type of a
    design on ``groups[-1] + u`` points, or None to keep that set as one group.
    """

    groups: tuple[int, ...]
    u: int
    fills: tuple[GroupType, ...]
    final_fill: GroupType | None = None

    def __post_init__(self) -> None:
        if self.u < 0:
            raise RecipeError("u must be non-negative")
        if len(self.groups) < 1 or len(self.fills) != len(self.groups) - 1:
            raise RecipeError("need one fill for every master group except the last")
        for g, f in zip(self.groups, self.fills):
            if f.v != g:
                raise RecipeError(f"fill {format_type(f)} does not sum to master group size {g}")
            if self.u > 0 and f.m == 1:
                raise RecipeError(f"group of size {g} cannot be kept whole when u = {self.u}")
        if self.final_fill is not None and self.final_fill.v != self.groups[-1] + self.u:
            raise RecipeError(
                f"final fill {format_type(self.final_fill)} does not sum to {self.groups[-1] + self.u}"
            )

    @property
    def master_type(self) -> GroupType:
        return GroupType(self.groups)

    def fill_design_type(self, i: int) -> GroupType | None:
        """Type of the design used for group i, or None when the group is kept."""
        f = self.fills[i]
        if self.u == 0:
            return None if f.m == 1 else f
        return f + GroupType((self.u,))

    def ingredient_types(self) -> list[GroupType]:
        out = [t for i in range(len(self.fills)) if (t := self.fill_design_type(i)) is not None]
        if self.final_fill is not None and self.final_fill.m > 1:
            out.append(self.final_fill)
        return out

    def describe(self) -> str:
        fills = ", ".join(format_type(f) for f in self.fills)
        final = format_type(self.final_fill) if self.final_fill is not None else "kept"
        return (f"master {format_type(self.master_type)} (last group {self.groups[-1]}), u={self.u}, "
                f"fills [{fills}], final {final}")

    def to_dict(self) -> dict:
        return {
            "master": format_type(self.master_type),
            "groups": list(self.groups),
            "u": self.u,
            "fills": [format_type(f) for f in self.fills],
            "final_fill": format_type(self.final_fill) if self.final_fill is not None else None,
        }


def recipe_result_type(recipe: Recipe) -> GroupType:
    total = Counter()
    for f in recipe.fills:
        total.update(f.groups)
    if recipe.final_fill is not None:
        total.update(recipe.final_fill.groups)
    else:
        total[recipe.groups[-1] + recipe.u] += 1
    return GroupType(tuple(total.elements()))


# -- matching fills to master groups -------------------------------------------------


def _minus(fill: GroupType, u: int) -> GroupType | None:
    if u == 0:
        return fill
    groups = list(fill.groups)
    if u not in groups:
        return None
    groups.remove(u)
    return GroupType(tuple(groups)) if groups else None


def match_recipe(target: GroupType | str, master: GroupType | str, u: int,
                 fill_types: list[GroupType | str]) -> Recipe | None:
    """Assign fill types to master groups so the result has type ``target``.

    The last group is chosen among the distinct master sizes (largest first)
    and its fill is chosen before the others; the other groups take options
    in the order ``fill_types`` lists them, kept groups last. The first
    assignment found is returned, so the result is deterministic.
    """
    target, master = as_type(target), as_type(master)
    fills = [as_type(f) for f in fill_types]
    need = Counter(target.groups)

    def fits(sub: GroupType, remaining: Counter) -> bool:
        return all(remaining[g] >= c for g, c in Counter(sub.groups).items())

    def options_for(g: int) -> list[GroupType]:
        opts = []
        for f in fills:
            if f.v == g + u:
                sub = _minus(f, u)
                if sub is not None and sub.v == g and sub not in opts:
                    opts.append(sub)
        if u == 0 and GroupType((g,)) not in opts:
            opts.append(GroupType((g,)))
        return opts

    for last in sorted(set(master.groups), reverse=True):
        rest = list(master.groups)
        rest.remove(last)
        final_options: list[GroupType | None] = [f for f in fills if f.v == last + u]
        final_options.append(None)
        for final in final_options:
            remaining = Counter(need)
            contributed = final.groups if final is not None else (last + u,)
            ok = True
            for g in contributed:
                remaining[g] -= 1
                if remaining[g] < 0:
                    ok = False
            if not ok:
                continue
            chosen = _assign(tuple(rest), remaining, options_for)
            if chosen is not None:
                recipe = Recipe(tuple(rest) + (last,), u, tuple(chosen), final)
                assert recipe_result_type(recipe) == target
                return recipe
    return None


def _assign(groups: tuple[int, ...], remaining: Counter, options_for) -> list[GroupType] | None:
    opts = {g: options_for(g) for g in set(groups)}
    failed: set = set()

    def rec(i: int, prev: int, rem: tuple) -> list[GroupType] | None:
        if i == len(groups):
            return [] if all(c == 0 for _, c in rem) else None
        key = (i, prev, rem)
        if key in failed:
            return None
        g = groups[i]
        start = prev if i > 0 and groups[i - 1] == g else 0
        remd = dict(rem)
        for oi in range(start, len(opts[g])):
            sub = opts[g][oi]
            cnt = Counter(sub.groups)
            if any(remd.get(x, 0) < c for x, c in cnt.items()):
                continue
            nxt = dict(remd)
            for x, c in cnt.items():
                nxt[x] -= c
            tail = rec(i + 1, oi, tuple(sorted(nxt.items())))
            if tail is not None:
                return [sub] + tail
        failed.add(key)
        return None

    return rec(0, 0, tuple(sorted((k, c) for k, c in remaining.items())))


# -- stored rows --------------------------------------------------------------------------

SECTIONS = ("bootstrap", "range", "sparse")


@dataclass(frozen=True)
class RecipeRow:
    section: str
    v: int
    targets: tuple[tuple[int, int], ...]  # (t, s)
    master: GroupType | None
    u: int
    fills: tuple[GroupType, ...]
    line: int

    @property
    def unknown(self) -> bool:
        return self.master is None

    def recipe_for(self, t: int, s: int) -> Recipe:
        if self.master is None:
            raise RecipeError(f"no recipe is known for 2^{t} 5^{s}")
        recipe = _match_cached(t, s, self.master, self.u, self.fills)
        if recipe is None:
            raise RecipeError(f"row at line {self.line} has no fill assignment for 2^{t} 5^{s}")
        return recipe

    def label(self) -> str:
        return f"{self.section} v={self.v}"


@lru_cache(maxsize=None)
def _match_cached(t, s, master, u, fills):
    from .grouptype import type_2t5s

    return match_recipe(type_2t5s(t, s), master, u, list(fills))


def _ts(gt: GroupType) -> tuple[int, int]:
    c = Counter(gt.groups)
    if set(c) - {2, 5}:
        raise RecipeError(f"target {format_type(gt)} is not of the form 2^t 5^s")
    return c[2], c[5]


def _expand_targets(text: str) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = (_ts(parse_type(x)) for x in part.split(".."))
            t, s = a
            if (a[0] - b[0]) % 10 or (b[1] - a[1]) * 10 != (a[0] - b[0]) * 4:
                raise RecipeError(f"range {part!r} does not step by (t-10, s+4)")
            while (t, s) != b:
                out.append((t, s))
                t, s = t - 10, s + 4
            out.append(b)
        else:
            out.append(_ts(parse_type(part)))
    return out


_ROW = re.compile(r"^(\w+)\s+(\d+)\s*:\s*(.*)$")


def parse_rows(text: str) -> list[RecipeRow]:
    rows = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _ROW.match(line)
        if m is None or m.group(1) not in SECTIONS:
            raise RecipeError(f"line {lineno}: cannot parse recipe row {line!r}")
        section, v = m.group(1), int(m.group(2))
        fields = [f.strip() for f in m.group(3).split("|")]
        targets = tuple(_expand_targets(fields[0]))
        for t, s in targets:
            if 2 * t + 5 * s != v:
                raise RecipeError(f"line {lineno}: 2^{t} 5^{s} has {2 * t + 5 * s} points, not {v}")
        if len(fields) == 2 and fields[1].lower() == "unknown":
            rows.append(RecipeRow(section, v, targets, None, 0, (), lineno))
            continue
        if len(fields) != 4:
            raise RecipeError(f"line {lineno}: expected 4 fields separated by '|'")
        master = parse_type(fields[1])
        u = int(fields[2])
        fills = tuple(parse_type(f) for f in fields[3].split(","))
        rows.append(RecipeRow(section, v, targets, master, u, fills, lineno))
    return rows


@lru_cache(maxsize=1)
def shipped_rows() -> tuple[RecipeRow, ...]:
    text = resources.files("gdd4").joinpath("data", "recipes.txt").read_text(encoding="utf-8")
    return tuple(parse_rows(text))


def row_index(rows=None) -> dict[tuple[int, int], RecipeRow]:
    """Map (t, s) to the first row listing it."""
    if rows is None:
        return _shipped_index()
    out: dict[tuple[int, int], RecipeRow] = {}
    for row in rows:
        for ts in row.targets:
            out.setdefault(ts, row)
    return out


@lru_cache(maxsize=1)
def _shipped_index() -> dict[tuple[int, int], RecipeRow]:
    return row_index(shipped_rows())
