"""Assemble a design by filling in the groups of a master design."""

from __future__ import annotations

from collections.abc import Sequence

from .design import Design
from .grouptype import format_type
from .recipes import Recipe
from .verifier import verify


class FillInError(ValueError):
    pass


def _order_groups(master: Design, sizes: Sequence[int]) -> list[tuple[int, ...]]:
    pool = list(master.groups)
    out = []
    for g in sizes:
        for i, grp in enumerate(pool):
            if len(grp) == g:
                out.append(pool.pop(i))
                break
        else:
            raise FillInError(f"master has no unused group of size {g}")
    return out


def _embed(design: Design, target: Sequence[int], extra: Sequence[int], what: str):
    """Map ``design`` onto ``target`` points, sending one group of size len(extra) to ``extra``.

    Returns (groups, blocks) in the new labelling, leaving out the group sent to ``extra``.
    """
    u = len(extra)
    skip = None
    if u:
        for gi in range(len(design.groups) - 1, -1, -1):
            if len(design.groups[gi]) == u:
                skip = gi
                break
        if skip is None:
            raise FillInError(f"{what} {format_type(design.group_type)} has no group of size {u}")
    phi = [0] * design.v
    if skip is not None:
        for p, q in zip(design.groups[skip], extra):
            phi[p] = q
    rest = [p for gi, grp in enumerate(design.groups) if gi != skip for p in grp]
    if len(rest) != len(target):
        raise FillInError(f"{what} {format_type(design.group_type)} does not fit {len(target)} points")
    for p, q in zip(rest, sorted(target)):
        phi[p] = q
    groups = [tuple(phi[p] for p in grp) for gi, grp in enumerate(design.groups) if gi != skip]
    blocks = [tuple(phi[p] for p in b) for b in design.blocks]
    return groups, blocks


def fill_in(
    master: Design,
    recipe: Recipe,
    fills: Sequence[Design | None],
    final: Design | None = None,
) -> Design:
    """Build the design described by ``recipe`` from its ingredients.

    ``fills[i]`` is a design of type ``recipe.fill_design_type(i)`` or None when
    that group is kept whole. With ``u > 0`` the new points are numbered from
    ``master.v``; each fill and the final design send one group of size u onto them.
    """
    if master.k != 4 and any(f is not None and f.k != master.k for f in fills):
        raise FillInError("ingredients have different block sizes")
    if master.group_type != recipe.master_type:
        raise FillInError(f"master has type {format_type(master.group_type)}, "
                          f"recipe needs {format_type(recipe.master_type)}")
    if len(fills) != len(recipe.fills):
        raise FillInError("one fill per master group except the last is required")

    u = recipe.u
    v = master.v + u
    extra = tuple(range(master.v, v))
    ordered = _order_groups(master, recipe.groups)
    groups: list[tuple[int, ...]] = []
    blocks: list[tuple[int, ...]] = list(master.blocks)

    for i, (grp, fill) in enumerate(zip(ordered[:-1], fills)):
        want = recipe.fill_design_type(i)
        if want is None:
            if fill is not None:
                raise FillInError(f"group {i} is kept whole but a fill was given")
            groups.append(grp)
            continue
        if fill is None or fill.group_type != want:
            got = "nothing" if fill is None else format_type(fill.group_type)
            raise FillInError(f"group {i} needs a fill of type {format_type(want)}, got {got}")
        g, b = _embed(fill, grp, extra, f"fill {i}")
        groups += g
        blocks += b

    last = ordered[-1]
    if recipe.final_fill is None or recipe.final_fill.m == 1:
        if final is not None:
            raise FillInError("the last group is kept whole but a final design was given")
        groups.append(tuple(last) + extra)
    else:
        if final is None or final.group_type != recipe.final_fill:
            raise FillInError(f"final design must have type {format_type(recipe.final_fill)}")
        g, b = _embed(final, last, extra, "final design")
        groups += g + ([extra] if u else [])
        blocks += b

    design = Design.create(v, groups, blocks, k=master.k, provenance="fill-in")
    report = verify(design)
    if not report.passed:
        raise FillInError(f"assembled design fails verification:\n{report.render()}")
    return design
