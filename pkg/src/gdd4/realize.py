"""Turn certificate trees into concrete, verified designs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import Catalog
from .design import Design
from .fillin import fill_in
from .fixtures import build_fixture, fixture_for_type
from .grouptype import GroupType, as_type, format_type
from .planner import Certificate, Decision, FillIn, Leaf, plan, plan_type
from .search import find_design
from .verifier import verify

SEARCH_LIMIT = 30

# Designs found by search in this process, keyed by type.
_searched: dict[GroupType, Design] = {}


class RealizeError(RuntimeError):
    pass


@dataclass(frozen=True)
class PartialResult:
    target: GroupType
    certificate: Certificate
    missing: tuple[GroupType, ...]
    sources: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "type": format_type(self.target),
            "missing": [format_type(t) for t in self.missing],
            "sources": {format_type(t): s for t, s in self.sources.items()},
        }

    def render(self) -> str:
        miss = ", ".join(format_type(t) for t in self.missing)
        return f"{format_type(self.target)}: partial, no concrete design for {miss}"


def _leaf_design(leaf: Leaf, catalog: Catalog | None, search: bool, search_limit: int,
                 time_budget: float | None) -> tuple[Design | None, str]:
    gt = leaf.target
    name = leaf.fixture or fixture_for_type(gt)
    if name is not None:
        return build_fixture(name), f"fixture {name}"
    if catalog is not None:
        found = catalog.first(gt)
        if found is not None:
            return found, "catalog"
    if gt in _searched:
        return _searched[gt], "searched"
    if search and gt.v <= search_limit:
        outcome = find_design(gt, time_budget=time_budget)
        if outcome.found:
            _searched[gt] = outcome.design
            return outcome.design, "searched"
    return None, "missing"


def realize(
    cert: Certificate,
    *,
    catalog: Catalog | None = None,
    search: bool = True,
    search_limit: int = SEARCH_LIMIT,
    time_budget: float | None = 20.0,
    register: bool = False,
) -> Design | PartialResult:
    """Materialize every leaf, then run the fill-ins bottom-up.

    Leaves come from shipped fixtures, the catalog, or a bounded search for
    types on at most ``search_limit`` points. If any leaf stays abstract the
    tree is not assembled and a PartialResult names the missing types.
    """
    designs: dict[GroupType, Design] = {}
    sources: dict[GroupType, str] = {}
    missing: list[GroupType] = []
    for leaf in cert.leaves():
        if leaf.target in designs or leaf.target in missing:
            continue
        d, how = _leaf_design(leaf, catalog, search, search_limit, time_budget)
        sources[leaf.target] = how
        if d is None:
            missing.append(leaf.target)
        else:
            designs[leaf.target] = d
    if missing:
        missing.sort(key=lambda t: (t.v, t.groups))
        return PartialResult(cert.target, cert, tuple(missing), sources)

    def build(node: Certificate) -> Design:
        if isinstance(node, Leaf):
            return designs[node.target]
        if node.target in designs:
            return designs[node.target]
        master = build(node.master)
        fills = [None if c is None else build(c) for c in node.fills]
        final = None if node.final is None else build(node.final)
        d = fill_in(master, node.recipe, fills, final)
        if d.group_type != node.target:
            raise RealizeError(f"fill-in gave {format_type(d.group_type)}, expected {format_type(node.target)}")
        designs[node.target] = d
        return d

    design = build(cert)
    report = verify(design)
    if not report.passed:
        raise RealizeError(f"realized design fails verification:\n{report.render()}")
    if register and catalog is not None:
        for gt, how in sources.items():
            if how == "searched":
                catalog.register(designs[gt], "searched")
        catalog.register(design)
    return design


def construct(gt: GroupType | str, **kwargs) -> Design | PartialResult:
    """Plan and realize any type the planner knows, 2^t 5^s or an ingredient type."""
    gt = as_type(gt)
    counts = gt.counts()
    if set(counts) <= {2, 5}:
        result = plan(counts.get(2, 0), counts.get(5, 0))
        if isinstance(result, Decision):
            raise RealizeError(f"{format_type(gt)}: {result.verdict} ({result.reason})")
    else:
        result = plan_type(gt)
    return realize(result, **kwargs)
