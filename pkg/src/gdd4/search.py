"""Exact-cover search for small 4-GDDs.

Columns are the cross-group pairs, rows the candidate blocks (k-subsets
meeting each group at most once). Under a cyclic layout, rows are whole
block orbits and columns whole pair orbits, as in the difference method.
"""

from __future__ import annotations

import itertools
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .design import Design
from .development import BaseBlock, BaseBlockSystem, develop, expand_groups
from .feasibility import check_feasible
from .grouptype import GroupType, as_type, format_type
from .verifier import verify

FOUND = "found"
EXHAUSTED = "exhausted"
BUDGET_EXCEEDED = "budget-exceeded"

_STATUS = {
    kernels.FOUND: FOUND,
    kernels.EXHAUSTED: EXHAUSTED,
    kernels.BUDGET: BUDGET_EXCEEDED,
    kernels.CANCELLED: BUDGET_EXCEEDED,
}


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class CyclicLayout:
    """Development group and point classes; the groups come from the layout."""

    system: BaseBlockSystem

    @property
    def modulus(self) -> int:
        return self.system.modulus


@dataclass(frozen=True)
class SearchProblem:
    target_type: GroupType
    k: int = 4
    symmetry: CyclicLayout | None = None
    node_budget: int | None = None
    time_budget: float | None = None
    seed: int | None = None
    exhaustive: bool = False
    threads: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "target_type", as_type(self.target_type))
        if self.node_budget is not None and self.node_budget <= 0:
            raise SearchError("node budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise SearchError("time budget must be positive")
        if self.threads < 1:
            raise SearchError("threads must be at least 1")


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    elapsed: float = 0.0
    rows: int = 0
    columns: int = 0

    def to_dict(self) -> dict:
        return {"nodes": self.nodes, "max_depth": self.max_depth, "elapsed": round(self.elapsed, 6),
                "rows": self.rows, "columns": self.columns}


@dataclass
class SearchOutcome:
    status: str
    design: Design | None = None
    system: BaseBlockSystem | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def to_dict(self) -> dict:
        return {"status": self.status, "stats": self.stats.to_dict(),
                "type": format_type(self.design.group_type) if self.design else None}


# -- exact-cover formulations ----------------------------------------------------


def canonical_groups(gt: GroupType) -> list[list[int]]:
    """Consecutive points for each group, largest groups first."""
    groups, pos = [], 0
    for g in gt.groups:
        groups.append(list(range(pos, pos + g)))
        pos += g
    return groups


def _pair_table(point_group: np.ndarray) -> np.ndarray:
    """Column id of each cross pair (i<j) indexed j*(j-1)/2+i; -1 otherwise."""
    v = len(point_group)
    jj, ii = np.tril_indices(v, -1)
    cross = point_group[ii] != point_group[jj]
    col = np.full(len(ii), -1, dtype=np.int64)
    col[cross] = np.arange(int(cross.sum()))
    return col


def candidate_blocks(point_group: np.ndarray, k: int = 4) -> np.ndarray:
    """All k-subsets meeting each group at most once, in lexicographic order."""
    v = len(point_group)
    rows = [b for b in itertools.combinations(range(v), k)
            if len({int(point_group[p]) for p in b}) == k]
    return np.asarray(rows, dtype=np.int64).reshape(-1, k)


def _block_pair_index(blocks: np.ndarray) -> np.ndarray:
    k = blocks.shape[1]
    cols = []
    for x in range(k):
        for y in range(x + 1, k):
            lo = np.minimum(blocks[:, x], blocks[:, y])
            hi = np.maximum(blocks[:, x], blocks[:, y])
            cols.append(hi * (hi - 1) // 2 + lo)
    return np.stack(cols, axis=1)


def _csr(row_sets: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(row_sets) + 1, dtype=np.int32)
    ptr[1:] = np.cumsum([len(r) for r in row_sets])
    cols = np.concatenate(row_sets).astype(np.int32) if row_sets else np.zeros(0, np.int32)
    return ptr, cols


@dataclass
class _Formulation:
    n_cols: int
    row_ptr: np.ndarray
    row_cols: np.ndarray
    row_blocks: list  # blocks of each row (one block, or a whole orbit)
    row_base: list | None = None  # base block and orbit length per row (cyclic)


def _plain_formulation(point_group: np.ndarray, k: int, seed: int | None = None) -> _Formulation:
    blocks = candidate_blocks(point_group, k)
    order = None
    if seed is not None:
        order = list(range(len(blocks)))
        random.Random(seed).shuffle(order)
    cols_of_pair = _pair_table(point_group)
    n_cols = int((cols_of_pair >= 0).sum())
    rows = cols_of_pair[_block_pair_index(blocks)] if len(blocks) else np.zeros((0, k * (k - 1) // 2))
    if order is not None:
        blocks, rows = blocks[order], rows[order]
    ptr = np.arange(0, rows.size + 1, rows.shape[1] if rows.ndim == 2 and rows.shape[1] else 1, dtype=np.int32)
    return _Formulation(n_cols, ptr[: len(blocks) + 1], rows.reshape(-1).astype(np.int32),
                        [[tuple(int(p) for p in b)] for b in blocks])


def _shift_table(system: BaseBlockSystem) -> np.ndarray:
    """shift[j, p] = image of point p under the shift by j."""
    off = system.offsets()
    v, n = system.point_count, system.modulus
    table = np.empty((n, v), dtype=np.int64)
    for c in system.classes:
        base = off[c.label]
        idx = np.arange(c.size)
        for j in range(n):
            table[j, base:base + c.size] = base + (idx if c.infinite else (idx + j) % c.modulus)
    return table


def _cyclic_formulation(system: BaseBlockSystem, point_group: np.ndarray, k: int) -> _Formulation:
    shift = _shift_table(system)
    n, v = shift.shape
    groups = expand_groups(system)
    gid = {frozenset(g): i for i, g in enumerate(groups)}
    for g in groups:
        for j in range(n):
            if frozenset(int(x) for x in shift[j, g]) not in gid:
                raise SearchError("layout groups are not invariant under the cyclic shift")

    blocks = candidate_blocks(point_group, k)
    if len(blocks) == 0:
        raise SearchError("layout admits no candidate blocks")
    # canonical representative: least encoded image over all shifts
    weights = v ** np.arange(k - 1, -1, -1, dtype=np.int64)
    keep = []
    for lo in range(0, len(blocks), 50_000):
        chunk = blocks[lo:lo + 50_000]
        codes = np.sort(shift[:, chunk], axis=2) @ weights
        keep.append(lo + np.nonzero(codes.min(axis=0) == chunk @ weights)[0])
    blocks = blocks[np.concatenate(keep)]
    images = np.sort(shift[:, blocks], axis=2)  # (n, reps, k)
    codes = images @ weights
    own = blocks @ weights
    reps = range(len(blocks))

    jj, ii = np.tril_indices(v, -1)
    cross = point_group[ii] != point_group[jj]
    # pair orbit ids
    pair_orbit = np.full(len(ii), -1, dtype=np.int64)
    next_id = 0
    for idx in np.nonzero(cross)[0]:
        if pair_orbit[idx] >= 0:
            continue
        a, b = shift[:, ii[idx]], shift[:, jj[idx]]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        pair_orbit[hi * (hi - 1) // 2 + lo] = next_id
        next_id += 1

    row_sets, row_blocks, row_base = [], [], []
    for r in reps:
        img = images[:, r, :]
        distinct = np.unique(img @ weights)
        length = next(d for d in range(1, n + 1) if n % d == 0 and codes[d % n, r] == own[r])
        orbit_blocks = img[:length]
        pairs = _block_pair_index(orbit_blocks).reshape(-1)
        if len(np.unique(pairs)) != len(pairs) or len(distinct) != length:
            continue
        # a duplicate-free, shift-invariant pair set is a union of pair orbits
        row_sets.append(np.unique(pair_orbit[pairs]))
        row_blocks.append([tuple(int(p) for p in b) for b in orbit_blocks])
        row_base.append((tuple(int(p) for p in blocks[r]), length))
    ptr, cols = _csr(row_sets)
    return _Formulation(next_id, ptr, cols, row_blocks, row_base)


# -- driver ---------------------------------------------------------------------


def _run(form: _Formulation, forced_sets: list[list[int]], node_budget: int | None,
         branching: int, threads: int, time_budget: float | None, stop_on_found: bool = True):
    """Run one exact-cover call per forced set; returns (status, rows, nodes, depth)."""
    cancel = np.zeros(1, dtype=np.int32)
    timer = None
    if time_budget is not None:
        timer = threading.Timer(time_budget, lambda: cancel.__setitem__(0, 1))
        timer.daemon = True
        timer.start()
    budget = int(node_budget or 0)

    def one(forced):
        if cancel[0]:
            return kernels.CANCELLED, np.zeros(0, np.int32), 0, 0
        res = kernels.exact_cover(form.n_cols, form.row_ptr, form.row_cols,
                                  np.asarray(forced, dtype=np.int32), budget, branching, cancel)
        if res[0] == kernels.FOUND and stop_on_found:
            cancel[0] = 1
        return res

    try:
        if threads <= 1 or len(forced_sets) <= 1:
            results = []
            for f in forced_sets:
                res = one(f)
                results.append(res)
                if res[0] == kernels.FOUND and stop_on_found:
                    break
                if res[0] in (kernels.BUDGET, kernels.CANCELLED):
                    break
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(one, forced_sets))
    finally:
        if timer is not None:
            timer.cancel()

    nodes = sum(int(r[2]) for r in results)
    depth = max((int(r[3]) for r in results), default=0)
    for r in results:
        if r[0] == kernels.FOUND:
            return kernels.FOUND, r[1], nodes, depth
    if len(results) < len(forced_sets) or any(r[0] != kernels.EXHAUSTED for r in results):
        return kernels.BUDGET, None, nodes, depth
    return kernels.EXHAUSTED, None, nodes, depth


def _root_shards(form: _Formulation) -> list[list[int]]:
    """Rows covering column 0: every solution uses exactly one of them."""
    if form.n_cols == 0:
        return [[]]
    hits = np.nonzero(form.row_cols == 0)[0]
    rows = np.searchsorted(form.row_ptr, hits, side="right") - 1
    return [[int(r)] for r in rows]


def search(problem: SearchProblem) -> SearchOutcome:
    """Find a design of the target type, or prove none exists."""
    gt = problem.target_type
    if not check_feasible(gt).feasible:
        raise SearchError(f"type {format_type(gt)} is infeasible; search refused")
    started = time.perf_counter()

    if problem.symmetry is not None:
        system = problem.symmetry.system
        groups = expand_groups(system)
        if GroupType(tuple(len(g) for g in groups)) != gt:
            raise SearchError(
                f"layout groups have type {format_type(GroupType(tuple(len(g) for g in groups)))}, "
                f"not {format_type(gt)}"
            )
    else:
        groups = canonical_groups(gt)
    v = gt.v
    point_group = np.empty(v, dtype=np.int64)
    for gi, g in enumerate(groups):
        point_group[g] = gi

    if problem.symmetry is not None:
        form = _cyclic_formulation(problem.symmetry.system, point_group, problem.k)
    else:
        seed = None if problem.exhaustive else problem.seed
        form = _plain_formulation(point_group, problem.k, seed)

    branching = 1 if problem.exhaustive else 0
    shards = _root_shards(form) if problem.threads > 1 else [[]]
    status, rows, nodes, depth = _run(form, shards, problem.node_budget, branching,
                                      problem.threads, problem.time_budget)
    stats = SearchStats(nodes, depth, time.perf_counter() - started,
                        len(form.row_ptr) - 1, form.n_cols)
    if status != kernels.FOUND:
        return SearchOutcome(_STATUS[status], stats=stats)

    chosen = sorted(int(r) for r in rows)
    blocks = [b for r in chosen for b in form.row_blocks[r]]
    design = Design.create(v, groups, blocks, k=problem.k, provenance="searched",
                           labels=problem.symmetry.system.labels() if problem.symmetry else None)
    report = verify(design)
    if not report.passed:
        raise AssertionError(f"search returned an invalid design:\n{report.render()}")

    system = None
    if problem.symmetry is not None:
        system = _as_system(problem.symmetry.system, [form.row_base[r] for r in chosen], gt)
        redeveloped = develop(system, provenance="searched")
        if sorted(redeveloped.blocks) != sorted(design.blocks):
            raise AssertionError("base-block system does not re-develop to the found design")
        design = redeveloped
    stats.elapsed = time.perf_counter() - started
    return SearchOutcome(FOUND, design, system, stats)


def _as_system(layout: BaseBlockSystem, bases, gt: GroupType) -> BaseBlockSystem:
    owner = [(c.label, i) for c in layout.classes for i in range(c.size)]
    base_blocks = tuple(BaseBlock(tuple(owner[p] for p in block), length) for block, length in bases)
    return BaseBlockSystem(layout.modulus, layout.classes, layout.group_spec, base_blocks,
                           layout.pre_blocks, layout.name, gt, layout.notes)


def search_base_blocks(problem: SearchProblem) -> tuple[SearchOutcome, BaseBlockSystem | None]:
    if problem.symmetry is None:
        raise SearchError("search_base_blocks needs a cyclic layout")
    outcome = search(problem)
    return outcome, outcome.system


# -- nonexistence -----------------------------------------------------------------

CERTIFIED = "certified"
COUNTEREXAMPLE = "counterexample"


@dataclass
class NonexistenceResult:
    status: str
    design: Design | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    branches: int = 0

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        return {"status": self.status, "branches": self.branches, "stats": self.stats.to_dict()}


def _first_point_branches(gt: GroupType, k: int):
    """Ways to cover the pairs through point 0, up to relabeling inside groups.

    The blocks through point 0 split the points outside its group into
    (k-1)-sets meeting distinct groups. Relabeling points within a group maps
    GDDs to GDDs, so only the multiset of group (k-1)-tuples matters; each is
    realized with the lowest unused points of each group.
    """
    sizes = list(gt.groups)
    others = list(range(1, len(sizes)))
    need = {g: sizes[g] for g in others}
    tuples = list(itertools.combinations(others, k - 1))

    def rec(start, remaining):
        if all(x == 0 for x in remaining.values()):
            yield []
            return
        # the lowest group with points left must appear in the next tuple
        low = min(g for g, x in remaining.items() if x)
        for ti in range(start, len(tuples)):
            t = tuples[ti]
            if t[0] != low or any(remaining[g] == 0 for g in t):
                continue
            for g in t:
                remaining[g] -= 1
            for rest in rec(ti, remaining):
                yield [t] + rest
            for g in t:
                remaining[g] += 1

    groups = canonical_groups(gt)
    for combo in rec(0, dict(need)):
        used = {g: 0 for g in others}
        blocks = []
        for t in combo:
            pts = [0]
            for g in t:
                pts.append(groups[g][used[g]])
                used[g] += 1
            blocks.append(tuple(pts))
        yield blocks


def prove_nonexistence(
    gt: GroupType | str,
    *,
    node_budget: int | None = None,
    time_budget: float | None = None,
    threads: int = 1,
    max_points: int = 32,
    k: int = 4,
) -> NonexistenceResult:
    """Exhaustive search with the blocks through point 0 fixed up to relabeling."""
    gt = as_type(gt)
    if gt.v > max_points:
        raise SearchError(f"{format_type(gt)} has {gt.v} points; exhaustive proof guarded at {max_points}")
    if not check_feasible(gt).feasible:
        raise SearchError(f"type {format_type(gt)} is infeasible; nothing to prove by search")
    started = time.perf_counter()
    groups = canonical_groups(gt)
    point_group = np.empty(gt.v, dtype=np.int64)
    for gi, g in enumerate(groups):
        point_group[g] = gi
    form = _plain_formulation(point_group, k)
    row_of = {b[0]: r for r, b in enumerate(form.row_blocks)}
    shards = [[row_of[b] for b in blocks] for blocks in _first_point_branches(gt, k)]
    status, rows, nodes, depth = _run(form, shards, node_budget, 1, threads, time_budget)
    stats = SearchStats(nodes, depth, time.perf_counter() - started, len(form.row_ptr) - 1, form.n_cols)
    if status == kernels.EXHAUSTED:
        return NonexistenceResult(CERTIFIED, stats=stats, branches=len(shards))
    if status == kernels.FOUND:
        blocks = [form.row_blocks[int(r)][0] for r in rows]
        design = Design.create(gt.v, groups, blocks, k=k, provenance="searched")
        if not verify(design).passed:
            raise AssertionError("counterexample fails verification")
        return NonexistenceResult(COUNTEREXAMPLE, design, stats, len(shards))
    return NonexistenceResult(BUDGET_EXCEEDED, stats=stats, branches=len(shards))


# -- convenience ------------------------------------------------------------------


def layout_hints(gt: GroupType | str) -> list[CyclicLayout]:
    """Shipped cyclic layouts known to admit a solution for this type."""
    from importlib import resources

    from .development import loads_system

    gt = as_type(gt)
    folder = resources.files("gdd4").joinpath("data", "layouts")
    hints = []
    for entry in sorted(folder.iterdir(), key=lambda p: p.name):
        if not entry.name.endswith(".bbs"):
            continue
        system = loads_system(entry.read_text(encoding="utf-8"))
        if system.declared_type == gt:
            hints.append(CyclicLayout(system))
    return hints


def find_design(
    gt: GroupType | str,
    *,
    node_budget: int | None = 5_000_000,
    time_budget: float | None = None,
    seed: int | None = None,
) -> SearchOutcome:
    """Try the shipped layouts for ``gt``, then unrestricted search."""
    gt = as_type(gt)
    spent = SearchStats()
    for layout in layout_hints(gt):
        outcome = search(SearchProblem(gt, symmetry=layout, node_budget=node_budget,
                                       time_budget=time_budget, seed=seed))
        spent.nodes += outcome.stats.nodes
        if outcome.found:
            return outcome
    outcome = search(SearchProblem(gt, node_budget=node_budget, time_budget=time_budget, seed=seed))
    outcome.stats.nodes += spent.nodes
    return outcome
