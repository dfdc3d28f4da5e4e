"""Existence decisions and certificate trees for 4-GDDs of type 2^t 5^s."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .axioms import LEMMAS, AxiomWitness, axiom_for_type
from .feasibility import check_feasible, feasible_2t5s
from .fixtures import fixture_for_type
from .grouptype import GroupType, as_type, format_type, parse_type, type_2t5s
from .recipes import Recipe, RecipeError, recipe_result_type, row_index


@lru_cache(maxsize=None)
def small_order_table() -> dict[GroupType, bool]:
    """Every feasible type on at most 30 points, mapped to whether a design exists."""
    text = resources.files("gdd4").joinpath("data/small_types.txt").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            body, sep, _ = line.partition(" none")
            table[parse_type(body)] = not sep
    return table


KNOWN_NONEXISTENT = frozenset(gt for gt, ok in small_order_table().items() if not ok)

# Directly constructed designs from the literature, used as leaves.
EXTERNAL_DIRECT = frozenset(type_2t5s(t, s) for t, s in (
    (6, 4), (5, 5), (9, 4), (8, 5), (12, 4), (2, 8), (11, 5), (15, 4), (5, 8),
))

# Feasible 2^t 5^s types with t + s >= 8 for which existence is open.
OPEN_CASES = frozenset({
    (4, 12),
    (23, 5), (13, 9), (3, 13),
    (29, 5),
    (23, 8),
    (22, 9), (12, 13), (2, 17),
    (26, 8), (16, 12), (6, 16),
    (25, 9), (15, 13), (5, 17),
    (11, 17),
    (4, 21),
})

LEAF_KINDS = ("shipped-table", "searched", "existence-lemma", "external-literature")
CITATIONS = {
    "small-order-table": "existence settled for every feasible type on at most 30 points",
    "direct-constructions": "direct constructions with 32 to 50 points in the literature",
}


class PlanError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _feasible(gt: GroupType) -> bool:
    return check_feasible(gt).feasible


# -- certificate trees ----------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    target: GroupType
    kind: str
    fixture: str | None = None
    axiom: AxiomWitness | None = None
    citation: str | None = None

    def leaves(self):
        yield self

    def describe(self) -> str:
        if self.kind == "shipped-table":
            return f"shipped table {self.fixture}"
        if self.kind == "existence-lemma":
            return f"existence lemma {self.axiom}"
        if self.kind == "external-literature":
            return f"external ({self.citation})"
        return self.kind

    def to_dict(self) -> dict:
        out = {"type": format_type(self.target), "leaf": self.kind}
        if self.fixture:
            out["fixture"] = self.fixture
        if self.axiom:
            out["lemma"] = self.axiom.lemma
            out["params"] = {"g": self.axiom.g, "p": self.axiom.p, "n": self.axiom.n}
        if self.citation:
            out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class FillIn:
    target: GroupType
    recipe: Recipe
    source: str
    master: Certificate
    fills: tuple[Certificate | None, ...]  # aligned with recipe.fills; None = kept whole
    final: Certificate | None

    def leaves(self):
        yield from self.master.leaves()
        for child in self.fills:
            if child is not None:
                yield from child.leaves()
        if self.final is not None:
            yield from self.final.leaves()

    def describe(self) -> str:
        return f"fill-in [{self.source}] {self.recipe.describe()}"

    def to_dict(self) -> dict:
        return {
            "type": format_type(self.target),
            "fill_in": self.recipe.to_dict(),
            "source": self.source,
            "master": self.master.to_dict(),
            "fills": [c.to_dict() if c is not None else None for c in self.fills],
            "final": self.final.to_dict() if self.final is not None else None,
        }


Certificate = Leaf | FillIn


def render(cert: Certificate, indent: str = "") -> str:
    lines = [f"{indent}{format_type(cert.target)}: {cert.describe()}"]
    if isinstance(cert, FillIn):
        lines.append(render(cert.master, indent + "  master "))
        seen: set[GroupType] = set()
        for child in cert.fills:
            if child is not None and child.target not in seen:
                seen.add(child.target)
                lines.append(render(child, indent + "  fill "))
        if cert.final is not None:
            lines.append(render(cert.final, indent + "  final "))
    return "\n".join(lines)


# -- verdicts ----------------------------------------------------------------------------------

EXISTS = "exists"
DEFINITE_NONEXISTENCE = "definite-nonexistence"
POSSIBLE_EXCEPTION = "possible-exception"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Decision:
    t: int
    s: int
    verdict: str
    certificate: Certificate | None = None
    reason: str = ""

    @property
    def v(self) -> int:
        return 2 * self.t + 5 * self.s

    def to_dict(self) -> dict:
        return {
            "t": self.t, "s": self.s, "v": self.v, "type": format_type(type_2t5s(self.t, self.s))
            if self.t + self.s else "", "verdict": self.verdict, "reason": self.reason,
            "certificate": self.certificate.to_dict() if self.certificate is not None else None,
        }


@dataclass(frozen=True)
class PlannerState:
    """Parameters of the two-step plan for large v."""

    t: int
    s: int
    v: int
    ell: int
    m: int
    x: int
    big: int
    big_fill: GroupType = field(compare=False, default=None)


# -- planning -----------------------------------------------------------------------------------


def _ts(gt: GroupType) -> tuple[int, int] | None:
    c = Counter(gt.groups)
    if set(c) <= {2, 5}:
        return c[2], c[5]
    return None


def plan_type(gt: GroupType | str) -> Certificate:
    """Certificate for an arbitrary ingredient type; raises PlanError if none."""
    gt = as_type(gt)
    ts = _ts(gt)
    if ts is not None:
        result = plan(*ts)
        if isinstance(result, Decision):
            raise PlanError(f"ingredient {format_type(gt)} has no construction ({result.verdict})")
        return result
    name = fixture_for_type(gt)
    if name is not None:
        return Leaf(gt, "shipped-table", fixture=name)
    witness = axiom_for_type(gt)
    if witness is not None:
        return Leaf(gt, "existence-lemma", axiom=witness)
    raise PlanError(f"no known construction for ingredient {format_type(gt)}")


@lru_cache(maxsize=None)
def plan(t: int, s: int) -> Certificate | Decision:
    """Certificate tree for 2^t 5^s, or a Decision when no construction applies."""
    if t < 0 or s < 0:
        raise ValueError("t and s must be non-negative")
    if t + s == 0:
        return Decision(t, s, INFEASIBLE, reason="empty type")
    if not feasible_2t5s(t, s):
        return Decision(t, s, INFEASIBLE, reason="necessary conditions fail")
    gt = type_2t5s(t, s)
    if not _feasible(gt):
        return Decision(t, s, INFEASIBLE, reason="necessary conditions fail")
    if gt in KNOWN_NONEXISTENT:
        return Decision(t, s, DEFINITE_NONEXISTENCE, reason="known not to exist")
    v = gt.v

    name = fixture_for_type(gt)
    if name is not None:
        return Leaf(gt, "shipped-table", fixture=name)
    if t in (0, 1) or s in (0, 1):
        witness = axiom_for_type(gt)
        if witness is not None:
            return Leaf(gt, "existence-lemma", axiom=witness)
    if small_order_table().get(gt):
        return Leaf(gt, "external-literature", citation="small-order-table")
    if gt in EXTERNAL_DIRECT:
        return Leaf(gt, "external-literature", citation="direct-constructions")

    row = row_index().get((t, s))
    if row is not None:
        if row.unknown:
            return _open(t, s, f"{row.label()}: no construction known")
        return _fill_in(gt, row.recipe_for(t, s), row.label())

    state = planner_state(t, s)
    if state is not None:
        return _fill_in(gt, _parametric_recipe(state), f"parametric 20^m n^1, l={state.ell}")
    return _open(t, s, "no construction applies")


def _open(t: int, s: int, reason: str) -> Decision:
    if (t, s) not in OPEN_CASES:
        raise PlanError(f"no rule applies to 2^{t} 5^{s} ({reason})")
    return Decision(t, s, POSSIBLE_EXCEPTION, reason=reason)


def _fill_in(gt: GroupType, recipe: Recipe, source: str) -> FillIn:
    if recipe_result_type(recipe) != gt:
        raise PlanError(f"recipe yields {format_type(recipe_result_type(recipe))}, not {format_type(gt)}")
    master = plan_type(recipe.master_type)
    fills = tuple(
        None if (ft := recipe.fill_design_type(i)) is None else plan_type(ft)
        for i in range(len(recipe.fills))
    )
    final = None
    if recipe.final_fill is not None and recipe.final_fill.m > 1:
        final = plan_type(recipe.final_fill)
    return FillIn(gt, recipe, source, master, fills, final)


# Fill for the large group, keyed by l; each entry lists (s condition, fill (t, s)).
# "ge" entries apply for all larger s; the fill's s is subtracted before x = s'/4.
_STEP1: dict[int, list[tuple[str, int, tuple[int, int]]]] = {
    23: [("ge", 1, (9, 1))],
    26: [("ge", 4, (3, 4))],
    32: [("ge", 4, (6, 4))],
    38: [("ge", 4, (9, 4))],
    29: [("ge", 5, (2, 5))],
    35: [("ge", 5, (5, 5))],
    41: [("ge", 5, (8, 5))],
    44: [("eq", 4, (12, 4)), ("ge", 8, (2, 8))],
    50: [("eq", 4, (15, 4)), ("ge", 8, (5, 8))],
    56: [("eq", 4, (18, 4)), ("ge", 8, (8, 8))],
    47: [("eq", 5, (11, 5)), ("ge", 9, (1, 9))],
    53: [("eq", 5, (14, 5)), ("ge", 9, (4, 9))],
    59: [("eq", 5, (17, 5)), ("ge", 9, (7, 9))],
    5: [("eq", 5, (20, 5)), ("ge", 9, (10, 9))],
    2: [("eq", 4, (21, 4)), ("eq", 8, (11, 8)), ("ge", 12, (1, 12))],
    14: [("eq", 4, (27, 4)), ("eq", 8, (17, 8)), ("ge", 12, (7, 12))],
    20: [("eq", 4, (30, 4)), ("eq", 8, (20, 8)), ("ge", 12, (10, 12))],
    17: [("eq", 5, (26, 5)), ("eq", 9, (16, 9)), ("ge", 13, (6, 13))],
}


def planner_state(t: int, s: int) -> PlannerState | None:
    """Parameters of the master 20^m n^1 plan, or None when it does not apply."""
    v = 2 * t + 5 * s
    ell = v % 60
    if v < 200 or s < 2 or t == 0:
        return None
    if ell in (8, 11):
        if v < 428:
            return None
        m = (v - ell) // 20 - 6
        big = 120 + ell
        base = 24 if ell == 8 else 25
        if s <= base:
            fill = (t - 10 * m, s)
            x = 0
        else:
            fill = (4 if ell == 8 else 3, base)
            x = (s - base) // 4
        return PlannerState(t, s, v, ell, m, x, big, type_2t5s(*fill))
    if ell == 20 and v == 200:
        # 20^6 80^1 is infeasible (3*80 + 20 > 200); use 20^10 instead
        fill = (0, 4) if s >= 4 else (10, 0)
        return PlannerState(t, s, v, ell, 9, (s - fill[1]) // 4, 20, type_2t5s(*fill))
    # l = 20 takes the l + 60 branch: its large-group fills have 80 points
    if ell > 20:
        m, big = (v - ell) // 20, ell
    else:
        m, big = (v - ell - 60) // 20, ell + 60
    for cond, bound, fill in _STEP1[ell]:
        if (cond == "eq" and s == bound) or (cond == "ge" and s >= bound):
            x, rem = divmod(s - fill[1], 4)
            if rem:
                return None
            return PlannerState(t, s, v, ell, m, x, big, type_2t5s(*fill))
    return None


def _parametric_recipe(state: PlannerState) -> Recipe:
    m, x = state.m, state.x
    if not 0 <= x <= m:
        raise PlanError(f"plan for 2^{state.t} 5^{state.s} needs x={x} outside 0..{m}")
    fills = (GroupType((5, 5, 5, 5)),) * x + (GroupType((2,) * 10),) * (m - x)
    return Recipe((20,) * m + (state.big,), 0, fills, state.big_fill)


# -- decision and validation ------------------------------------------------------------------


def decide(t: int, s: int) -> Decision:
    result = plan(t, s)
    if isinstance(result, Decision):
        return result
    validate_certificate(result)
    return Decision(t, s, EXISTS, result)


class CertificateError(ValueError):
    pass


# Nodes already validated, by identity; plan() shares subtrees heavily.
_validated: dict[int, Certificate] = {}


def validate_certificate(cert: Certificate) -> None:
    """Machine-check leaf hypotheses and the type arithmetic of every node."""
    if _validated.get(id(cert)) is cert:
        return
    _validate_node(cert)
    _validated[id(cert)] = cert


def _validate_node(cert: Certificate) -> None:
    if isinstance(cert, Leaf):
        if cert.kind not in LEAF_KINDS:
            raise CertificateError(f"unknown leaf kind {cert.kind!r}")
        if cert.kind == "shipped-table":
            if fixture_for_type(cert.target) != cert.fixture:
                raise CertificateError(f"fixture {cert.fixture} does not have type {format_type(cert.target)}")
        elif cert.kind == "existence-lemma":
            w = cert.axiom
            if w is None or w.lemma not in LEMMAS or not w.holds():
                raise CertificateError(f"lemma hypotheses fail for {format_type(cert.target)}: {w}")
            if w.group_type() != cert.target:
                raise CertificateError(f"lemma parameters {w} do not give {format_type(cert.target)}")
        elif cert.kind == "external-literature":
            if cert.citation == "small-order-table":
                if not small_order_table().get(cert.target):
                    raise CertificateError(f"{format_type(cert.target)} is not settled by the small-order table")
            elif cert.citation == "direct-constructions":
                if cert.target not in EXTERNAL_DIRECT:
                    raise CertificateError(f"{format_type(cert.target)} is not a cited direct construction")
            else:
                raise CertificateError(f"unknown citation {cert.citation!r}")
        if not _feasible(cert.target):
            raise CertificateError(f"leaf {format_type(cert.target)} is infeasible")
        return

    recipe = cert.recipe
    if recipe_result_type(recipe) != cert.target:
        raise CertificateError(f"recipe gives {format_type(recipe_result_type(recipe))}, "
                               f"not {format_type(cert.target)}")
    if cert.master.target != recipe.master_type:
        raise CertificateError("master certificate has the wrong type")
    validate_certificate(cert.master)
    if len(cert.fills) != len(recipe.fills):
        raise CertificateError("fill certificates do not line up with master groups")
    for i, child in enumerate(cert.fills):
        need = recipe.fill_design_type(i)
        if need is None:
            if child is not None or recipe.u != 0:
                raise CertificateError(f"group {i} kept whole needs u = 0 and no fill")
            continue
        if child is None or child.target != need:
            raise CertificateError(f"group {i} needs a fill of type {format_type(need)}")
        if recipe.u and recipe.u not in need.groups:
            raise CertificateError(f"fill {format_type(need)} has no group of size u={recipe.u}")
        validate_certificate(child)
    if recipe.final_fill is not None and recipe.final_fill.m > 1:
        if cert.final is None or cert.final.target != recipe.final_fill:
            raise CertificateError("final fill certificate missing or of the wrong type")
        validate_certificate(cert.final)
    elif cert.final is not None:
        raise CertificateError("unexpected final fill certificate")


def decide_range(v_max: int) -> dict[tuple[int, int], Decision]:
    """Decisions for every feasible 2^t 5^s with 2t + 5s <= v_max."""
    out = {}
    for s in range(v_max // 5 + 1):
        for t in range((v_max - 5 * s) // 2 + 1):
            if t + s == 0:
                continue
            d = decide(t, s)
            if d.verdict != INFEASIBLE:
                out[(t, s)] = d
    return out


__all__ = [
    "Certificate", "CertificateError", "Decision", "FillIn", "Leaf", "PlanError", "PlannerState",
    "decide", "decide_range", "plan", "plan_type", "planner_state", "render", "validate_certificate",
    "EXISTS", "DEFINITE_NONEXISTENCE", "POSSIBLE_EXCEPTION", "INFEASIBLE", "OPEN_CASES",
    "KNOWN_NONEXISTENT", "EXTERNAL_DIRECT", "RecipeError", "small_order_table",
]
