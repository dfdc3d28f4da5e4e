"""Known existence results for 4-GDDs of types g^p and g^p n^1.

These are accepted as axioms: a predicate says whether a published family
covers the parameters; no design is produced.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .grouptype import GroupType, as_type

# Identifiers for the families, with their hypotheses in words.
LEMMAS = {
    "gp": "g^p: p >= 4, g(p-1) = 0 mod 3, g^2 p(p-1) = 0 mod 12, (g,p) not (2,4) or (6,4)",
    "gpn1-0mod6": "g^p n^1, g = 0 mod 6: g >= 6, p >= 4, n = 0 mod 3, 0 <= n <= g(p-1)/2, not (6,4,0)",
    "gpn1-2or20": "g^p n^1, g in {2,20}: p >= 4, p = 0 mod 3, n = 2 mod 3, 2 <= n <= g(p-1)/2",
    "gpn1-3mod6": "g^p n^1, g = 3 mod 6, g <= 33: p >= 4, n = 0 mod 3, 0 <= n <= g(p-1)/2, "
                  "p(g(p-1) + 2n) = 0 mod 4",
    "gpn1-5": "5^p n^1: p >= 4 and p = 0 mod 12, n = 2 mod 3, 2 <= n <= 5(p-1)/2; "
              "or p = 3 mod 12, n = 5 mod 6, 5 <= n <= 5(p-1)/2; "
              "or p = 9 mod 12, n = 2 mod 6, 2 <= n <= 5(p-1)/2",
}

# 2^6 5^1 satisfies the printed hypotheses of the g in {2,20} family but is
# known not to exist (it is one of the small definite exceptions).
_EXCLUDED_2OR20 = {(2, 6, 5)}


def gp_holds(g: int, p: int) -> bool:
    return (
        g >= 1
        and p >= 4
        and g * (p - 1) % 3 == 0
        and g * g * p * (p - 1) % 12 == 0
        and (g, p) not in {(2, 4), (6, 4)}
    )


def gpn1_holds(lemma: str, g: int, p: int, n: int) -> bool:
    if g < 1 or p < 4 or n < 0:
        return False
    if lemma == "gpn1-0mod6":
        return g % 6 == 0 and n % 3 == 0 and 2 * n <= g * (p - 1) and (g, p, n) != (6, 4, 0)
    if lemma == "gpn1-2or20":
        return (
            g in (2, 20)
            and p % 3 == 0
            and n % 3 == 2
            and 2 <= n
            and 2 * n <= g * (p - 1)
            and (g, p, n) not in _EXCLUDED_2OR20
        )
    if lemma == "gpn1-3mod6":
        # the block count g*p*(g(p-1) + 2n)/12 must be integral; with g odd
        # and divisible by 3 that is p*(g(p-1) + 2n) = 0 mod 4
        return (g % 6 == 3 and g <= 33 and n % 3 == 0 and 2 * n <= g * (p - 1)
                and p * (g * (p - 1) + 2 * n) % 4 == 0)
    if lemma == "gpn1-5":
        if g != 5 or 2 * n > 5 * (p - 1):
            return False
        r = p % 12
        if r == 0:
            return n % 3 == 2 and n >= 2
        if r == 3:
            return n % 6 == 5 and n >= 5
        if r == 9:
            return n % 6 == 2 and n >= 2
        return False
    raise ValueError(f"unknown lemma {lemma!r}")


def exists_axiom(kind: str, g: int, p: int, n: int = 0) -> bool:
    """True iff some known family covers type g^p (kind ``gp``) or g^p n^1."""
    if kind == "gp":
        return gp_holds(g, p)
    if kind == "gpn1":
        return any(gpn1_holds(lemma, g, p, n) for lemma in LEMMAS if lemma.startswith("gpn1"))
    if kind in LEMMAS:
        return gpn1_holds(kind, g, p, n)
    raise ValueError(f"unknown axiom kind {kind!r}")


@dataclass(frozen=True)
class AxiomWitness:
    lemma: str
    g: int
    p: int
    n: int | None = None

    def holds(self) -> bool:
        if self.lemma == "gp":
            return self.n is None and gp_holds(self.g, self.p)
        return self.n is not None and gpn1_holds(self.lemma, self.g, self.p, self.n)

    def group_type(self) -> GroupType:
        groups = (self.g,) * self.p + (() if self.n is None else (self.n,))
        return GroupType(tuple(x for x in groups if x > 0))

    def __str__(self) -> str:
        if self.n is None:
            return f"{self.lemma}(g={self.g}, p={self.p})"
        return f"{self.lemma}(g={self.g}, p={self.p}, n={self.n})"


def shape_gpn1(gt: GroupType) -> tuple[int, int, int | None] | None:
    """Read ``gt`` as g^p (n None) or g^p n^1 with p >= 2; None otherwise."""
    counts = Counter(gt.groups)
    if len(counts) == 1:
        (g, p), = counts.items()
        return g, p, None
    if len(counts) == 2:
        (a, ca), (b, cb) = sorted(counts.items(), key=lambda kv: (-kv[1], -kv[0]))
        if cb == 1 and ca >= 2:
            return a, ca, b
        if ca == 1 and cb == 1:
            return None
    return None


def axiom_for_type(gt: GroupType | str) -> AxiomWitness | None:
    """First known family covering ``gt``, or None."""
    shape = shape_gpn1(as_type(gt))
    if shape is None:
        return None
    g, p, n = shape
    if n is None:
        return AxiomWitness("gp", g, p) if gp_holds(g, p) else None
    for lemma in ("gpn1-0mod6", "gpn1-2or20", "gpn1-3mod6", "gpn1-5"):
        if gpn1_holds(lemma, g, p, n):
            return AxiomWitness(lemma, g, p, n)
    return None
