"""Group types and their exponential notation."""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

_TOKEN = re.compile(r"^(\d+)(?:\^(\d+))?$")


class TypeSyntaxError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GroupType:
    """Multiset of group sizes, stored in descending order."""

    groups: tuple[int, ...]

    def __post_init__(self) -> None:
        groups = tuple(sorted(map(int, self.groups), reverse=True))
        if groups and groups[-1] <= 0:
            raise ValueError(f"group sizes must be positive: {groups}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def of(cls, sizes: Iterable[int]) -> GroupType:
        return cls(tuple(sizes))

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> GroupType:
        return cls(tuple(g for g, e in counts.items() for _ in range(e)))

    @property
    def m(self) -> int:
        return len(self.groups)

    @property
    def v(self) -> int:
        return sum(self.groups)

    def counts(self) -> dict[int, int]:
        """Exponent of each size, largest size first."""
        return dict(sorted(Counter(self.groups).items(), reverse=True))

    def exponent(self, size: int) -> int:
        return self.groups.count(size)

    def __add__(self, other: GroupType) -> GroupType:
        return GroupType(self.groups + other.groups)

    def __sub__(self, other: GroupType) -> GroupType:
        left = Counter(self.groups)
        left.subtract(other.groups)
        if any(c < 0 for c in left.values()):
            raise ValueError(f"{format_type(other)} is not a sub-multiset of {format_type(self)}")
        return GroupType(tuple(left.elements()))

    def __str__(self) -> str:
        return format_type(self)


def parse_type(text: str) -> GroupType:
    """Parse exponential notation such as ``"2^2 5^5"`` or ``"5^8 14 20^1"``.

    A missing exponent means 1. Braces, commas and LaTeX-style ``{}`` around
    exponents are tolerated so types can be pasted from tables.
    """
    cleaned = text.replace("{", "").replace("}", "").replace(",", " ").strip()
    if not cleaned:
        raise TypeSyntaxError("empty group type")
    sizes: list[int] = []
    for token in cleaned.split():
        match = _TOKEN.match(token)
        if match is None:
            raise TypeSyntaxError(f"malformed token {token!r} in {text!r}")
        size = int(match.group(1))
        exp = int(match.group(2)) if match.group(2) is not None else 1
        if size == 0:
            raise TypeSyntaxError(f"zero group size in {text!r}")
        if exp == 0:
            raise TypeSyntaxError(f"zero exponent in {text!r}")
        sizes.extend([size] * exp)
    return GroupType(tuple(sizes))


def format_type(gt: GroupType) -> str:
    return " ".join(f"{g}^{e}" for g, e in gt.counts().items())


def as_type(value: GroupType | str | Iterable[int]) -> GroupType:
    if isinstance(value, GroupType):
        return value
    if isinstance(value, str):
        return parse_type(value)
    return GroupType(tuple(value))


@lru_cache(maxsize=4096)
def type_2t5s(t: int, s: int) -> GroupType:
    return GroupType((5,) * s + (2,) * t)


def point_block_sum(gt: GroupType) -> int:
    v = gt.v
    return sum(g * (v - g) for g in gt.groups)


def expected_block_count(gt: GroupType, k: int = 4) -> int:
    """Number of blocks every k-GDD of type ``gt`` has.

    Raises ValueError when the point-block count is not divisible by k(k-1),
    in which case no k-GDD of this type exists.
    """
    if k < 2:
        raise ValueError("block size must be at least 2")
    total = point_block_sum(gt)
    if total % (k * (k - 1)):
        raise ValueError(
            f"sum g_i(v-g_i) = {total} for {format_type(gt)} is not divisible by {k * (k - 1)}"
        )
    return total // (k * (k - 1))
